#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

// Small string helpers shared by the parsers, the knowledge base and the harness.
namespace pitchside::text {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
bool contains(std::string_view haystack, std::string_view needle);

std::vector<std::string> split(std::string_view s, std::string_view sep);
std::vector<std::string> split_lines(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string replace_all(std::string s, std::string_view from, std::string_view to);

// Case-fold, fold Latin diacritics to ASCII, turn punctuation into spaces and
// collapse whitespace. "Atlético de Madrid!" -> "atletico de madrid".
std::string normalize(std::string_view s);
// Whitespace-separated pieces, verbatim.
std::vector<std::string> tokens(std::string_view s);

// Normalized tokens sorted lexicographically and re-joined, so that word order
// does not matter: "Messi, Lionel" and "lionel messi" share a key.
std::string name_key(std::string_view s);

std::size_t levenshtein(std::string_view a, std::string_view b);

// 64-bit FNV-1a; stable across platforms, used for seed derivation.
std::uint64_t fnv1a64(std::string_view s, std::uint64_t seed = 0xcbf29ce484222325ULL);

std::string read_file(const std::string& path);
void write_file_atomic(const std::string& path, std::string_view contents);

}  // namespace pitchside::text
