#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "pitchside/model_gateway.hpp"

namespace pitchside::kb {

enum class EntityKind { Player, Team, Referee, Venue };

std::string_view to_string(EntityKind kind) noexcept;
// "coach" maps to Player. Throws ParseError on anything else.
EntityKind parse_kind(std::string_view text);

struct EntityRecord {
    EntityKind kind = EntityKind::Player;
    std::string name;
    std::string page;
    std::vector<std::string> image_refs;
    std::string source_path;  // file the record was read from; empty for in-memory records
};

// Entity file:
//
//   kind: player
//   name: Lionel Messi
//   images: a.png, b.png
//   ---
//   page body ...
EntityRecord parse_entity_file(std::string_view contents, const std::string& path = {});
std::string render_entity_file(const EntityRecord& record);

inline constexpr std::string_view kUnknown = "unknown";

struct MatchRecord {
    std::string league;
    std::string season;
    std::string date;
    std::string year;
    std::string month;
    std::string day;
    std::string time;
    std::string score;
    std::string home_team;
    std::string away_team;
    std::string file_path;

    friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

bool is_known_league(std::string_view league);

// Tab-separated with a header row naming exactly these columns:
// league season date year month day time score home_team away_team file_path.
// Relative file paths are resolved against base_dir.
std::vector<MatchRecord> parse_match_index(std::string_view contents, const std::string& base_dir = {});
std::string render_match_index(const std::vector<MatchRecord>& rows);

struct MatchEvent {
    std::string minute;
    std::string type;
    std::string team;
    std::string player;
    std::string detail;
};

struct MatchDetail {
    nlohmann::json info = nlohmann::json::object();
    std::vector<MatchEvent> history;
};

// JSON {info: {...}, history: [{minute, type, team, player, detail}, ...]}.
MatchDetail load_match_detail(const std::string& path);
std::string render_info(const MatchDetail& detail);
std::string render_history(const MatchDetail& detail);

enum class MatchLevel { None, Exact, Normalized, Fuzzy };

struct EntityLookup {
    const EntityRecord* record = nullptr;
    MatchLevel level = MatchLevel::None;
};

struct CorpusStats {
    std::size_t entities = 0;
    std::size_t matches = 0;
};

// Immutable after ingest; all queries are read-only.
class Corpus {
public:
    // Either argument may be empty. Entity files are read in sorted path order.
    static Corpus ingest(const std::string& entity_dir, const std::string& match_index_path);

    // Throws ParseError on a duplicate (kind, normalized name) or an empty page.
    void add_entity(EntityRecord record);
    void add_match(MatchRecord record);

    // Exact name, then normalized name (case, punctuation, diacritics, word
    // order), then the closest name within edit distance floor(0.2 * length)
    // when that closest name is unique.
    EntityLookup lookup(std::string_view name, std::optional<EntityKind> kind = std::nullopt) const;

    const std::vector<EntityRecord>& entities() const noexcept { return entities_; }
    const std::vector<MatchRecord>& matches() const noexcept { return matches_; }
    CorpusStats stats() const noexcept { return {entities_.size(), matches_.size()}; }

private:
    std::vector<EntityRecord> entities_;
    std::vector<MatchRecord> matches_;
    std::multimap<std::string, std::size_t> exact_;
    std::multimap<std::string, std::size_t> normalized_;
    std::multimap<std::string, std::size_t> keyed_;
};

// --- game search --------------------------------------------------------

struct MatchQuery {
    std::string league{kUnknown};
    std::string season{kUnknown};
    std::string date{kUnknown};
    std::string year{kUnknown};
    std::string month{kUnknown};
    std::string day{kUnknown};
    std::string time{kUnknown};
    std::string score{kUnknown};
    std::string team1{kUnknown};
    std::string team2{kUnknown};

    friend bool operator==(const MatchQuery&, const MatchQuery&) = default;
};

bool is_unknown(std::string_view value);

// Reads the ten labelled "field: value" lines. Missing or unreadable fields
// stay unknown; a lone team2 moves to team1. Throws ExtractionMalformed when
// no labelled line is present at all.
MatchQuery parse_match_query(std::string_view response);
std::string render_match_query(const MatchQuery& query);

// Canonical forms used for comparison: "18-00" -> "18:00", "2 - 1" -> "2-1".
std::string canonical_time(std::string_view time);
std::string canonical_score(std::string_view score);

// True when the normalized tokens of one name occur in order within the other.
bool team_contains(std::string_view query_team, std::string_view candidate_team);

// Keeps candidates that pass team containment for every known query team and
// contradict no known scalar field.
std::vector<MatchRecord> filter_candidates(const MatchQuery& query, const std::vector<MatchRecord>& candidates);

MatchQuery extract_match_query(gateway::Gateway& gateway, std::string_view question);

struct SearchOutcome {
    enum class Kind { Single, Ambiguous, None };
    Kind kind = Kind::None;
    std::string file_path;
    std::string message;
    std::vector<std::string> candidates;  // summaries without file paths
    MatchQuery query;
};

std::string candidate_block(std::size_t index, const MatchRecord& row);
std::string candidate_summary(const MatchRecord& row);

inline constexpr std::size_t kMaxDisambiguationCandidates = 20;

SearchOutcome game_search(const Corpus& corpus, gateway::Gateway& gateway, std::string_view question);
std::string render_outcome(const SearchOutcome& outcome);

std::string game_info_retrieval(gateway::Gateway& gateway, std::string_view query, const std::string& match_file);
std::string match_history_retrieval(gateway::Gateway& gateway, std::string_view query, const std::string& match_file);

// --- entity search ------------------------------------------------------

// ("type", "name") with or without quotes. Throws TupleMalformed.
std::pair<std::string, std::string> parse_entity_tuple(std::string_view response);

struct EntitySearchResult {
    std::string kind;
    std::string name;
    EntityLookup lookup;
};

EntitySearchResult entity_search(const Corpus& corpus, gateway::Gateway& gateway, std::string_view question);

}  // namespace pitchside::kb
