#include "pitchside/knowledge_base.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <filesystem>
#include <regex>

#include "pitchside/error.hpp"
#include "pitchside/prompts.hpp"
#include "pitchside/text.hpp"

namespace pitchside::kb {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(EntityKind kind) noexcept {
    switch (kind) {
        case EntityKind::Player: return "player";
        case EntityKind::Team: return "team";
        case EntityKind::Referee: return "referee";
        case EntityKind::Venue: return "venue";
    }
    return "player";
}

EntityKind parse_kind(std::string_view text) {
    const auto k = text::to_lower(text::trim(text));
    if (k == "player" || k == "coach") return EntityKind::Player;
    if (k == "team") return EntityKind::Team;
    if (k == "referee") return EntityKind::Referee;
    if (k == "venue") return EntityKind::Venue;
    throw Error(ErrorKind::ParseError, "unknown entity kind '" + std::string(text) + "'", std::string(text));
}

EntityRecord parse_entity_file(std::string_view contents, const std::string& path) {
    const auto where = [&](std::size_t line) { return (path.empty() ? "<entity>" : path) + ":" + std::to_string(line); };
    EntityRecord rec;
    rec.source_path = path;
    bool have_kind = false;
    const auto lines = text::split_lines(contents);
    std::size_t i = 0;
    for (; i < lines.size(); ++i) {
        const auto line = text::trim(lines[i]);
        if (line == "---") break;
        if (line.empty()) continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos) throw Error(ErrorKind::ParseError, where(i + 1) + ": expected 'key: value'", line);
        const auto key = text::to_lower(text::trim(line.substr(0, colon)));
        const auto value = text::trim(line.substr(colon + 1));
        if (key == "kind") {
            try {
                rec.kind = parse_kind(value);
            } catch (const Error& e) {
                throw Error(ErrorKind::ParseError, where(i + 1) + ": " + e.what(), line);
            }
            have_kind = true;
        } else if (key == "name") {
            rec.name = value;
        } else if (key == "images") {
            for (auto& p : text::split(value, ",")) {
                auto t = text::trim(p);
                if (!t.empty()) rec.image_refs.push_back(std::move(t));
            }
        } else {
            throw Error(ErrorKind::ParseError, where(i + 1) + ": unknown header '" + key + "'", line);
        }
    }
    if (i == lines.size()) throw Error(ErrorKind::ParseError, where(lines.size()) + ": missing '---' separator", path);
    if (!have_kind) throw Error(ErrorKind::ParseError, where(1) + ": missing kind", path);
    if (rec.name.empty()) throw Error(ErrorKind::ParseError, where(1) + ": missing name", path);
    std::vector<std::string> body(lines.begin() + static_cast<std::ptrdiff_t>(i) + 1, lines.end());
    rec.page = text::trim(text::join(body, "\n"));
    if (rec.page.empty()) throw Error(ErrorKind::ParseError, where(i + 1) + ": empty page", path);
    return rec;
}

std::string render_entity_file(const EntityRecord& record) {
    std::string out = "kind: " + std::string(to_string(record.kind)) + "\n";
    out += "name: " + record.name + "\n";
    out += "images: " + text::join(record.image_refs, ", ") + "\n";
    out += "---\n" + record.page + "\n";
    return out;
}

namespace {

constexpr std::array<std::string_view, 11> kColumns = {"league", "season",    "date",      "year",
                                                       "month",  "day",       "time",      "score",
                                                       "home_team", "away_team", "file_path"};

constexpr std::array<std::string_view, 7> kLeagues = {"england_epl",      "germany_bundesliga",
                                                      "europe_uefa-champions-league", "italy_serie-a",
                                                      "france_league-1",  "spain_laliga",
                                                      "unknown"};

}  // namespace

bool is_known_league(std::string_view league) {
    return std::find(kLeagues.begin(), kLeagues.end(), league) != kLeagues.end();
}

std::vector<MatchRecord> parse_match_index(std::string_view contents, const std::string& base_dir) {
    const auto lines = text::split_lines(contents);
    std::vector<MatchRecord> rows;
    bool header_seen = false;
    for (std::size_t n = 0; n < lines.size(); ++n) {
        const auto& line = lines[n];
        if (text::trim(line).empty()) continue;
        const auto cells = text::split(line, "\t");
        const auto where = "match index line " + std::to_string(n + 1);
        if (!header_seen) {
            if (cells.size() != kColumns.size()) throw Error(ErrorKind::ParseError, where + ": bad header", line);
            for (std::size_t c = 0; c < kColumns.size(); ++c) {
                if (text::trim(cells[c]) != kColumns[c]) {
                    throw Error(ErrorKind::ParseError, where + ": expected column '" + std::string(kColumns[c]) + "'",
                                line);
                }
            }
            header_seen = true;
            continue;
        }
        if (cells.size() != kColumns.size()) {
            throw Error(ErrorKind::ParseError,
                        where + ": expected " + std::to_string(kColumns.size()) + " cells, got " +
                            std::to_string(cells.size()),
                        line);
        }
        std::array<std::string, 11> v;
        for (std::size_t c = 0; c < v.size(); ++c) v[c] = text::trim(cells[c]);
        MatchRecord r{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10]};
        if (!is_known_league(r.league)) throw Error(ErrorKind::ParseError, where + ": unknown league '" + r.league + "'", line);
        if (r.file_path.empty()) throw Error(ErrorKind::ParseError, where + ": empty file_path", line);
        if (!base_dir.empty() && fs::path(r.file_path).is_relative()) {
            r.file_path = (fs::path(base_dir) / r.file_path).lexically_normal().string();
        }
        rows.push_back(std::move(r));
    }
    if (!header_seen) throw Error(ErrorKind::ParseError, "match index has no header", "");
    return rows;
}

std::string render_match_index(const std::vector<MatchRecord>& rows) {
    std::string out;
    for (std::size_t c = 0; c < kColumns.size(); ++c) out += std::string(c ? "\t" : "") + std::string(kColumns[c]);
    out += "\n";
    for (const auto& r : rows) {
        out += text::join({r.league, r.season, r.date, r.year, r.month, r.day, r.time, r.score, r.home_team,
                           r.away_team, r.file_path},
                          "\t");
        out += "\n";
    }
    return out;
}

MatchDetail load_match_detail(const std::string& path) {
    const auto body = text::read_file(path);
    MatchDetail d;
    try {
        const auto doc = json::parse(body);
        if (!doc.is_object()) throw Error(ErrorKind::ParseError, path + ": match file must be an object", path);
        if (doc.contains("info")) d.info = doc.at("info");
        if (doc.contains("history")) {
            for (const auto& ev : doc.at("history")) {
                const auto field = [&](const char* k) {
                    if (!ev.contains(k) || ev.at(k).is_null()) return std::string();
                    return ev.at(k).is_string() ? ev.at(k).get<std::string>() : ev.at(k).dump();
                };
                d.history.push_back({field("minute"), field("type"), field("team"), field("player"), field("detail")});
            }
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, path + ": " + e.what(), path);
    }
    return d;
}

std::string render_info(const MatchDetail& detail) {
    std::string out;
    for (const auto& [key, value] : detail.info.items()) {
        if (!out.empty()) out += "\n";
        out += key + ": " + (value.is_string() ? value.get<std::string>() : value.dump());
    }
    return out.empty() ? "(no match information recorded)" : out;
}

std::string render_history(const MatchDetail& detail) {
    std::string out;
    for (const auto& e : detail.history) {
        if (!out.empty()) out += "\n";
        std::string line = e.minute.empty() ? "" : e.minute + "' ";
        line += e.type;
        if (!e.team.empty()) line += " | " + e.team;
        if (!e.player.empty()) line += " | " + e.player;
        if (!e.detail.empty()) line += " | " + e.detail;
        out += line;
    }
    return out.empty() ? "(no match events recorded)" : out;
}

// --- corpus -------------------------------------------------------------

namespace {

std::string kind_prefixed(EntityKind kind, std::string_view key) {
    return std::string(to_string(kind)) + "\x1f" + std::string(key);
}

}  // namespace

Corpus Corpus::ingest(const std::string& entity_dir, const std::string& match_index_path) {
    Corpus c;
    if (!entity_dir.empty()) {
        if (!fs::is_directory(entity_dir)) throw Error(ErrorKind::FileMissing, "entity directory not found: " + entity_dir, entity_dir);
        std::vector<std::string> files;
        for (const auto& entry : fs::recursive_directory_iterator(entity_dir)) {
            if (entry.is_regular_file()) files.push_back(entry.path().string());
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) c.add_entity(parse_entity_file(text::read_file(f), f));
    }
    if (!match_index_path.empty()) {
        const auto base = fs::path(match_index_path).parent_path().string();
        for (auto& row : parse_match_index(text::read_file(match_index_path), base)) c.add_match(std::move(row));
    }
    return c;
}

void Corpus::add_entity(EntityRecord record) {
    if (text::trim(record.page).empty()) {
        throw Error(ErrorKind::ParseError, "entity '" + record.name + "' has an empty page", record.source_path);
    }
    const auto norm = text::normalize(record.name);
    if (norm.empty()) throw Error(ErrorKind::ParseError, "entity name is empty after normalization", record.name);
    const auto nkey = kind_prefixed(record.kind, norm);
    if (normalized_.count(nkey)) {
        throw Error(ErrorKind::ParseError,
                    "duplicate " + std::string(to_string(record.kind)) + " '" + record.name + "'" +
                        (record.source_path.empty() ? "" : " in " + record.source_path),
                    record.name);
    }
    const auto idx = entities_.size();
    exact_.emplace(record.name, idx);
    normalized_.emplace(nkey, idx);
    keyed_.emplace(text::name_key(record.name), idx);
    entities_.push_back(std::move(record));
}

void Corpus::add_match(MatchRecord record) { matches_.push_back(std::move(record)); }

EntityLookup Corpus::lookup(std::string_view name, std::optional<EntityKind> kind) const {
    const auto accept = [&](std::size_t i) { return !kind || entities_[i].kind == *kind; };
    // A level yields a result only when exactly one record (after the kind filter) qualifies.
    const auto unique_in = [&](const std::multimap<std::string, std::size_t>& index,
                               const std::string& key) -> std::optional<std::size_t> {
        std::optional<std::size_t> found;
        auto [lo, hi] = index.equal_range(key);
        for (auto it = lo; it != hi; ++it) {
            if (!accept(it->second)) continue;
            if (found) return std::nullopt;
            found = it->second;
        }
        return found;
    };

    const std::string exact(name);
    if (auto i = unique_in(exact_, exact)) return {&entities_[*i], MatchLevel::Exact};

    const auto norm = text::normalize(name);
    if (norm.empty()) return {};
    if (kind) {
        if (auto i = unique_in(normalized_, kind_prefixed(*kind, norm))) return {&entities_[*i], MatchLevel::Normalized};
    } else {
        std::optional<std::size_t> found;
        bool ambiguous = false;
        for (auto k : {EntityKind::Player, EntityKind::Team, EntityKind::Referee, EntityKind::Venue}) {
            auto it = normalized_.find(kind_prefixed(k, norm));
            if (it == normalized_.end()) continue;
            if (found) ambiguous = true;
            found = it->second;
        }
        if (found && !ambiguous) return {&entities_[*found], MatchLevel::Normalized};
    }
    if (auto i = unique_in(keyed_, text::name_key(name))) return {&entities_[*i], MatchLevel::Normalized};

    const std::size_t bound = norm.size() / 5;  // floor(0.2 * length)
    std::size_t best = bound + 1;
    std::optional<std::size_t> best_idx;
    bool tie = false;
    for (std::size_t i = 0; i < entities_.size(); ++i) {
        if (!accept(i)) continue;
        const auto d = text::levenshtein(norm, text::normalize(entities_[i].name));
        if (d < best) {
            best = d;
            best_idx = i;
            tie = false;
        } else if (d == best && best_idx) {
            tie = true;
        }
    }
    if (best_idx && !tie) return {&entities_[*best_idx], MatchLevel::Fuzzy};
    return {};
}

// --- match queries ------------------------------------------------------

bool is_unknown(std::string_view value) {
    const auto v = text::to_lower(text::trim(value));
    return v.empty() || v == "unknown";
}

MatchQuery parse_match_query(std::string_view response) {
    MatchQuery q;
    const std::map<std::string, std::string*> fields = {
        {"league", &q.league}, {"season", &q.season}, {"date", &q.date},   {"year", &q.year},
        {"month", &q.month},   {"day", &q.day},       {"time", &q.time},   {"score", &q.score},
        {"team1", &q.team1},   {"team2", &q.team2}};
    bool any = false;
    for (const auto& raw : text::split_lines(response)) {
        auto line = text::trim(raw);
        while (!line.empty() && (line.front() == '-' || line.front() == '*')) line = text::trim(line.substr(1));
        const auto colon = line.find(':');
        if (colon == std::string::npos) continue;
        auto key = text::to_lower(text::trim(line.substr(0, colon)));
        key.erase(std::remove(key.begin(), key.end(), '*'), key.end());
        key.erase(std::remove(key.begin(), key.end(), ' '), key.end());
        auto it = fields.find(key);
        if (it == fields.end()) continue;
        any = true;
        auto value = text::trim(line.substr(colon + 1));
        if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front()) {
            value = value.substr(1, value.size() - 2);
        }
        // Placeholder echoes from the format description are not values.
        if (value.find("xx") != std::string::npos || value == "yyy" || value.find('(') != std::string::npos) {
            value = std::string(kUnknown);
        }
        *it->second = is_unknown(value) ? std::string(kUnknown) : value;
    }
    if (!any) {
        throw Error(ErrorKind::ExtractionMalformed, "no labelled match fields in extraction output",
                    std::string(response.substr(0, 200)));
    }
    if (is_unknown(q.team1) && !is_unknown(q.team2)) std::swap(q.team1, q.team2);
    if (!is_unknown(q.league)) q.league = text::to_lower(q.league);
    return q;
}

std::string render_match_query(const MatchQuery& q) {
    return "league: " + q.league + "\nseason: " + q.season + "\ndate: " + q.date + "\nyear: " + q.year +
           "\nmonth: " + q.month + "\nday: " + q.day + "\ntime: " + q.time + "\nscore: " + q.score +
           "\nteam1: " + q.team1 + "\nteam2: " + q.team2;
}

std::string canonical_time(std::string_view time) {
    static const std::regex kTime(R"(^\s*(\d{1,2})\s*[:\-.hH]\s*(\d{2})\s*$)");
    const std::string s(time);
    std::smatch m;
    if (!std::regex_match(s, m, kTime)) return text::to_lower(text::trim(s));
    auto hh = m[1].str();
    if (hh.size() == 1) hh = "0" + hh;
    return hh + ":" + m[2].str();
}

std::string canonical_score(std::string_view score) {
    std::string out;
    for (char c : score) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        out += c == ':' ? '-' : c;
    }
    return text::to_lower(out);
}

namespace {

bool in_order_subsequence(const std::vector<std::string>& needle, const std::vector<std::string>& hay) {
    std::size_t j = 0;
    for (std::size_t i = 0; i < hay.size() && j < needle.size(); ++i) {
        if (hay[i] == needle[j]) ++j;
    }
    return j == needle.size();
}

std::optional<long> as_number(std::string_view s) {
    const auto t = text::trim(s);
    if (t.empty() || t.size() > 9 || !std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); })) {
        return std::nullopt;
    }
    return std::stol(t);
}

bool scalar_conflict(std::string_view q, std::string_view c, std::string (*canon)(std::string_view)) {
    if (is_unknown(q) || is_unknown(c)) return false;
    return canon(q) != canon(c);
}

std::string canonical_plain(std::string_view s) { return text::to_lower(text::trim(s)); }

std::string canonical_season(std::string_view s) {
    auto out = canonical_score(s);
    std::replace(out.begin(), out.end(), '/', '-');
    return out;
}

bool numeric_conflict(std::string_view q, std::string_view c) {
    if (is_unknown(q) || is_unknown(c)) return false;
    const auto a = as_number(q), b = as_number(c);
    if (a && b) return *a != *b;
    return canonical_plain(q) != canonical_plain(c);
}

}  // namespace

bool team_contains(std::string_view query_team, std::string_view candidate_team) {
    const auto a = text::tokens(text::normalize(query_team));
    const auto b = text::tokens(text::normalize(candidate_team));
    if (a.empty() || b.empty()) return false;
    return in_order_subsequence(a, b) || in_order_subsequence(b, a);
}

std::vector<MatchRecord> filter_candidates(const MatchQuery& query, const std::vector<MatchRecord>& candidates) {
    std::vector<MatchRecord> out;
    for (const auto& c : candidates) {
        bool keep = true;
        for (const auto* team : {&query.team1, &query.team2}) {
            if (is_unknown(*team)) continue;
            if (!team_contains(*team, c.home_team) && !team_contains(*team, c.away_team)) keep = false;
        }
        keep = keep && !scalar_conflict(query.league, c.league, canonical_plain) &&
               !scalar_conflict(query.season, c.season, canonical_season) &&
               !scalar_conflict(query.date, c.date, canonical_plain) &&
               !scalar_conflict(query.time, c.time, canonical_time) &&
               !scalar_conflict(query.score, c.score, canonical_score) && !numeric_conflict(query.year, c.year) &&
               !numeric_conflict(query.month, c.month) && !numeric_conflict(query.day, c.day);
        if (keep) out.push_back(c);
    }
    return out;
}

MatchQuery extract_match_query(gateway::Gateway& gateway, std::string_view question) {
    auto request = gateway::ChatRequest::user(
        std::string(prompts::kGameSearchExtract) +
            prompts::fill(prompts::kGameSearchExtractQuestion, {{"question", std::string(question)}}),
        "tool:Game Search");
    for (int attempt = 0;; ++attempt) {
        const auto raw = gateway.complete(request).text;
        try {
            return parse_match_query(raw);
        } catch (const Error& e) {
            if (attempt >= 1) throw;
            request.messages.push_back({gateway::Role::Assistant, raw});
            request.messages.push_back({gateway::Role::User, prompts::fill(prompts::kFormatRepair, {{"error", e.what()}})});
        }
    }
}

std::string candidate_block(std::size_t index, const MatchRecord& r) {
    return "Candidate " + std::to_string(index) + ":\n\n- League: " + r.league + "\n\n- Season: " + r.season +
           "\n\n- Date: " + r.date + "\n\n- Year: " + r.year + "\n\n- Month: " + r.month + "\n\n- Day: " + r.day +
           "\n\n- Time: " + r.time + "\n\n- Score: " + r.score + "\n\n- Home Team: " + r.home_team +
           "\n\n- Away Team: " + r.away_team + "\n\n- file_path: " + r.file_path;
}

std::string candidate_summary(const MatchRecord& r) {
    return "League: " + r.league + ", Season: " + r.season + ", Date: " + r.date + ", Time: " + r.time +
           ", Score: " + r.score + ", Home Team: " + r.home_team + ", Away Team: " + r.away_team;
}

namespace {

std::string single_message(const std::string& path) {
    return "Based on the given information, we found the most probable match in the database with this file path: " +
           path;
}

}  // namespace

SearchOutcome game_search(const Corpus& corpus, gateway::Gateway& gateway, std::string_view question) {
    SearchOutcome out;
    out.query = extract_match_query(gateway, question);
    const auto survivors = filter_candidates(out.query, corpus.matches());
    if (survivors.empty()) {
        out.kind = SearchOutcome::Kind::None;
        out.message = "There is no matching file in the match database for the given information.";
        return out;
    }
    if (survivors.size() == 1) {
        out.kind = SearchOutcome::Kind::Single;
        out.file_path = survivors.front().file_path;
        out.message = single_message(out.file_path);
        return out;
    }

    const auto shown = std::min(survivors.size(), kMaxDisambiguationCandidates);
    std::vector<std::string> blocks;
    for (std::size_t i = 0; i < shown; ++i) blocks.push_back(candidate_block(i + 1, survivors[i]));
    const auto prompt = prompts::fill(prompts::kGameSearchSelect, {{"question", std::string(question)},
                                                                    {"info", render_match_query(out.query)},
                                                                    {"candidates", text::join(blocks, "\n\n")}});
    const auto reply = gateway.complete(gateway::ChatRequest::user(prompt, "tool:Game Search")).text;

    // Only a path from the candidate set counts; longest first so prefixes do not shadow.
    std::vector<const MatchRecord*> ordered;
    for (std::size_t i = 0; i < shown; ++i) ordered.push_back(&survivors[i]);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const auto* a, const auto* b) { return a->file_path.size() > b->file_path.size(); });
    std::vector<std::string> named;
    std::string scratch = reply;
    for (const auto* r : ordered) {
        if (text::contains(scratch, r->file_path)) {
            named.push_back(r->file_path);
            scratch = text::replace_all(scratch, r->file_path, "");
        }
    }
    if (named.size() == 1) {
        out.kind = SearchOutcome::Kind::Single;
        out.file_path = named.front();
        out.message = single_message(out.file_path);
        return out;
    }
    out.kind = SearchOutcome::Kind::Ambiguous;
    for (std::size_t i = 0; i < shown; ++i) out.candidates.push_back(candidate_summary(survivors[i]));
    out.message = "The information provided is too vague to identify a single match. Candidate matches:";
    return out;
}

std::string render_outcome(const SearchOutcome& outcome) {
    if (outcome.kind != SearchOutcome::Kind::Ambiguous) return outcome.message;
    std::string out = outcome.message;
    for (std::size_t i = 0; i < outcome.candidates.size(); ++i) {
        out += "\n" + std::to_string(i + 1) + ". " + outcome.candidates[i];
    }
    return out;
}

std::string game_info_retrieval(gateway::Gateway& gateway, std::string_view query, const std::string& match_file) {
    const auto detail = load_match_detail(match_file);
    const auto prompt =
        prompts::fill(prompts::kGameInfo, {{"query", std::string(query)}, {"match_info", render_info(detail)}});
    return gateway.complete(gateway::ChatRequest::user(prompt, "tool:Game Info Retrieval")).text;
}

std::string match_history_retrieval(gateway::Gateway& gateway, std::string_view query, const std::string& match_file) {
    const auto detail = load_match_detail(match_file);
    const auto prompt = prompts::fill(prompts::kMatchHistory,
                                      {{"query", std::string(query)}, {"match_history", render_history(detail)}});
    return gateway.complete(gateway::ChatRequest::user(prompt, "tool:Match History Retrieval")).text;
}

// --- entity search ------------------------------------------------------

std::pair<std::string, std::string> parse_entity_tuple(std::string_view response) {
    static const std::regex kTuple(R"re(\(\s*["']?([A-Za-z]+)["']?\s*,\s*["']([^"']*)["']\s*\)|\(\s*([A-Za-z]+)\s*,\s*([^()]*?)\s*\))re");
    const std::string s(response);
    std::smatch m;
    if (!std::regex_search(s, m, kTuple)) {
        throw Error(ErrorKind::TupleMalformed, "no (type, name) tuple in entity search output",
                    std::string(response.substr(0, 200)));
    }
    std::string kind = m[1].matched ? m[1].str() : m[3].str();
    std::string name = m[1].matched ? m[2].str() : m[4].str();
    kind = text::to_lower(text::trim(kind));
    name = text::trim(name);
    static const std::array<std::string_view, 6> kKinds = {"player", "team", "referee", "venue", "coach", "unknown"};
    if (std::find(kKinds.begin(), kKinds.end(), kind) == kKinds.end()) {
        throw Error(ErrorKind::TupleMalformed, "unknown entity type '" + kind + "'", s);
    }
    if (kind == "coach") kind = "player";
    if (name.empty()) name = std::string(kUnknown);
    return {kind, name};
}

EntitySearchResult entity_search(const Corpus& corpus, gateway::Gateway& gateway, std::string_view question) {
    auto request = gateway::ChatRequest::user(
        std::string(prompts::kEntitySearch) +
            prompts::fill(prompts::kEntitySearchQuestion, {{"question", std::string(question)}}),
        "tool:Textual Entity Search");
    std::pair<std::string, std::string> tuple;
    for (int attempt = 0;; ++attempt) {
        const auto raw = gateway.complete(request).text;
        try {
            tuple = parse_entity_tuple(raw);
            break;
        } catch (const Error& e) {
            if (attempt >= 1) throw;
            request.messages.push_back({gateway::Role::Assistant, raw});
            request.messages.push_back({gateway::Role::User, prompts::fill(prompts::kFormatRepair, {{"error", e.what()}})});
        }
    }
    EntitySearchResult out{tuple.first, tuple.second, {}};
    if (is_unknown(out.kind) || is_unknown(out.name)) return out;
    out.lookup = corpus.lookup(out.name, parse_kind(out.kind));
    return out;
}

}  // namespace pitchside::kb
