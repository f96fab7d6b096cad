#include <gtest/gtest.h>

#include "pitchside/error.hpp"
#include "pitchside/knowledge_base.hpp"
#include "pitchside/text.hpp"
#include "support.hpp"

using namespace pitchside;
using namespace pitchside::kb;
using gateway::MatchKind;
using gateway::ScriptRecord;
using gateway::ScriptedGateway;

namespace {

const std::string kChelseaBurnley = "corpus/matches/2015-02-21_chelsea_burnley.json";

std::string extraction(const std::string& date, const std::string& time, const std::string& team1,
                       const std::string& team2) {
    return "league: unknown\n\nseason: unknown\n\ndate: " + date + "\n\nyear: unknown\n\nmonth: unknown\n\nday: unknown\n\n"
           "time: " + time + "\n\nscore: unknown\n\nteam1: " + team1 + "\n\nteam2: " + team2;
}

MatchRecord row(std::string home, std::string away) {
    MatchRecord r{"england_epl", "2014-2015", "2015-01-01", "2015", "01", "01", "15:00", "1 - 0",
                  std::move(home), std::move(away), "m.json"};
    return r;
}

MatchQuery teams(std::string t1, std::string t2 = std::string(kUnknown)) {
    MatchQuery q;
    q.team1 = std::move(t1);
    q.team2 = std::move(t2);
    return q;
}

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::ConfigError;
}

}  // namespace

TEST(KnowledgeBase, IngestsFixtureCorpus) {
    const auto corpus = support::fixture_corpus();
    EXPECT_EQ(corpus->stats().entities, 4u);
    EXPECT_EQ(corpus->stats().matches, 3u);
    EXPECT_EQ(corpus->matches()[0].file_path, kChelseaBurnley);
    EXPECT_EQ(corpus->entities()[0].name, "Camp Nou");
}

TEST(KnowledgeBase, EntityFileRoundTrip) {
    const auto rec = parse_entity_file(text::read_file("corpus/entities/lionel_messi.txt"), "x.txt");
    EXPECT_EQ(rec.kind, EntityKind::Player);
    EXPECT_EQ(rec.image_refs, std::vector<std::string>{"media/messi.png"});
    EXPECT_NE(rec.page.find("La Masia in 2000"), std::string::npos);
    const auto again = parse_entity_file(render_entity_file(rec));
    EXPECT_EQ(again.name, rec.name);
    EXPECT_EQ(again.page, rec.page);
    EXPECT_EQ(again.image_refs, rec.image_refs);
}

TEST(KnowledgeBase, EntityFileErrors) {
    EXPECT_EQ(kind_of([] { parse_entity_file("kind: player\n---\nbody"); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([] { parse_entity_file("kind: manager\nname: X\n---\nbody"); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([] { parse_entity_file("kind: team\nname: X\ncolour: blue\n---\nbody"); }), ErrorKind::ParseError);
    EXPECT_EQ(kind_of([] { parse_entity_file("kind: team\nname: X\n---\n  \n"); }), ErrorKind::ParseError);
    EXPECT_EQ(parse_kind("coach"), EntityKind::Player);
}

TEST(KnowledgeBase, DuplicateEntityRejected) {
    Corpus c;
    c.add_entity({EntityKind::Player, "Lionel Messi", "page", {}, ""});
    EXPECT_EQ(kind_of([&] { c.add_entity({EntityKind::Player, "lionel  MESSI", "other", {}, ""}); }),
              ErrorKind::ParseError);
    c.add_entity({EntityKind::Team, "Lionel Messi", "a team", {}, ""});
    EXPECT_EQ(c.stats().entities, 2u);
}

TEST(KnowledgeBase, MatchIndexRoundTripAndErrors) {
    const auto text = text::read_file("corpus/matches.tsv");
    const auto rows = parse_match_index(text);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(parse_match_index(render_match_index(rows)), rows);
    EXPECT_EQ(parse_match_index(text, "corpus")[2].file_path, "corpus/matches/2014-04-29_bayern_real.json");
    EXPECT_EQ(kind_of([] { parse_match_index("league\tseason\n"); }), ErrorKind::ParseError);
    auto bad = text::replace_all(text, "england_epl\t2014-2015\t2015-02-21", "scottish_prem\t2014-2015\t2015-02-21");
    EXPECT_EQ(kind_of([&] { parse_match_index(bad); }), ErrorKind::ParseError);
}

TEST(KnowledgeBase, LookupLevels) {
    const auto corpus = support::fixture_corpus();
    EXPECT_EQ(corpus->lookup("Lionel Messi").level, MatchLevel::Exact);
    const auto swapped = corpus->lookup("messi, lionel");
    ASSERT_NE(swapped.record, nullptr);
    EXPECT_EQ(swapped.record->name, "Lionel Messi");
    EXPECT_EQ(swapped.level, MatchLevel::Normalized);
    const auto typo = corpus->lookup("Lionel Mesi");
    ASSERT_NE(typo.record, nullptr);
    EXPECT_EQ(typo.level, MatchLevel::Fuzzy);
    EXPECT_EQ(corpus->lookup("Cristiano Ronaldo").record, nullptr);
    EXPECT_EQ(corpus->lookup("Lionel Messi", EntityKind::Team).record, nullptr);
    EXPECT_EQ(corpus->lookup("CAMP NOU", EntityKind::Venue).record->name, "Camp Nou");
}

TEST(KnowledgeBase, ParsesExtraction) {
    const auto q = parse_match_query(extraction("2015-02-21", "18:00", "Chelsea", "Burnley"));
    EXPECT_EQ(q.date, "2015-02-21");
    EXPECT_EQ(q.time, "18:00");
    EXPECT_EQ(q.team1, "Chelsea");
    EXPECT_EQ(q.team2, "Burnley");
    EXPECT_EQ(q.league, "unknown");

    const auto lone = parse_match_query("team1: unknown\nteam2: Chelsea\nseason: xxxx-xxxx\ndate: 2015-xx-xx");
    EXPECT_EQ(lone.team1, "Chelsea");
    EXPECT_TRUE(is_unknown(lone.team2));
    EXPECT_TRUE(is_unknown(lone.season));
    EXPECT_TRUE(is_unknown(lone.date));
    EXPECT_TRUE(is_unknown(lone.score));

    EXPECT_EQ(kind_of([] { parse_match_query("I cannot tell."); }), ErrorKind::ExtractionMalformed);
    EXPECT_EQ(parse_match_query(render_match_query(q)), q);
}

TEST(KnowledgeBase, ExtractsWithGateway) {
    ScriptedGateway gw({{"Input text:", MatchKind::Substring, extraction("2015-02-21", "18:00", "Chelsea", "Burnley"),
                         "tool:Game Search"}});
    const auto q = extract_match_query(gw, "What was the final score of the game 2015-02-21 - 18-00 Chelsea vs Burnley?");
    EXPECT_EQ(q.team1, "Chelsea");
    EXPECT_EQ(q.time, "18:00");
}

TEST(KnowledgeBase, ExtractionRetriesOnce) {
    ScriptedGateway gw({{"could not be parsed", MatchKind::Substring, "team1: Chelsea", "tool:Game Search"},
                        {"Input text:", MatchKind::Substring, "Sorry.", "tool:Game Search"}});
    EXPECT_EQ(extract_match_query(gw, "Chelsea?").team1, "Chelsea");
    ScriptedGateway never({{"Input text:", MatchKind::Substring, "Sorry.", "tool:Game Search"}});
    EXPECT_EQ(kind_of([&] { extract_match_query(never, "Chelsea?"); }), ErrorKind::ExtractionMalformed);
}

TEST(KnowledgeBase, CanonicalForms) {
    EXPECT_EQ(canonical_time("18-00"), "18:00");
    EXPECT_EQ(canonical_time("9.30"), "09:30");
    EXPECT_EQ(canonical_time("18h00"), "18:00");
    EXPECT_EQ(canonical_score("2 - 1"), "2-1");
    EXPECT_EQ(canonical_score("2:1"), "2-1");
}

TEST(KnowledgeBase, TeamContainment) {
    EXPECT_TRUE(team_contains("Chelsea", "Chelsea FC"));
    EXPECT_TRUE(team_contains("West Ham", "West Ham United"));
    EXPECT_TRUE(team_contains("Chelsea FC", "chelsea"));
    EXPECT_TRUE(team_contains("Atletico Madrid", "Atlético de Madrid"));
    EXPECT_FALSE(team_contains("Ham West", "West Ham United"));
    EXPECT_FALSE(team_contains("Chelsea", "Burnley"));
}

TEST(KnowledgeBase, LiteralTeamExamples) {
    EXPECT_TRUE(filter_candidates(teams("Chelsea", "West Ham"), {row("chelsea FC", "Liverpool")}).empty());
    EXPECT_EQ(filter_candidates(teams("Chelsea", "West Ham"), {row("Chelsea FC", "West Ham United")}).size(), 1u);
    EXPECT_TRUE(filter_candidates(teams("Chelsea"), {row("Bayern Munich", "Real Madrid")}).empty());
    EXPECT_EQ(filter_candidates(teams("Chelsea"), {row("Liverpool", "Chelsea FC")}).size(), 1u);
}

TEST(KnowledgeBase, ScalarFieldsFilter) {
    const auto corpus = support::fixture_corpus();
    auto q = teams("Chelsea");
    EXPECT_EQ(filter_candidates(q, corpus->matches()).size(), 2u);
    q.time = "18-00";
    EXPECT_EQ(filter_candidates(q, corpus->matches()).size(), 1u);
    q = teams("Chelsea");
    q.score = "1:0";
    EXPECT_EQ(filter_candidates(q, corpus->matches()).front().away_team, "Chelsea");
    q = teams("Chelsea");
    q.month = "3";
    EXPECT_EQ(filter_candidates(q, corpus->matches()).size(), 1u);
    q = MatchQuery{};
    q.season = "2013/2014";
    EXPECT_EQ(filter_candidates(q, corpus->matches()).size(), 1u);
}

TEST(KnowledgeBase, GameSearchSingle) {
    const auto corpus = support::fixture_corpus();
    ScriptedGateway gw({{"Input text:", MatchKind::Substring, extraction("2015-02-21", "18:00", "Chelsea", "Burnley"),
                         "tool:Game Search"}});
    const auto out = game_search(*corpus, gw, "2015-02-21 - 18-00 Chelsea vs Burnley");
    EXPECT_EQ(out.kind, SearchOutcome::Kind::Single);
    EXPECT_EQ(out.file_path, kChelseaBurnley);
    EXPECT_EQ(render_outcome(out),
              "Based on the given information, we found the most probable match in the database with this file path: " +
                  kChelseaBurnley);
}

TEST(KnowledgeBase, GameSearchAmbiguous) {
    const auto corpus = support::fixture_corpus();
    ScriptedGateway gw({{"Here are the candidate matches", MatchKind::Substring,
                         "The information provided is too vague; both Chelsea games fit.", "tool:Game Search"},
                        {"Input text:", MatchKind::Substring, extraction("unknown", "unknown", "Chelsea", "unknown"),
                         "tool:Game Search"}});
    const auto out = game_search(*corpus, gw, "How did Chelsea do?");
    EXPECT_EQ(out.kind, SearchOutcome::Kind::Ambiguous);
    EXPECT_EQ(out.candidates.size(), 2u);
    const auto text = render_outcome(out);
    EXPECT_NE(text.find("too vague"), std::string::npos);
    EXPECT_EQ(text.find(".json"), std::string::npos);
}

TEST(KnowledgeBase, GameSearchCollapsesToOne) {
    const auto corpus = support::fixture_corpus();
    ScriptedGateway gw({{"Here are the candidate matches", MatchKind::Substring,
                         "The given information seems incomplete, but we found the most probable match in the database "
                         "with this file path: corpus/matches/2015-03-04_westham_chelsea.json. Give the date next time.",
                         "tool:Game Search"},
                        {"Input text:", MatchKind::Substring, extraction("unknown", "unknown", "Chelsea", "unknown"),
                         "tool:Game Search"}});
    const auto out = game_search(*corpus, gw, "Chelsea away at West Ham?");
    EXPECT_EQ(out.kind, SearchOutcome::Kind::Single);
    EXPECT_EQ(out.file_path, "corpus/matches/2015-03-04_westham_chelsea.json");
}

TEST(KnowledgeBase, GameSearchNone) {
    const auto corpus = support::fixture_corpus();
    ScriptedGateway gw({{"Input text:", MatchKind::Substring, extraction("unknown", "unknown", "Liverpool", "unknown"),
                         "tool:Game Search"}});
    const auto out = game_search(*corpus, gw, "Liverpool?");
    EXPECT_EQ(out.kind, SearchOutcome::Kind::None);
    EXPECT_NE(render_outcome(out).find("no matching file"), std::string::npos);
}

TEST(KnowledgeBase, CandidateBlockFormat) {
    const auto corpus = support::fixture_corpus();
    const auto block = candidate_block(1, corpus->matches()[0]);
    EXPECT_EQ(block.rfind("Candidate 1:\n\n- League: england_epl", 0), 0u);
    EXPECT_NE(block.find("- Home Team: Chelsea\n\n- Away Team: Burnley\n\n- file_path: " + kChelseaBurnley),
              std::string::npos);
    EXPECT_EQ(candidate_summary(corpus->matches()[0]).find("file_path"), std::string::npos);
}

TEST(KnowledgeBase, RetrievalInjectsMatchFile) {
    auto rec = gateway::RecordingGateway(std::make_shared<ScriptedGateway>(std::vector<ScriptRecord>{
        {"referee: Martin Atkinson", MatchKind::Substring,
         "[ANSWER]: Martin Atkinson. [EXPLANATION & REASONING]: listed in the match information.",
         "tool:Game Info Retrieval"},
        {"81' goal | Burnley | Ben Mee", MatchKind::Substring,
         "[ANSWER]: Two goals. [EXPLANATION & REASONING]: two goal events.", "tool:Match History Retrieval"},
        {"(no match events recorded)", MatchKind::Substring,
         "[ANSWER]: None. [EXPLANATION & REASONING]: no events are recorded.", "tool:Match History Retrieval"}}));
    EXPECT_EQ(game_info_retrieval(rec, "Who was the referee?", kChelseaBurnley).rfind("[ANSWER]:", 0), 0u);
    EXPECT_NE(match_history_retrieval(rec, "How many goals?", kChelseaBurnley).find("Two goals"), std::string::npos);
    EXPECT_NE(match_history_retrieval(rec, "How many corners?", "corpus/matches/2014-04-29_bayern_real.json")
                  .find("no events"),
              std::string::npos);
    EXPECT_EQ(kind_of([&] { game_info_retrieval(rec, "q", "corpus/matches/absent.json"); }), ErrorKind::FileMissing);
}

TEST(KnowledgeBase, RenderDetail) {
    const auto d = load_match_detail(kChelseaBurnley);
    EXPECT_NE(render_info(d).find("final_score: 1 - 1"), std::string::npos);
    EXPECT_NE(render_history(d).find("69' red card | Chelsea | Nemanja Matic | violent conduct"), std::string::npos);
    EXPECT_EQ(render_history(MatchDetail{}), "(no match events recorded)");
}

TEST(KnowledgeBase, EntityTuples) {
    EXPECT_EQ(parse_entity_tuple("(\"player\", \"Lionel Messi\")"), std::make_pair(std::string("player"), std::string("Lionel Messi")));
    EXPECT_EQ(parse_entity_tuple("Output: (team, Chelsea FC)"), std::make_pair(std::string("team"), std::string("Chelsea FC")));
    EXPECT_EQ(parse_entity_tuple("(\"coach\", \"Pep\")").first, "player");
    EXPECT_EQ(kind_of([] { parse_entity_tuple("player Lionel Messi"); }), ErrorKind::TupleMalformed);
}

TEST(KnowledgeBase, EntitySearch) {
    const auto corpus = support::fixture_corpus();
    // Patterns avoid the worked examples embedded in the prompt itself.
    ScriptedGateway gw({{"3-5-2 shape", MatchKind::Substring, "(\"unknown\", \"unknown\")", "tool:Textual Entity Search"},
                        {"Messi, Lionel", MatchKind::Substring, "(\"player\", \"messi, lionel\")", "tool:Textual Entity Search"},
                        {"Lionel Messi win in 2022", MatchKind::Substring, "(\"player\", \"Lionel Messi\")", "tool:Textual Entity Search"}});
    const auto hit = entity_search(*corpus, gw, "What did Lionel Messi win in 2022?");
    EXPECT_EQ(hit.kind, "player");
    ASSERT_NE(hit.lookup.record, nullptr);
    EXPECT_EQ(hit.lookup.level, MatchLevel::Exact);
    EXPECT_EQ(entity_search(*corpus, gw, "Describe the 3-5-2 shape.").lookup.record, nullptr);
    const auto variant = entity_search(*corpus, gw, "Where did Messi, Lionel grow up?");
    ASSERT_NE(variant.lookup.record, nullptr);
    EXPECT_EQ(variant.lookup.record, hit.lookup.record);
}
