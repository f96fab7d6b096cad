#include <gtest/gtest.h>

#include <algorithm>

#include "pitchside/builtin_data.hpp"
#include "pitchside/builtin_tools.hpp"
#include "pitchside/error.hpp"
#include "pitchside/planner.hpp"
#include "pitchside/toolbox.hpp"

using namespace pitchside;
using namespace pitchside::toolbox;

namespace {

class EchoBackend final : public ToolBackend {
public:
    ToolOutput run(const ToolDescriptor& d, const ToolRequest& r) const override { return {d.name + ":" + r.query, {}}; }
};

ToolBinding binding(std::string name) {
    ToolBinding b;
    b.descriptor = {std::move(name), "a", "q", "m", "o", "r"};
    b.backend = std::make_shared<EchoBackend>();
    return b;
}

std::shared_ptr<Registry> builtin_registry() {
    builtin::BuiltinDeps deps;
    deps.fixtures = FixtureTable::load("tool_fixtures.json");
    return builtin::make_registry(deps);
}

// Plain dynamic-programming edit distance, kept separate from the library's.
std::size_t oracle_distance(const std::string& a, const std::string& b) {
    std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
    for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
    for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i)
        for (std::size_t j = 1; j <= b.size(); ++j)
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] != b[j - 1])});
    return d[a.size()][b.size()];
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

}  // namespace

TEST(Toolbox, BuiltinRegistryHasEighteenTools) {
    const auto reg = builtin_registry();
    ASSERT_EQ(reg->size(), 18u);
    EXPECT_EQ(reg->bindings().front().descriptor.name, "Choice Selection");
    EXPECT_EQ(reg->bindings()[1].descriptor.name, "LLM");
    EXPECT_EQ(reg->bindings().back().descriptor.name, "Frame Selection");
    for (const auto& b : reg->bindings()) {
        EXPECT_FALSE(b.descriptor.ability.empty()) << b.descriptor.name;
        EXPECT_FALSE(b.descriptor.remark.empty()) << b.descriptor.name;
    }
}

TEST(Toolbox, DuplicateNameRejected) {
    Registry reg;
    reg.add(binding("LLM"));
    try {
        reg.add(binding("LLM"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DuplicateName);
    }
    EXPECT_EQ(reg.size(), 1u);
}

TEST(Toolbox, IncompleteBindingRejected) {
    Registry reg;
    auto b = binding("X");
    b.descriptor.output.clear();
    EXPECT_THROW(reg.add(b), Error);
    auto s = binding("Y");
    s.kind = BackendKind::Stub;
    EXPECT_THROW(reg.add(s), Error);
}

TEST(Toolbox, EmptyRegistryResolvesNothing) {
    Registry reg;
    try {
        reg.resolve("LLM");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotFound);
        EXPECT_TRUE(e.suggestions().empty());
    }
}

TEST(Toolbox, MisspelledNameSuggestsNearest) {
    const auto reg = builtin_registry();
    try {
        reg->resolve("Gane Search");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotFound);
        ASSERT_FALSE(e.suggestions().empty());
        EXPECT_EQ(e.suggestions().front(), "Game Search");
        // Every suggestion is within distance 3 of the name or one of its aliases.
        for (const auto& s : e.suggestions()) {
            std::size_t best = oracle_distance("gane search", lower(s));
            for (const auto& [alias, canonical] : reg->aliases())
                if (canonical == s) best = std::min(best, oracle_distance("gane search", lower(alias)));
            EXPECT_LE(best, 3u) << s;
        }
        // And nothing within distance 3 is left out.
        for (const auto& b : reg->bindings()) {
            if (oracle_distance("gane search", lower(b.descriptor.name)) <= 3) {
                EXPECT_NE(std::find(e.suggestions().begin(), e.suggestions().end(), b.descriptor.name),
                          e.suggestions().end());
            }
        }
    }
}

TEST(Toolbox, CatalogAndVariantNamesResolve) {
    const auto reg = builtin_registry();
    for (const auto& task : builtin::task_catalog()) {
        for (const auto& raw : task.recommended_chain) {
            const auto base = planner::split_repetition(raw).first;
            EXPECT_TRUE(reg->canonical_name(base).has_value()) << raw;
        }
    }
    EXPECT_EQ(reg->canonical_name("Shot Change"), "Camera Detection");
    EXPECT_EQ(reg->canonical_name("Vision Language Model"), "Jersey Color Relevant VQA");
    EXPECT_EQ(reg->canonical_name("Text Retrieval Augment"), "Textual Retrieval Augment");
    EXPECT_EQ(reg->canonical_name("Face Recognition"), "Entity Recognition");
    EXPECT_EQ(reg->canonical_name("Game info Retrieval"), "Game Info Retrieval");
    EXPECT_EQ(reg->canonical_name("llm"), "LLM");
    EXPECT_FALSE(reg->canonical_name("Face Finder").has_value());
}

TEST(Toolbox, DescriptionsRender) {
    const auto reg = builtin_registry();
    const auto text = render_descriptions(*reg);
    std::size_t headers = 0;
    for (auto p = text.find("=== Tool Description for TOOL"); p != std::string::npos;
         p = text.find("=== Tool Description for TOOL", p + 1))
        ++headers;
    EXPECT_EQ(headers, 18u);
    EXPECT_NE(text.find("=== Tool Description for TOOL18 ===\n\nName: Frame Selection"), std::string::npos);
    EXPECT_EQ(text, render_descriptions(*reg));

    Registry one;
    one.add(binding("Solo"));
    EXPECT_EQ(render_descriptions(one),
              "=== Tool Description for TOOL1 ===\n\nName: Solo\n\nAbility: a\n\nQuery Input: q\n\n"
              "material Input: m\n\nOutput: o\n\nRemark: r");
}

TEST(Toolbox, FixtureInvocations) {
    const auto reg = builtin_registry();
    const std::set<std::string> pool{"media/frame.png", "media/back.png", "media/replay.mp4", "media/clip1.mp4",
                                     "media/clip2.mp4", "media/clip3.mp4", "media/clip4.mp4"};
    InvokeOptions opts;
    opts.material_pool = &pool;
    EXPECT_EQ(reg->invoke("Camera Detection", {"What is the camera status?", {"media/frame.png"}}, opts).text,
              "Main camera center");
    EXPECT_EQ(reg->invoke("Number Recognition", {"Which number is on the back?", {"media/back.png"}}, opts).text, "-1");
    const ToolRequest replay{"Which clip is replayed?",
                             {"media/replay.mp4", "media/clip1.mp4", "media/clip2.mp4", "media/clip3.mp4",
                              "media/clip4.mp4"}};
    EXPECT_EQ(reg->invoke("Replay Grounding", replay, opts).text, "media/clip3.mp4");
    const auto frame = reg->invoke("Frame Selection", {"pick a frame", {"media/clip.mp4"}});
    EXPECT_EQ(frame.produced_files, std::vector<std::string>{"media/frame_0001.png"});
}

TEST(Toolbox, FixtureMissIsReported) {
    const auto reg = builtin_registry();
    try {
        reg->invoke("Segment", {"segment the ball", {"media/player.png"}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::FixtureMiss);
    }
}

TEST(Toolbox, MaterialChecks) {
    const auto reg = builtin_registry();
    auto kind = [&](const std::string& tool, const ToolRequest& r) {
        try {
            reg->invoke(tool, r);
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::ConfigError;
    };
    EXPECT_EQ(kind("Game Info Retrieval", {"who won?", {}}), ErrorKind::MaterialMissing);
    EXPECT_EQ(kind("Camera Detection", {"status", {"media/absent.png"}}), ErrorKind::MaterialMissing);
    EXPECT_EQ(kind("Entity Recognition", {"who?", {"media/clip.mp4"}}), ErrorKind::MaterialMismatch);
    EXPECT_EQ(kind("Action Classifier", {"what?", {"media/player.png"}}), ErrorKind::MaterialMismatch);
}

TEST(Toolbox, MediaOfExtension) {
    EXPECT_EQ(media_of("a/b.MP4"), MediaKind::Video);
    EXPECT_EQ(media_of("x.jpeg"), MediaKind::Image);
    EXPECT_EQ(media_of("page.txt"), MediaKind::Any);
}

TEST(Toolbox, FixtureTableLookupOrder) {
    FixtureTable t({{"T", "", "", "fallback", {}}, {"T", "exact query", "", "exact", {}}, {"T", "part", "b.png", "sub", {}}});
    EXPECT_EQ(t.lookup("T", {"exact query", {}})->text, "exact");
    EXPECT_EQ(t.lookup("T", {"a part of it", {"b.png"}})->text, "fallback");
    EXPECT_FALSE(t.lookup("U", {"exact query", {}}).has_value());
    FixtureTable u({{"T", "part", "b.png", "sub", {}}});
    EXPECT_EQ(u.lookup("T", {"a part of it", {"dir/b.png"}})->text, "sub");
    EXPECT_FALSE(u.lookup("T", {"a part of it", {"c.png"}}).has_value());
}
