#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <string>

#include "singlex/lexicon.hpp"

using namespace singlex;

namespace {

std::string data_path(const char* name) {
    return std::string(SINGLEX_DATA_DIR) + "/" + name;
}

PipelineConfig fixture_config() {
    PipelineConfig cfg;
    cfg.conceptnet_path = data_path("conceptnet.tsv");
    cfg.affectnet_labels_path = data_path("affectnet_labels.tsv");
    cfg.singlish_labels_path = data_path("singlish_labels.tsv");
    cfg.benchmark_path = data_path("benchmark.tsv");
    cfg.k = 100;  // larger than the fixture rank, so it must clamp
    cfg.svd_max_iter = 20000;
    return cfg;
}

}  // namespace

TEST_CASE("categorize_emotion dominant-dimension rule") {
    CHECK(categorize_emotion({0.8, 0.1, 0.0, 0.1}) == EmotionCategory::Joy);
    CHECK(categorize_emotion({-0.8, 0.1, 0.0, 0.1}) == EmotionCategory::Sadness);
    CHECK(categorize_emotion({0.0, 0.0, -0.7, 0.0}) == EmotionCategory::Fear);
    CHECK(categorize_emotion({0.0, 0.0, 0.7, 0.0}) == EmotionCategory::Anger);
    CHECK(categorize_emotion({0.1, -0.6, 0.0, 0.0}) == EmotionCategory::Surprise);
    CHECK(categorize_emotion({0.1, 0.0, 0.0, -0.6}) == EmotionCategory::Disgust);
    CHECK(categorize_emotion({0, 0, 0, 0}) == std::nullopt);
    CHECK(categorize_emotion({0.04, 0.04, 0.04, 0.04}) == std::nullopt);
    // dominants with no category of their sign
    CHECK(categorize_emotion({0.0, 0.9, 0.0, 0.0}) == std::nullopt);
    CHECK(categorize_emotion({0.0, 0.0, 0.0, 0.9}) == std::nullopt);
    // ties keep the earlier dimension
    CHECK(categorize_emotion({0.5, 0.0, -0.5, 0.0}) == EmotionCategory::Joy);
}

TEST_CASE("make_entry populates every field consistently") {
    LexiconEntry e = make_entry("shiok", {0.9, 0.1, 0.0, 0.1}, 0.05);
    CHECK(e.name == "shiok");
    CHECK(e.levels[0].label == "ecstasy");
    CHECK(e.levels[1].label == "interest");
    CHECK(e.levels[2].label == "neutral");
    CHECK(e.levels[3].label == "acceptance");
    CHECK(e.emotion == EmotionCategory::Joy);
    CHECK_FALSE(e.emotion_is_manual);
    CHECK_THAT(e.polarity_value, Catch::Matchers::WithinAbs(1.1 / 3.0, 1e-15));

    SECTION("manual label wins over the rule") {
        LexiconEntry m =
            make_entry("shiok", {0.9, 0.1, 0.0, 0.1}, 0.05, EmotionCategory::Fear);
        CHECK(m.emotion == EmotionCategory::Fear);
        CHECK(m.emotion_is_manual);
    }
    SECTION("out-of-range predictions are clamped before quantizing") {
        LexiconEntry c = make_entry("x", {1.4, -1.2, 0.0, 0.0}, 0.05);
        CHECK(c.sentic.pleasantness == 1.0);
        CHECK(c.sentic.attention == -1.0);
        CHECK(c.levels[0].label == "ecstasy");
        CHECK(c.levels[1].label == "amazement");
    }
}

TEST_CASE("lexicon export format") {
    LexiconEntry e = make_entry("shiok", {0.9, 0.1, 0.0, 0.1}, 0.05,
                                EmotionCategory::Joy);
    std::ostringstream out;
    export_lexicon({e}, out);
    CHECK(out.str() ==
          "#singlish-lexicon v1\n"
          "shiok\t0.900000\t0.100000\t0.000000\t0.100000"
          "\tecstasy\tinterest\tneutral\tacceptance\tJoy\t0.366667\n");

    SECTION("entries come out sorted by concept") {
        LexiconEntry a = make_entry("bo_chap", {0, 0, 0, -0.5}, 0.05);
        std::ostringstream two;
        export_lexicon({e, a}, two);
        std::istringstream lines(two.str());
        std::string l0, l1, l2;
        std::getline(lines, l0);
        std::getline(lines, l1);
        std::getline(lines, l2);
        CHECK(l0 == "#singlish-lexicon v1");
        CHECK(l1.substr(0, 7) == "bo_chap");
        CHECK(l2.substr(0, 5) == "shiok");
        CHECK(l1.find("\tDisgust\t") != std::string::npos);
    }
    SECTION("empty list still writes the header") {
        std::ostringstream empty;
        export_lexicon({}, empty);
        CHECK(empty.str() == "#singlish-lexicon v1\n");
    }
    SECTION("unwritable path raises IoError") {
        CHECK_THROWS_AS(export_lexicon({e}, "/nonexistent-dir/lex.tsv"), IoError);
    }
}

TEST_CASE("full pipeline on the bundled fixtures") {
    PipelineConfig cfg = fixture_config();
    PipelineResult r = run_pipeline(cfg);

    // every labeled Singlish concept is embedded and labeled
    CHECK(r.entries.size() == 30);
    CHECK(r.singlish_skipped.empty());
    CHECK(r.benchmark_skipped.empty());
    CHECK(r.k_used > 0);
    CHECK(r.k_used < cfg.k);  // the fixture cannot support k = 100

    for (const LexiconEntry& e : r.entries) {
        CHECK(e.emotion_is_manual);
        REQUIRE(e.emotion.has_value());
        for (AffectiveDimension d : kAllDimensions) {
            CHECK(e.sentic[d] >= -1.0);
            CHECK(e.sentic[d] <= 1.0);
        }
        // derived fields agree with the primitive operations
        CHECK(e.polarity_value == polarity({e.sentic}));
        for (std::size_t d = 0; d < 4; ++d) {
            SenticLevel lv =
                quantize(kAllDimensions[d], e.sentic[kAllDimensions[d]], 0.05);
            CHECK(e.levels[d].band == lv.band);
            CHECK(e.levels[d].label == lv.label);
        }
        CHECK(e.polarity_value >= -1.0);
        CHECK(e.polarity_value <= 1.0);
    }

    SECTION("a second run is byte-identical") {
        PipelineResult r2 = run_pipeline(cfg);
        std::ostringstream a, b;
        export_lexicon(r.entries, a);
        export_lexicon(r2.entries, b);
        CHECK(a.str() == b.str());
        CHECK(r.space.sigma == r2.space.sigma);
    }
    SECTION("identically-asserted concepts land on the same point") {
        REQUIRE(r.space.contains("gei_yan"));
        REQUIRE(r.space.contains("see_buay"));
        CHECK_THAT(cosine_similarity(r.space, "gei_yan", "see_buay"),
                   Catch::Matchers::WithinAbs(1.0, 1e-9));
    }
    SECTION("benchmark concepts with no assertions are reported, not fatal") {
        PipelineConfig cfg2 = cfg;
        std::ostringstream bench;
        bench << "happiness\t0.9\t0.2\t0.0\t0.5\n"
              << "not_in_any_graph\t0.1\t0.1\t0.1\t0.1\n";
        std::string tmp = "/tmp/singlex_test_bench.tsv";
        {
            std::ofstream f(tmp);
            f << bench.str();
        }
        cfg2.benchmark_path = tmp;
        PipelineResult r2 = run_pipeline(cfg2);
        REQUIRE(r2.benchmark_skipped.size() == 1);
        CHECK(r2.benchmark_skipped[0] == "not_in_any_graph");
    }
    SECTION("missing input file fails with the stage name attached") {
        PipelineConfig bad = cfg;
        bad.conceptnet_path = "/nonexistent/nope.tsv";
        try {
            run_pipeline(bad);
            FAIL("expected Error");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("[ingest]") != std::string::npos);
        }
    }
    SECTION("a benchmark with no embeddable concepts is NoOverlap") {
        PipelineConfig bad = cfg;
        std::string tmp = "/tmp/singlex_test_bench_empty.tsv";
        {
            std::ofstream f(tmp);
            f << "zzz_not_here\t0.1\t0.1\t0.1\t0.1\n";
        }
        bad.benchmark_path = tmp;
        CHECK_THROWS_AS(run_pipeline(bad), Error);
    }
}
