#pragma once

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "singlex/elm.hpp"
#include "singlex/errors.hpp"
#include "singlex/hourglass.hpp"
#include "singlex/kb_graph.hpp"
#include "singlex/matrix.hpp"
#include "singlex/spectral.hpp"

namespace singlex {

/// Map a sentic vector to one of the six categories by its dominant
/// dimension: P+ -> Joy, P- -> Sadness, Att- -> Surprise, S+ -> Anger,
/// S- -> Fear, Apt- -> Disgust; other dominants and all-quiet vectors -> none.
inline std::optional<EmotionCategory> categorize_emotion(const SenticVector& v,
                                                         double delta = 0.05) {
    AffectiveDimension dominant{};
    double best = delta;
    bool found = false;
    for (AffectiveDimension d : kAllDimensions) {
        double mag = std::abs(v[d]);
        if (mag > best) {  // ties keep the earlier dimension
            best = mag;
            dominant = d;
            found = true;
        }
    }
    if (!found) return std::nullopt;
    bool positive = v[dominant] > 0.0;
    switch (dominant) {
        case AffectiveDimension::Pleasantness:
            return positive ? EmotionCategory::Joy : EmotionCategory::Sadness;
        case AffectiveDimension::Attention:
            return positive ? std::nullopt
                            : std::optional<EmotionCategory>(EmotionCategory::Surprise);
        case AffectiveDimension::Sensitivity:
            return positive ? EmotionCategory::Anger : EmotionCategory::Fear;
        case AffectiveDimension::Aptitude:
            return positive ? std::nullopt
                            : std::optional<EmotionCategory>(EmotionCategory::Disgust);
    }
    return std::nullopt;
}

struct LexiconEntry {
    Concept name;
    SenticVector sentic;
    std::array<SenticLevel, 4> levels;
    std::optional<EmotionCategory> emotion;
    bool emotion_is_manual = false;
    double polarity_value = 0.0;
};

/// Assemble one lexicon entry from a prediction. A manual emotion label,
/// when given, overrides the dominant-dimension rule.
inline LexiconEntry make_entry(const Concept& name, const SenticVector& sentic,
                               double neutral_delta,
                               std::optional<EmotionCategory> manual = std::nullopt) {
    LexiconEntry e;
    e.name = name;
    e.sentic = sentic.clamped();
    for (std::size_t d = 0; d < 4; ++d)
        e.levels[d] =
            quantize(kAllDimensions[d], e.sentic[kAllDimensions[d]], neutral_delta);
    if (manual) {
        e.emotion = manual;
        e.emotion_is_manual = true;
    } else {
        e.emotion = categorize_emotion(e.sentic, neutral_delta);
    }
    e.polarity_value = polarity({e.sentic});
    return e;
}

struct PipelineConfig {
    std::string conceptnet_path;
    std::string affectnet_labels_path;
    std::string singlish_labels_path;
    std::string benchmark_path;
    std::size_t k = 100;
    // Blend weights for (conceptnet, affectnet, singlish); nullopt = AUTO.
    std::array<std::optional<double>, 3> blend_weights{};
    double neutral_delta = 0.05;
    std::size_t elm_hidden = 50;
    double elm_lambda = 1e-3;
    std::uint64_t seed = 42;
    double svd_tol = 1e-10;
    std::size_t svd_max_iter = 0;  // 0 = default
};

struct PipelineResult {
    AffectiveSpace space;
    SenticPredictor predictor;
    std::vector<LexiconEntry> entries;
    std::vector<Concept> benchmark_skipped;
    std::vector<Concept> singlish_skipped;  // labeled but absent from the space
    std::size_t k_used = 0;
};

namespace detail {

template <typename F>
auto pipeline_stage(const char* stage, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        throw Error(std::string("[") + stage + "] " + e.what());
    }
}

}  // namespace detail

/// End-to-end: load graphs, blend, embed, train, predict every
/// Singlish-labeled concept, quantize, categorize, score polarity.
inline PipelineResult run_pipeline(const PipelineConfig& cfg) {
    KnowledgeGraph conceptnet = detail::pipeline_stage("ingest", [&] {
        return load_assertions(cfg.conceptnet_path);
    });
    auto affect_labels = detail::pipeline_stage("ingest", [&] {
        return load_emotion_labels(cfg.affectnet_labels_path);
    });
    auto singlish_labels = detail::pipeline_stage("ingest", [&] {
        return load_emotion_labels(cfg.singlish_labels_path);
    });
    KnowledgeGraph affectnet = detail::pipeline_stage("affect-graph", [&] {
        return build_affect_graph(affect_labels);
    });
    KnowledgeGraph singlish_net = detail::pipeline_stage("affect-graph", [&] {
        return build_affect_graph(singlish_labels);
    });

    ConceptFeatureMatrix blended = detail::pipeline_stage("blend", [&] {
        ConceptFeatureMatrix mc = graph_to_matrix(conceptnet);
        ConceptFeatureMatrix ma = graph_to_matrix(affectnet);
        ConceptFeatureMatrix ms = graph_to_matrix(singlish_net);
        BlendSpec spec;
        spec.sources = {{&mc, cfg.blend_weights[0]},
                        {&ma, cfg.blend_weights[1]},
                        {&ms, cfg.blend_weights[2]}};
        return blend(spec);
    });

    PipelineResult result;
    result.space = detail::pipeline_stage("embed", [&] {
        return build_space(blended, cfg.k, cfg.svd_tol, cfg.svd_max_iter);
    });
    result.k_used = result.space.k();

    auto benchmark = detail::pipeline_stage("train", [&] {
        return load_benchmark(cfg.benchmark_path);
    });
    TrainReport training = detail::pipeline_stage("train", [&] {
        return train_sentic(result.space, benchmark, cfg.elm_hidden, cfg.elm_lambda,
                            cfg.seed);
    });
    result.predictor = training.predictor;
    result.benchmark_skipped = training.skipped;

    detail::pipeline_stage("predict", [&] {
        // Manual labels per concept; later duplicates win.
        std::map<Concept, EmotionCategory> manual;
        for (const auto& [concept_name, emotion] : singlish_labels)
            manual[concept_name] = emotion;
        for (const auto& [concept_name, emotion] : manual) {
            if (!result.space.contains(concept_name)) {
                result.singlish_skipped.push_back(concept_name);
                continue;
            }
            SenticVector sentic =
                predict_sentic(result.predictor, result.space.vector_of(concept_name));
            result.entries.push_back(
                make_entry(concept_name, sentic, cfg.neutral_delta, emotion));
        }
        return 0;
    });
    return result;
}

/// Lexicon file: `#singlish-lexicon v1` header, then per line
/// `concept P A S Ap level_P level_A level_S level_Ap emotion polarity`,
/// tab-separated, floats at 6 decimals, sorted by concept.
inline void export_lexicon(const std::vector<LexiconEntry>& entries,
                           std::ostream& out) {
    out << "#singlish-lexicon v1\n";
    std::vector<const LexiconEntry*> sorted;
    sorted.reserve(entries.size());
    for (const auto& e : entries) sorted.push_back(&e);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto* a, const auto* b) { return a->name < b->name; });
    char buf[64];
    for (const LexiconEntry* e : sorted) {
        out << e->name;
        for (AffectiveDimension d : kAllDimensions) {
            std::snprintf(buf, sizeof(buf), "%.6f", e->sentic[d]);
            out << '\t' << buf;
        }
        for (const SenticLevel& lv : e->levels) out << '\t' << lv.label;
        out << '\t' << (e->emotion ? to_string(*e->emotion) : "none");
        std::snprintf(buf, sizeof(buf), "%.6f", e->polarity_value);
        out << '\t' << buf << '\n';
    }
}

inline void export_lexicon(const std::vector<LexiconEntry>& entries,
                           const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError(path);
    export_lexicon(entries, out);
    out.flush();
    if (!out) throw IoError(path);
}

}  // namespace singlex
