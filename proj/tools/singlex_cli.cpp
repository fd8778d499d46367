// Command-line front end for the Singlish sentiment lexicon pipeline.
// Exit codes: 0 success, 1 usage error, 2 data or numeric error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "singlex/singlex.hpp"

namespace {

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw singlex::IoError(path);
    return file;
}

std::optional<double> parse_weight(const std::string& s) {
    if (s == "auto" || s == "AUTO") return std::nullopt;
    try {
        return std::stod(s);
    } catch (const std::exception&) {
        throw CLI::ValidationError("--weight", "expected a number or 'auto'");
    }
}

singlex::KnowledgeGraph load_merged(const std::vector<std::string>& assertion_files,
                                    const std::vector<std::string>& label_files) {
    singlex::KnowledgeGraph merged;
    for (const auto& path : assertion_files)
        for (const auto& a : singlex::load_assertions(path).assertions())
            merged.add(a);
    for (const auto& path : label_files)
        for (const auto& a :
             singlex::build_affect_graph(singlex::load_emotion_labels(path))
                 .assertions())
            merged.add(a);
    return merged;
}

std::vector<singlex::LexiconEntry> assemble_entries(
    const singlex::AffectiveSpace& space, const singlex::SenticPredictor& predictor,
    const std::string& singlish_labels_path, double delta,
    std::vector<singlex::Concept>& skipped) {
    auto labels = singlex::load_emotion_labels(singlish_labels_path);
    std::map<singlex::Concept, singlex::EmotionCategory> manual;
    for (const auto& [name, emotion] : labels) manual[name] = emotion;
    std::vector<singlex::LexiconEntry> entries;
    for (const auto& [name, emotion] : manual) {
        if (!space.contains(name)) {
            skipped.push_back(name);
            continue;
        }
        auto sentic = singlex::predict_sentic(predictor, space.vector_of(name));
        entries.push_back(singlex::make_entry(name, sentic, delta, emotion));
    }
    return entries;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Singlish concept-level sentiment lexicon toolkit"};
    app.require_subcommand(1);

    // ingest
    auto* ingest = app.add_subcommand(
        "ingest", "Load assertion and emotion-label files, write one merged "
                  "assertion file");
    std::vector<std::string> in_assertions, in_labels;
    std::string out_path;
    ingest->add_option("--assertions", in_assertions, "assertion file(s)");
    ingest->add_option("--affect-labels", in_labels, "emotion label file(s)");
    ingest->add_option("--out", out_path, "output path (default stdout)");

    // blend
    auto* blend_cmd = app.add_subcommand(
        "blend", "Convert graphs to concept-feature matrices and blend them");
    std::vector<std::string> blend_graphs;
    std::vector<std::string> blend_weights;
    std::string blend_out;
    blend_cmd->add_option("--graph", blend_graphs, "assertion file per source")
        ->required();
    blend_cmd->add_option("--weight", blend_weights,
                          "per-source weight, number or 'auto' (default auto)");
    blend_cmd->add_option("--out", blend_out, "output matrix dump (default stdout)");

    // embed
    auto* embed = app.add_subcommand("embed", "Truncated SVD of a matrix dump");
    std::string embed_matrix, embed_out;
    long long embed_k = 100;
    double embed_tol = 1e-10;
    std::size_t embed_max_iter = 0;
    embed->add_option("--matrix", embed_matrix, "matrix dump")->required();
    embed->add_option("--k", embed_k, "number of components (default 100)")
        ->check(CLI::PositiveNumber);
    embed->add_option("--tol", embed_tol, "Lanczos residual tolerance");
    embed->add_option("--max-iter", embed_max_iter, "Lanczos iteration cap");
    embed->add_option("--out", embed_out, "output space file (default stdout)");

    // train
    auto* train = app.add_subcommand("train", "Train the four ELM regressors");
    std::string train_space, train_benchmark, train_out;
    std::size_t train_hidden = 50;
    double train_lambda = 1e-3;
    std::uint64_t train_seed = 42;
    train->add_option("--space", train_space, "space file")->required();
    train->add_option("--benchmark", train_benchmark, "benchmark lexicon file")
        ->required();
    train->add_option("--hidden", train_hidden, "hidden units (default 50)")
        ->check(CLI::PositiveNumber);
    train->add_option("--lambda", train_lambda, "ridge parameter (default 1e-3)")
        ->check(CLI::NonNegativeNumber);
    train->add_option("--seed", train_seed, "hidden-layer seed (default 42)");
    train->add_option("--out", train_out, "model file (default stdout)");

    // predict
    auto* predict = app.add_subcommand(
        "predict", "Predict sentic vectors for embedded concepts");
    std::string pr_model, pr_space, pr_out;
    std::vector<std::string> pr_concepts;
    predict->add_option("--model", pr_model, "model file")->required();
    predict->add_option("--space", pr_space, "space file")->required();
    predict->add_option("--concept", pr_concepts,
                        "concept(s) to predict (default: all)");
    predict->add_option("--out", pr_out, "output (default stdout)");

    // neighbors
    auto* neighbors = app.add_subcommand("neighbors", "Nearest concepts by angle");
    std::string nb_space, nb_concept;
    std::size_t nb_n = 10;
    neighbors->add_option("--space", nb_space, "space file")->required();
    neighbors->add_option("--concept", nb_concept, "query concept")->required();
    neighbors->add_option("--n", nb_n, "neighbor count (default 10)");

    // infer
    auto* infer = app.add_subcommand(
        "infer", "Cumulative-analogy inference from the low-rank reconstruction");
    std::string inf_matrix, inf_out;
    long long inf_k = 100;
    double inf_tau = 0.5, inf_tol = 1e-10;
    std::size_t inf_max_iter = 0;
    infer->add_option("--matrix", inf_matrix, "matrix dump")->required();
    infer->add_option("--k", inf_k, "components (default 100)")
        ->check(CLI::PositiveNumber);
    infer->add_option("--tau", inf_tau, "score threshold (default 0.5)");
    infer->add_option("--tol", inf_tol, "Lanczos residual tolerance");
    infer->add_option("--max-iter", inf_max_iter, "Lanczos iteration cap");
    infer->add_option("--out", inf_out, "output (default stdout)");

    // polarity
    auto* polarity_cmd = app.add_subcommand(
        "polarity", "Polarity of a list of sentic vectors (P A S Ap per line)");
    std::string pol_input;
    polarity_cmd->add_option("--input", pol_input,
                             "input file (default stdin), tab-separated");

    // export
    auto* exp = app.add_subcommand(
        "export", "Run the pipeline and write the finished lexicon");
    std::string ex_conceptnet, ex_affect, ex_singlish, ex_benchmark, ex_out;
    std::string ex_space, ex_model;
    std::vector<std::string> ex_weights;
    long long ex_k = 100;
    std::size_t ex_hidden = 50;
    double ex_lambda = 1e-3, ex_delta = 0.05;
    std::uint64_t ex_seed = 42;
    exp->add_option("--conceptnet", ex_conceptnet, "ConceptNet-style assertion file");
    exp->add_option("--affectnet-labels", ex_affect, "AffectNet label file");
    exp->add_option("--singlish-labels", ex_singlish, "Singlish label file")
        ->required();
    exp->add_option("--benchmark", ex_benchmark, "benchmark lexicon file");
    exp->add_option("--space", ex_space,
                    "precomputed space file (skips blend/embed)");
    exp->add_option("--model", ex_model,
                    "precomputed model file (skips training)");
    exp->add_option("--weight", ex_weights,
                    "blend weight per source, number or 'auto'");
    exp->add_option("--k", ex_k, "components (default 100)")
        ->check(CLI::PositiveNumber);
    exp->add_option("--hidden", ex_hidden, "ELM hidden units (default 50)")
        ->check(CLI::PositiveNumber);
    exp->add_option("--lambda", ex_lambda, "ELM ridge parameter (default 1e-3)")
        ->check(CLI::NonNegativeNumber);
    exp->add_option("--delta", ex_delta, "neutral band width (default 0.05)");
    exp->add_option("--seed", ex_seed, "ELM seed (default 42)");
    exp->add_option("--out", ex_out, "lexicon output (default stdout)");

    // project
    auto* project = app.add_subcommand(
        "project", "Emit two selected coordinates per concept as TSV");
    std::string pj_space;
    std::size_t pj_x = 0, pj_y = 1;
    project->add_option("--space", pj_space, "space file")->required();
    project->add_option("--x", pj_x, "first axis index (default 0)");
    project->add_option("--y", pj_y, "second axis index (default 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        std::ofstream file;
        if (*ingest) {
            auto g = load_merged(in_assertions, in_labels);
            singlex::save_assertions(g, open_output(file, out_path));
        } else if (*blend_cmd) {
            std::vector<singlex::ConceptFeatureMatrix> mats;
            mats.reserve(blend_graphs.size());
            for (const auto& path : blend_graphs)
                mats.push_back(singlex::graph_to_matrix(singlex::load_assertions(path)));
            singlex::BlendSpec spec;
            for (std::size_t i = 0; i < mats.size(); ++i) {
                std::optional<double> w;
                if (i < blend_weights.size()) w = parse_weight(blend_weights[i]);
                spec.sources.emplace_back(&mats[i], w);
            }
            singlex::dump_matrix(singlex::blend(spec), open_output(file, blend_out));
        } else if (*embed) {
            auto a = singlex::load_matrix(embed_matrix);
            auto space = singlex::build_space(a, static_cast<std::size_t>(embed_k),
                                              embed_tol, embed_max_iter);
            singlex::dump_space(space, open_output(file, embed_out));
        } else if (*train) {
            auto space = singlex::load_space(train_space);
            auto benchmark = singlex::load_benchmark(train_benchmark);
            auto report = singlex::train_sentic(space, benchmark, train_hidden,
                                                train_lambda, train_seed);
            if (!report.skipped.empty()) {
                std::cerr << "skipped " << report.skipped.size()
                          << " benchmark concept(s) absent from the space\n";
            }
            singlex::dump_predictor(report.predictor, open_output(file, train_out));
        } else if (*predict) {
            auto space = singlex::load_space(pr_space);
            auto model = singlex::load_predictor(pr_model);
            std::vector<std::string> targets =
                pr_concepts.empty() ? space.concepts : pr_concepts;
            std::ostream& out = open_output(file, pr_out);
            char buf[64];
            for (const auto& raw : targets) {
                auto name = singlex::normalize_concept(raw);
                auto v = singlex::predict_sentic(model, space.vector_of(name));
                out << name;
                for (auto d : singlex::kAllDimensions) {
                    std::snprintf(buf, sizeof(buf), "%.6f", v[d]);
                    out << '\t' << buf;
                }
                out << '\n';
            }
        } else if (*neighbors) {
            auto space = singlex::load_space(nb_space);
            auto result = singlex::nearest_neighbors(
                space, singlex::normalize_concept(nb_concept), nb_n);
            char buf[64];
            for (const auto& [name, sim] : result) {
                std::snprintf(buf, sizeof(buf), "%.6f", sim);
                std::cout << name << '\t' << buf << '\n';
            }
        } else if (*infer) {
            auto a = singlex::load_matrix(inf_matrix);
            std::size_t k = static_cast<std::size_t>(inf_k);
            std::size_t min_dim = std::min(a.n_rows(), a.n_cols());
            if (min_dim == 0) throw singlex::RankTooLarge(k, 0);
            if (k > min_dim) {
                std::cerr << "warning: k = " << k << " clamped to min dimension "
                          << min_dim << "\n";
                k = min_dim;
            }
            auto tsvd = singlex::truncated_svd(a, k, inf_tol, inf_max_iter);
            std::ostream& out = open_output(file, inf_out);
            char buf[64];
            for (const auto& inf_a : singlex::infer_assertions(tsvd, a, inf_tau)) {
                std::snprintf(buf, sizeof(buf), "%.6f", inf_a.score);
                out << inf_a.subject << '\t' << inf_a.feature.relation << '\t'
                    << inf_a.feature.other << '\t' << buf << '\n';
            }
        } else if (*polarity_cmd) {
            std::ifstream pin;
            std::istream& in = pol_input.empty() ? std::cin : pin;
            if (!pol_input.empty()) {
                pin.open(pol_input);
                if (!pin) throw singlex::Error("cannot open '" + pol_input + "'");
            }
            std::vector<singlex::SenticVector> vs;
            std::string line;
            std::size_t line_no = 0;
            while (std::getline(in, line)) {
                ++line_no;
                if (line.empty() || line[0] == '#') continue;
                std::istringstream ss(line);
                singlex::SenticVector v;
                if (!(ss >> v.pleasantness >> v.attention >> v.sensitivity >>
                      v.aptitude))
                    throw singlex::ParseError("expected four floats", line_no);
                vs.push_back(v);
            }
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.6f", singlex::polarity(vs));
            std::cout << buf << '\n';
        } else if (*exp) {
            std::vector<singlex::LexiconEntry> entries;
            std::vector<singlex::Concept> skipped;
            if (!ex_space.empty() && !ex_model.empty()) {
                auto space = singlex::load_space(ex_space);
                auto model = singlex::load_predictor(ex_model);
                entries = assemble_entries(space, model, ex_singlish, ex_delta,
                                           skipped);
            } else {
                singlex::PipelineConfig cfg;
                cfg.conceptnet_path = ex_conceptnet;
                cfg.affectnet_labels_path = ex_affect;
                cfg.singlish_labels_path = ex_singlish;
                cfg.benchmark_path = ex_benchmark;
                cfg.k = static_cast<std::size_t>(ex_k);
                cfg.neutral_delta = ex_delta;
                cfg.elm_hidden = ex_hidden;
                cfg.elm_lambda = ex_lambda;
                cfg.seed = ex_seed;
                for (std::size_t i = 0; i < ex_weights.size() && i < 3; ++i)
                    cfg.blend_weights[i] = parse_weight(ex_weights[i]);
                if (cfg.conceptnet_path.empty() || cfg.affectnet_labels_path.empty() ||
                    cfg.benchmark_path.empty()) {
                    std::cerr << "export needs either --space/--model or "
                                 "--conceptnet/--affectnet-labels/--benchmark\n";
                    return 1;
                }
                auto result = singlex::run_pipeline(cfg);
                entries = std::move(result.entries);
                skipped = std::move(result.singlish_skipped);
            }
            if (!skipped.empty())
                std::cerr << "skipped " << skipped.size()
                          << " labeled concept(s) absent from the space\n";
            singlex::export_lexicon(entries, open_output(file, ex_out));
        } else if (*project) {
            auto space = singlex::load_space(pj_space);
            if (pj_x >= space.k()) throw singlex::AxisOutOfRange(pj_x, space.k());
            if (pj_y >= space.k()) throw singlex::AxisOutOfRange(pj_y, space.k());
            char bx[64], by[64];
            for (std::size_t i = 0; i < space.concepts.size(); ++i) {
                std::snprintf(bx, sizeof(bx), "%.17g", space.coords(i, pj_x));
                std::snprintf(by, sizeof(by), "%.17g", space.coords(i, pj_y));
                std::cout << space.concepts[i] << '\t' << bx << '\t' << by << '\n';
            }
        }
    } catch (const singlex::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
