// Release gate: eight numbered checks, one [PASS]/[FAIL] line each.
// Exits non-zero when any check fails.

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "singlex/singlex.hpp"

using namespace singlex;

namespace {

int g_failures = 0;

void report(int criterion, const char* title, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", criterion,
                title, detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++g_failures;
}

Eigen::MatrixXd to_dense(const ConceptFeatureMatrix& a) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(a.n_rows(), a.n_cols());
    for (const auto& [ij, v] : a.entries()) m(ij.first, ij.second) = v;
    return m;
}

ConceptFeatureMatrix random_sparse(std::mt19937& rng, std::size_t rows,
                                   std::size_t cols, double density) {
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    std::bernoulli_distribution keep(density);
    std::map<std::pair<Concept, Feature>, double> e;
    for (std::size_t i = 0; i < rows; ++i) {
        char name[16];
        std::snprintf(name, sizeof(name), "c%03zu", i);
        for (std::size_t j = 0; j < cols; ++j) {
            if (!keep(rng)) continue;
            char obj[16];
            std::snprintf(obj, sizeof(obj), "f%03zu", j);
            e[{name, forward_feature("IsA", obj)}] = val(rng);
        }
        char obj[16];
        std::snprintf(obj, sizeof(obj), "f%03zu", i % cols);
        e[{name, forward_feature("IsA", obj)}] = val(rng);
    }
    for (std::size_t j = 0; j < cols; ++j) {  // keep every column occupied too
        char obj[16];
        std::snprintf(obj, sizeof(obj), "f%03zu", j);
        char name[16];
        std::snprintf(name, sizeof(name), "c%03zu", j % rows);
        e[{name, forward_feature("IsA", obj)}] = val(rng);
    }
    return ConceptFeatureMatrix::from_entries(e);
}

double max_orthonormality_residual(const DMat& u) {
    double worst = 0.0;
    for (std::size_t a = 0; a < u.cols; ++a)
        for (std::size_t b = 0; b < u.cols; ++b) {
            double d = 0.0;
            for (std::size_t i = 0; i < u.rows; ++i) d += u(i, a) * u(i, b);
            worst = std::max(worst, std::abs(d - (a == b ? 1.0 : 0.0)));
        }
    return worst;
}

std::string data_path(const char* name) {
    return std::string(SINGLEX_DATA_DIR) + "/" + name;
}

// ---- criteria 1 + 2: low-rank residual identity and Lanczos-vs-oracle ------

void criteria_1_and_2() {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(20240817);
    std::uniform_int_distribution<std::size_t> row_d(12, 50), col_d(15, 80);
    std::uniform_real_distribution<double> dens(0.08, 0.25);

    double worst_resid_gap = 0.0;  // criterion 1
    double worst_sigma_rel = 0.0;  // criterion 2
    double worst_ortho = 0.0;      // criterion 2

    for (int trial = 0; trial < 100; ++trial) {
        ConceptFeatureMatrix a =
            random_sparse(rng, row_d(rng), col_d(rng), dens(rng));
        Eigen::MatrixXd dense = to_dense(a);
        Eigen::JacobiSVD<Eigen::MatrixXd> oracle(dense);
        const Eigen::VectorXd& sv = oracle.singularValues();
        for (std::size_t k : {std::size_t{1}, std::size_t{5}, std::size_t{10}}) {
            TsvdResult t = truncated_svd(a, k, 1e-13, 20000);

            Eigen::MatrixXd approx =
                Eigen::MatrixXd::Zero(dense.rows(), dense.cols());
            for (std::size_t c = 0; c < k; ++c)
                for (Eigen::Index i = 0; i < dense.rows(); ++i)
                    for (Eigen::Index j = 0; j < dense.cols(); ++j)
                        approx(i, j) += t.u(i, c) * t.sigma[c] * t.v(j, c);
            double tail = 0.0;
            for (Eigen::Index i = static_cast<Eigen::Index>(k); i < sv.size(); ++i)
                tail += sv(i) * sv(i);
            worst_resid_gap = std::max(
                worst_resid_gap,
                std::abs((dense - approx).norm() - std::sqrt(tail)));

            for (std::size_t i = 0; i < k; ++i)
                worst_sigma_rel =
                    std::max(worst_sigma_rel,
                             std::abs(t.sigma[i] - sv(i)) / std::max(sv(0), 1e-300));
            worst_ortho = std::max(worst_ortho, max_orthonormality_residual(t.u));
            worst_ortho = std::max(worst_ortho, max_orthonormality_residual(t.v));
        }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                t0)
                      .count();
    char d1[128], d2[128];
    std::snprintf(d1, sizeof(d1), "max residual gap %.3g, corpus time %.2fs",
                  worst_resid_gap, secs);
    std::snprintf(d2, sizeof(d2), "max sigma rel err %.3g, max orthonormality %.3g",
                  worst_sigma_rel, worst_ortho);
    report(1, "low-rank residual identity on 100 random sparse matrices",
           worst_resid_gap <= 1e-8 && secs < 5.0, d1);
    report(2, "iterative solver matches the dense oracle",
           worst_sigma_rel <= 1e-8 && worst_ortho <= 1e-8, d2);
}

// ---- criterion 3: cumulative analogy on the bundled fixture ----------------

void criterion_3() {
    bool ok = true;
    std::string detail;
    try {
        KnowledgeGraph g = load_assertions(data_path("analogy.tsv"));
        ConceptFeatureMatrix a = graph_to_matrix(g);
        TsvdResult t = truncated_svd(a, 2, 1e-10, 1000);
        auto inferred = infer_assertions(t, a, 0.3);
        ok = inferred.size() == 1 && inferred[0].subject == "special_occasion" &&
             inferred[0].feature.kind == FeatureKind::Forward &&
             inferred[0].feature.key() == "Causes>shiok";
        // nothing already asserted may be proposed, at any threshold
        for (const auto& inf : infer_assertions(t, a, -1e9)) {
            auto row = a.row_of(inf.subject);
            if (!row) { ok = false; break; }
            for (std::size_t j = 0; j < a.n_cols(); ++j)
                if (a.cols()[j] == inf.feature && a.has_entry(*row, j)) ok = false;
        }
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%zu inference(s), top score %.4f",
                      inferred.size(),
                      inferred.empty() ? 0.0 : inferred[0].score);
        detail = buf;
    } catch (const Error& e) {
        ok = false;
        detail = e.what();
    }
    report(3, "cumulative analogy recovers special_occasion -Causes-> shiok", ok,
           detail);
}

// ---- criterion 4: polarity identity --------------------------------------

void criterion_4() {
    bool ok = polarity({{0, 0, 0, 0}}) == 0.0 &&
              polarity({{1, 0, 0, 1}}) == 2.0 / 3.0 &&
              polarity({{1, 1, 0, 1}, {0, 0, 1, 0}}) == 1.0 / 3.0;
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 1000 && ok; ++trial) {
        std::vector<SenticVector> vs;
        std::size_t n = 1 + rng() % 8;
        for (std::size_t i = 0; i < n; ++i)
            vs.push_back({u(rng), u(rng), u(rng), u(rng)});
        double before = polarity(vs);
        std::shuffle(vs.begin(), vs.end(), rng);
        if (std::abs(polarity(vs) - before) > 1e-12) ok = false;
    }
    report(4, "polarity worked examples are exact and order-independent", ok, "");
}

// ---- criterion 5: seven-band quantization sweep ---------------------------

void criterion_5() {
    bool ok = true;
    for (AffectiveDimension dim : kAllDimensions) {
        std::set<int> seen;
        int prev = -4;
        for (int i = -100; i <= 100 && ok; ++i) {
            double x = i / 100.0;
            SenticLevel lv = quantize(dim, x, 0.05);
            seen.insert(lv.band);
            if (lv.band < prev) ok = false;  // a gap or overlap would break order
            prev = lv.band;
            if (lv.label != sentic_label(dim, lv.band)) ok = false;
        }
        if (seen != std::set<int>{-3, -2, -1, 0, 1, 2, 3}) ok = false;
    }
    // boundary convention: neutral is closed at delta, outer bands closed above
    ok = ok && quantize(AffectiveDimension::Pleasantness, 0.05, 0.05).band == 0 &&
         quantize(AffectiveDimension::Pleasantness, 0.06, 0.05).band == 1 &&
         quantize(AffectiveDimension::Pleasantness, 1.0 / 3.0, 0.05).band == 1 &&
         quantize(AffectiveDimension::Pleasantness, 2.0 / 3.0, 0.05).band == 2 &&
         quantize(AffectiveDimension::Pleasantness, 1.0, 0.05).band == 3;
    report(5, "quantization sweep covers all seven bands without gaps", ok, "");
}

// ---- criterion 6: regressor fit, optimality, determinism ------------------

void criterion_6() {
    const std::size_t n = 30;
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::vector<Vec> x(n, Vec(3));
    Vec y(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (double& v : x[i]) v = u(rng);
        y[i] = x[i][0] / 2.0;
    }
    bool ok = true;
    std::string detail;
    try {
        ElmModel m = train_elm(x, y, 200, 1e-8, 42);
        double sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double d = predict_elm(m, x[i]) - y[i];
            sq += d * d;
        }
        double rmse = std::sqrt(sq / static_cast<double>(n));

        // optimality of the normal-equation solve at a moderate lambda
        const double lambda = 1e-3;
        ElmModel m2 = train_elm(x, y, 60, lambda, 42);
        Eigen::MatrixXd h(n, 60);
        for (std::size_t r = 0; r < n; ++r) {
            Vec hr = m2.hidden(x[r]);
            for (std::size_t j = 0; j < 60; ++j) h(r, j) = hr[j];
        }
        Eigen::VectorXd beta =
            Eigen::Map<const Eigen::VectorXd>(m2.output_weights.data(), 60);
        Eigen::VectorXd rhs =
            h.transpose() * Eigen::Map<const Eigen::VectorXd>(y.data(), n);
        double opt = ((h.transpose() * h +
                       lambda * Eigen::MatrixXd::Identity(60, 60)) *
                          beta -
                      rhs)
                         .lpNorm<Eigen::Infinity>() /
                     rhs.lpNorm<Eigen::Infinity>();

        ElmModel again = train_elm(x, y, 200, 1e-8, 42);
        bool deterministic = again.output_weights == m.output_weights &&
                             again.input_weights.data == m.input_weights.data &&
                             again.biases == m.biases;

        ok = rmse < 1e-6 && opt <= 1e-8 && deterministic;
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "rmse %.3g, optimality residual %.3g, deterministic %s",
                      rmse, opt, deterministic ? "yes" : "no");
        detail = buf;
    } catch (const Error& e) {
        ok = false;
        detail = e.what();
    }
    report(6, "regressor fit, ridge optimality, seeded determinism", ok, detail);
}

// ---- criterion 7: end-to-end lexicon --------------------------------------

void criterion_7() {
    bool ok = true;
    std::string detail;
    try {
        PipelineConfig cfg;
        cfg.conceptnet_path = data_path("conceptnet.tsv");
        cfg.affectnet_labels_path = data_path("affectnet_labels.tsv");
        cfg.singlish_labels_path = data_path("singlish_labels.tsv");
        cfg.benchmark_path = data_path("benchmark.tsv");
        cfg.k = 100;
        cfg.svd_max_iter = 20000;

        PipelineResult r1 = run_pipeline(cfg);
        PipelineResult r2 = run_pipeline(cfg);
        std::ostringstream a, b;
        export_lexicon(r1.entries, a);
        export_lexicon(r2.entries, b);

        bool populated = r1.entries.size() == 30 && r1.singlish_skipped.empty();
        for (const LexiconEntry& e : r1.entries) {
            if (!e.emotion) populated = false;
            for (const SenticLevel& lv : e.levels)
                if (lv.label.empty()) populated = false;
            if (std::abs(e.polarity_value) > 1.0) populated = false;
        }

        auto nn = nearest_neighbors(r1.space, "gei_yan", 2);
        std::set<std::string> names;
        double min_sim = 1.0;
        for (const auto& [name, sim] : nn) {
            names.insert(name);
            min_sim = std::min(min_sim, sim);
        }
        bool cluster = names == std::set<std::string>{"cham_sheung", "see_buay"} &&
                       min_sim > 0.95;

        ok = populated && a.str() == b.str() && cluster;
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "%zu entries, identical reruns %s, cluster sim >= %.4f",
                      r1.entries.size(), a.str() == b.str() ? "yes" : "no",
                      min_sim);
        detail = buf;
    } catch (const Error& e) {
        ok = false;
        detail = e.what();
    }
    report(7, "end-to-end lexicon is complete, deterministic, and clustered", ok,
           detail);
}

// ---- criterion 8: activation curve ----------------------------------------

void criterion_8() {
    bool ok = gaussian_g(0.0) == -1.0;
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> xs(-5.0, 5.0);
    for (int i = 0; i < 10000 && ok; ++i) {
        double x = xs(rng);
        if (std::abs(gaussian_g(x) - gaussian_g(-x)) > 1e-12) ok = false;
        if (!(gaussian_g(x) < 0.0)) ok = false;
    }
    report(8, "activation curve: exact minimum at zero, even, negative", ok, "");
}

}  // namespace

int main() {
    criteria_1_and_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all 8 criteria passed\n");
    return 0;
}
