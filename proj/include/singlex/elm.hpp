#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "singlex/errors.hpp"
#include "singlex/hourglass.hpp"
#include "singlex/linalg.hpp"
#include "singlex/spectral.hpp"

namespace singlex {

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Single-hidden-layer network with random fixed hidden weights and
// ridge-solved output weights.
struct ElmModel {
    std::size_t input_dim = 0;
    std::size_t hidden_dim = 0;
    DMat input_weights;       // L x M
    Vec biases;               // L
    Vec output_weights;       // L
    std::string activation = "sigmoid";
    double lambda = 0.0;
    std::uint64_t seed = 0;

    double activate(double x) const {
        return activation == "tanh" ? std::tanh(x) : logistic(x);
    }

    Vec hidden(const Vec& x) const {
        if (x.size() != input_dim) throw DimensionMismatch(input_dim, x.size());
        Vec h(hidden_dim);
        for (std::size_t j = 0; j < hidden_dim; ++j) {
            double z = biases[j];
            for (std::size_t i = 0; i < input_dim; ++i)
                z += input_weights(j, i) * x[i];
            h[j] = activate(z);
        }
        return h;
    }
};

/// Raw network output, before clamping.
inline double predict_elm_raw(const ElmModel& m, const Vec& x) {
    Vec h = m.hidden(x);
    return dot(m.output_weights, h);
}

/// Network output clamped to [-1, 1].
inline double predict_elm(const ElmModel& m, const Vec& x) {
    double raw = predict_elm_raw(m, x);
    return raw < -1.0 ? -1.0 : (raw > 1.0 ? 1.0 : raw);
}

/// Train one ELM: hidden weights and biases uniform in [-1, 1] from seed,
/// beta solves (H^T H + lambda I) beta = H^T y.
inline ElmModel train_elm(const std::vector<Vec>& x, const Vec& y, std::size_t hidden,
                          double lambda, std::uint64_t seed,
                          const std::string& activation = "sigmoid") {
    if (x.empty() || x.size() != y.size())
        throw DimensionMismatch(x.size(), y.size());
    if (hidden == 0) throw OutOfRange("hidden layer must be non-empty");
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw OutOfRange("lambda must be finite and non-negative");
    const std::size_t n = x.size(), m_dim = x[0].size();
    for (const Vec& xi : x)
        if (xi.size() != m_dim) throw DimensionMismatch(m_dim, xi.size());

    ElmModel model;
    model.input_dim = m_dim;
    model.hidden_dim = hidden;
    model.activation = activation;
    model.lambda = lambda;
    model.seed = seed;
    model.input_weights = DMat(hidden, m_dim);
    model.biases.resize(hidden);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (std::size_t j = 0; j < hidden; ++j)
        for (std::size_t i = 0; i < m_dim; ++i) model.input_weights(j, i) = unit(rng);
    for (std::size_t j = 0; j < hidden; ++j) model.biases[j] = unit(rng);

    DMat h(n, hidden);
    for (std::size_t r = 0; r < n; ++r) {
        Vec hr = model.hidden(x[r]);
        for (std::size_t j = 0; j < hidden; ++j) h(r, j) = hr[j];
    }
    DMat gram(hidden, hidden);
    for (std::size_t a = 0; a < hidden; ++a) {
        for (std::size_t b = a; b < hidden; ++b) {
            double s = 0.0;
            for (std::size_t r = 0; r < n; ++r) s += h(r, a) * h(r, b);
            gram(a, b) = s;
            gram(b, a) = s;
        }
        gram(a, a) += lambda;
    }
    Vec rhs(hidden, 0.0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t j = 0; j < hidden; ++j) rhs[j] += h(r, j) * y[r];
    model.output_weights = cholesky_solve(std::move(gram), std::move(rhs));
    return model;
}

// Four independent per-dimension regressors sharing one input space.
struct SenticPredictor {
    std::array<ElmModel, 4> models;  // Pleasantness, Attention, Sensitivity, Aptitude

    std::size_t input_dim() const { return models[0].input_dim; }
};

inline SenticVector predict_sentic(const SenticPredictor& p, const Vec& x) {
    return {predict_elm(p.models[0], x), predict_elm(p.models[1], x),
            predict_elm(p.models[2], x), predict_elm(p.models[3], x)};
}

// One benchmark lexicon row: concept plus its four dimension targets.
struct BenchmarkEntry {
    Concept name;
    SenticVector targets;
};

/// Benchmark lexicon file:
/// `concept<TAB>pleasantness<TAB>attention<TAB>sensitivity<TAB>aptitude`.
inline std::vector<BenchmarkEntry> load_benchmark(std::istream& in) {
    std::vector<BenchmarkEntry> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::skippable(line)) continue;
        auto fields = detail::split_tabs(line);
        if (fields.size() != 5)
            throw ParseError("expected 5 tab-separated fields", line_no);
        BenchmarkEntry e;
        try {
            e.name = normalize_concept(fields[0]);
        } catch (const EmptyConcept&) {
            throw ParseError("empty concept field", line_no);
        }
        double vals[4];
        for (int i = 0; i < 4; ++i) {
            try {
                vals[i] = std::stod(fields[i + 1]);
            } catch (const std::exception&) {
                throw ParseError("bad target '" + fields[i + 1] + "'", line_no);
            }
            if (!std::isfinite(vals[i]) || std::abs(vals[i]) > 1.0)
                throw ParseError("target must lie in [-1, 1]", line_no);
        }
        e.targets = {vals[0], vals[1], vals[2], vals[3]};
        out.push_back(std::move(e));
    }
    return out;
}

inline std::vector<BenchmarkEntry> load_benchmark(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open benchmark file '" + path + "'");
    return load_benchmark(in);
}

struct TrainReport {
    SenticPredictor predictor;
    std::size_t used = 0;
    std::vector<Concept> skipped;  // benchmark concepts absent from the space
};

/// Train the four dimension models on benchmark concepts embeddable in the
/// space. Dimension d uses seed + d so the hidden layers decorrelate.
inline TrainReport train_sentic(const AffectiveSpace& space,
                                const std::vector<BenchmarkEntry>& benchmark,
                                std::size_t hidden = 50, double lambda = 1e-3,
                                std::uint64_t seed = 42) {
    std::vector<Vec> inputs;
    std::array<Vec, 4> targets;
    TrainReport report;
    for (const BenchmarkEntry& e : benchmark) {
        if (!space.contains(e.name)) {
            report.skipped.push_back(e.name);
            continue;
        }
        inputs.push_back(space.vector_of(e.name));
        for (std::size_t d = 0; d < 4; ++d)
            targets[d].push_back(e.targets[kAllDimensions[d]]);
    }
    if (inputs.empty()) throw NoOverlap();
    report.used = inputs.size();
    for (std::size_t d = 0; d < 4; ++d)
        report.predictor.models[d] =
            train_elm(inputs, targets[d], hidden, lambda, seed + d);
    return report;
}

namespace detail {

inline void dump_vec(std::ostream& out, const char* tag, const Vec& v) {
    char buf[64];
    out << tag;
    for (double x : v) {
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        out << '\t' << buf;
    }
    out << '\n';
}

}  // namespace detail

/// Text serialization sufficient for bit-exact reload.
inline void dump_predictor(const SenticPredictor& p, std::ostream& out) {
    out << "#sentic-predictor v1\n";
    for (std::size_t d = 0; d < 4; ++d) {
        const ElmModel& m = p.models[d];
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", m.lambda);
        out << "model\t" << to_string(kAllDimensions[d]) << '\t' << m.input_dim
            << '\t' << m.hidden_dim << '\t' << buf << '\t' << m.seed << '\t'
            << m.activation << '\n';
        for (std::size_t j = 0; j < m.hidden_dim; ++j) {
            Vec row(m.input_dim);
            for (std::size_t i = 0; i < m.input_dim; ++i) row[i] = m.input_weights(j, i);
            detail::dump_vec(out, "w", row);
        }
        detail::dump_vec(out, "b", m.biases);
        detail::dump_vec(out, "beta", m.output_weights);
    }
}

inline SenticPredictor load_predictor(std::istream& in) {
    SenticPredictor p;
    std::string line;
    std::size_t line_no = 0;
    int cur = -1;
    std::size_t w_row = 0;
    auto parse_values = [&](const std::vector<std::string>& fields) {
        Vec v;
        v.reserve(fields.size() - 1);
        for (std::size_t i = 1; i < fields.size(); ++i) v.push_back(std::stod(fields[i]));
        return v;
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::skippable(line)) continue;
        auto fields = detail::split_tabs(line);
        try {
            if (fields[0] == "model") {
                if (fields.size() != 7) throw ParseError("bad model header", line_no);
                ++cur;
                if (cur > 3) throw ParseError("too many models", line_no);
                ElmModel& m = p.models[cur];
                if (to_string(kAllDimensions[cur]) != fields[1])
                    throw ParseError("models out of order", line_no);
                m.input_dim = std::stoul(fields[2]);
                m.hidden_dim = std::stoul(fields[3]);
                m.lambda = std::stod(fields[4]);
                m.seed = std::stoull(fields[5]);
                m.activation = fields[6];
                m.input_weights = DMat(m.hidden_dim, m.input_dim);
                w_row = 0;
            } else if (fields[0] == "w") {
                ElmModel& m = p.models[cur];
                Vec row = parse_values(fields);
                if (cur < 0 || row.size() != m.input_dim || w_row >= m.hidden_dim)
                    throw ParseError("stray weight row", line_no);
                for (std::size_t i = 0; i < m.input_dim; ++i)
                    m.input_weights(w_row, i) = row[i];
                ++w_row;
            } else if (fields[0] == "b") {
                if (cur < 0) throw ParseError("stray bias row", line_no);
                p.models[cur].biases = parse_values(fields);
                if (p.models[cur].biases.size() != p.models[cur].hidden_dim)
                    throw ParseError("bias length mismatch", line_no);
            } else if (fields[0] == "beta") {
                if (cur < 0) throw ParseError("stray beta row", line_no);
                p.models[cur].output_weights = parse_values(fields);
                if (p.models[cur].output_weights.size() != p.models[cur].hidden_dim)
                    throw ParseError("beta length mismatch", line_no);
            } else {
                throw ParseError("unknown record '" + fields[0] + "'", line_no);
            }
        } catch (const std::invalid_argument&) {
            throw ParseError("bad number", line_no);
        }
    }
    if (cur != 3) throw ParseError("expected four models", line_no);
    return p;
}

inline SenticPredictor load_predictor(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open model file '" + path + "'");
    return load_predictor(in);
}

}  // namespace singlex
