#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "singlex/errors.hpp"
#include "singlex/kb_graph.hpp"

namespace singlex {

enum class FeatureKind { Forward, Inverse };

// A matrix column. Forward feature (relation -> other) attaches to the
// subject row; inverse feature (other -> relation) attaches to the object row.
struct Feature {
    FeatureKind kind;
    std::string relation;
    Concept other;

    // Dump spelling: `rel>other` for forward, `other>rel` for inverse.
    std::string key() const {
        return kind == FeatureKind::Forward ? relation + ">" + other
                                            : other + ">" + relation;
    }

    friend bool operator<(const Feature& a, const Feature& b) {
        auto ka = a.key(), kb = b.key();
        if (ka != kb) return ka < kb;
        return a.kind < b.kind;
    }
    friend bool operator==(const Feature& a, const Feature& b) {
        return a.kind == b.kind && a.relation == b.relation && a.other == b.other;
    }
};

inline Feature forward_feature(const std::string& rel, const Concept& other) {
    return {FeatureKind::Forward, rel, other};
}
inline Feature inverse_feature(const std::string& rel, const Concept& other) {
    return {FeatureKind::Inverse, rel, other};
}

// Sparse concept-feature matrix with lexicographically ordered row and
// column indices. Immutable once built.
class ConceptFeatureMatrix {
  public:
    ConceptFeatureMatrix() = default;

    /// Build from an entry map keyed by (concept, feature). Zero values are
    /// dropped; non-finite values rejected.
    static ConceptFeatureMatrix from_entries(
        const std::map<std::pair<Concept, Feature>, double>& entries) {
        ConceptFeatureMatrix m;
        std::map<Concept, std::size_t> row_ix;
        std::map<Feature, std::size_t> col_ix;
        for (const auto& [key, value] : entries) {
            if (!std::isfinite(value))
                throw OutOfRange("matrix entry must be finite");
            if (value == 0.0) continue;
            row_ix.emplace(key.first, 0);
            col_ix.emplace(key.second, 0);
        }
        for (auto& [row_name, ix] : row_ix) {
            ix = m.rows_.size();
            m.rows_.push_back(row_name);
        }
        for (auto& [feature, ix] : col_ix) {
            ix = m.cols_.size();
            m.cols_.push_back(feature);
        }
        for (const auto& [key, value] : entries) {
            if (value == 0.0) continue;
            m.entries_.emplace(
                std::make_pair(row_ix.at(key.first), col_ix.at(key.second)), value);
        }
        m.build_lookup();
        return m;
    }

    std::size_t n_rows() const { return rows_.size(); }
    std::size_t n_cols() const { return cols_.size(); }
    std::size_t nnz() const { return entries_.size(); }

    const std::vector<Concept>& rows() const { return rows_; }
    const std::vector<Feature>& cols() const { return cols_; }

    std::optional<std::size_t> row_of(const Concept& c) const {
        auto it = row_lookup_.find(c);
        if (it == row_lookup_.end()) return std::nullopt;
        return it->second;
    }

    double at(std::size_t i, std::size_t j) const {
        auto it = entries_.find({i, j});
        return it == entries_.end() ? 0.0 : it->second;
    }

    bool has_entry(std::size_t i, std::size_t j) const {
        return entries_.count({i, j}) > 0;
    }

    const std::map<std::pair<std::size_t, std::size_t>, double>& entries() const {
        return entries_;
    }

    // y += A x  and  y += A^T x, over the sparse entries.
    void apply(const std::vector<double>& x, std::vector<double>& y) const {
        for (const auto& [ij, v] : entries_) y[ij.first] += v * x[ij.second];
    }
    void apply_transpose(const std::vector<double>& x, std::vector<double>& y) const {
        for (const auto& [ij, v] : entries_) y[ij.second] += v * x[ij.first];
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& [ij, v] : entries_) s += v * v;
        return std::sqrt(s);
    }

  private:
    void build_lookup() {
        for (std::size_t i = 0; i < rows_.size(); ++i) row_lookup_[rows_[i]] = i;
    }

    std::vector<Concept> rows_;
    std::vector<Feature> cols_;
    std::map<std::pair<std::size_t, std::size_t>, double> entries_;
    std::map<Concept, std::size_t> row_lookup_;
};

/// Convert a graph to its concept-feature matrix. Each assertion (s, r, o, c)
/// contributes [s, r>o] = c and [o, s>r] = c.
inline ConceptFeatureMatrix graph_to_matrix(const KnowledgeGraph& g) {
    std::map<std::pair<Concept, Feature>, double> entries;
    for (const auto& [key, conf] : g.edges()) {
        const auto& [s, r, o] = key;
        entries[{s, forward_feature(r, o)}] = conf;
        entries[{o, inverse_feature(r, s)}] = conf;
    }
    return ConceptFeatureMatrix::from_entries(entries);
}

/// Largest singular value via power iteration on A^T A. Deterministic start.
inline double estimate_spectral_norm(const ConceptFeatureMatrix& a,
                                     double tol = 1e-6,
                                     std::size_t max_iter = 1000) {
    if (a.nnz() == 0) throw SingularSource();
    std::mt19937_64 rng(0x5eed5eedULL);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<double> v(a.n_cols());
    for (double& x : v) x = dist(rng);
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;

    double sigma = 0.0;
    std::vector<double> tmp(a.n_rows()), next(a.n_cols());
    for (std::size_t it = 0; it < max_iter; ++it) {
        std::fill(tmp.begin(), tmp.end(), 0.0);
        a.apply(v, tmp);
        std::fill(next.begin(), next.end(), 0.0);
        a.apply_transpose(tmp, next);
        double nn = 0.0;
        for (double x : next) nn += x * x;
        nn = std::sqrt(nn);
        if (nn == 0.0) return 0.0;  // v fell in the null space
        double new_sigma = std::sqrt(nn);
        for (std::size_t i = 0; i < next.size(); ++i) v[i] = next[i] / nn;
        if (std::abs(new_sigma - sigma) <= tol * std::max(1.0, new_sigma)) {
            return new_sigma;
        }
        sigma = new_sigma;
    }
    return sigma;
}

// Sources to blend; weight std::nullopt means AUTO = 1 / sigma_1(source).
struct BlendSpec {
    std::vector<std::pair<const ConceptFeatureMatrix*, std::optional<double>>> sources;
};

/// Blend matrices over the union of their row/column indices:
/// entry = sum_i weight_i * entry_i.
inline ConceptFeatureMatrix blend(const BlendSpec& spec) {
    if (spec.sources.empty()) throw EmptyInput("blend needs at least one source");
    std::vector<double> weights;
    for (const auto& [m, w] : spec.sources) {
        if (w) {
            if (!std::isfinite(*w) || *w <= 0.0)
                throw OutOfRange("blend weight must be finite and positive");
            weights.push_back(*w);
        } else {
            double sigma1 = estimate_spectral_norm(*m);
            if (sigma1 == 0.0) throw SingularSource();
            weights.push_back(1.0 / sigma1);
        }
    }
    std::map<std::pair<Concept, Feature>, double> acc;
    for (std::size_t s = 0; s < spec.sources.size(); ++s) {
        const ConceptFeatureMatrix& m = *spec.sources[s].first;
        for (const auto& [ij, v] : m.entries())
            acc[{m.rows()[ij.first], m.cols()[ij.second]}] += weights[s] * v;
    }
    return ConceptFeatureMatrix::from_entries(acc);
}

/// Dump as TAB-separated triplets `row_concept<TAB>feature_key<TAB>value`.
inline void dump_matrix(const ConceptFeatureMatrix& m, std::ostream& out) {
    char buf[64];
    for (const auto& [ij, v] : m.entries()) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << m.rows()[ij.first] << '\t' << m.cols()[ij.second].key() << '\t'
            << buf << '\n';
    }
}

/// Parse a matrix dump. A feature key `x>y` is forward when x is a registered
/// relation name, inverse when y is; ambiguous keys resolve to forward.
inline ConceptFeatureMatrix load_matrix(std::istream& in) {
    std::map<std::pair<Concept, Feature>, double> entries;
    std::string line;
    std::size_t line_no = 0;
    const auto& reg = RelationRegistry::instance();
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::skippable(line)) continue;
        auto fields = detail::split_tabs(line);
        if (fields.size() != 3)
            throw ParseError("expected 3 tab-separated fields", line_no);
        std::size_t sep = fields[1].find('>');
        if (sep == std::string::npos || sep == 0 || sep + 1 >= fields[1].size())
            throw ParseError("bad feature key '" + fields[1] + "'", line_no);
        std::string left = fields[1].substr(0, sep);
        std::string right = fields[1].substr(sep + 1);
        Feature f;
        if (reg.contains(left))
            f = forward_feature(left, right);
        else if (reg.contains(right))
            f = inverse_feature(right, left);
        else
            throw ParseError("no registered relation in key '" + fields[1] + "'",
                             line_no);
        double v;
        try {
            v = std::stod(fields[2]);
        } catch (const std::exception&) {
            throw ParseError("bad value '" + fields[2] + "'", line_no);
        }
        entries[{fields[0], f}] = v;
    }
    return ConceptFeatureMatrix::from_entries(entries);
}

inline ConceptFeatureMatrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open matrix file '" + path + "'");
    return load_matrix(in);
}

}  // namespace singlex
