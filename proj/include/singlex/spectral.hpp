#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "singlex/errors.hpp"
#include "singlex/linalg.hpp"
#include "singlex/matrix.hpp"

namespace singlex {

// Truncated SVD factors: A ~ U_k Sigma_k V_k^T.
struct TsvdResult {
    DMat u;      // rows x k
    Vec sigma;   // k, non-increasing
    DMat v;      // cols x k
};

namespace detail {

// Re-orthogonalize v against the first `count` columns of basis (two passes).
inline void reorthogonalize(Vec& v, const DMat& basis, std::size_t count) {
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t c = 0; c < count; ++c) {
            double proj = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) proj += v[i] * basis(i, c);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= proj * basis(i, c);
        }
    }
}

inline bool fresh_direction(Vec& v, const DMat& basis, std::size_t count,
                            std::mt19937_64& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int attempt = 0; attempt < 32; ++attempt) {
        for (double& x : v) x = dist(rng);
        reorthogonalize(v, basis, count);
        double n = norm2(v);
        if (n > 1e-8) {
            scale(v, 1.0 / n);
            return true;
        }
    }
    return false;
}

// Fresh right-side direction drawn from the row space of `a` (q = A^T w with
// random w), so that for wide matrices the Q basis can span the whole row
// space. Falls back to an arbitrary direction once the row space is
// exhausted; the remaining modes are then exactly zero.
inline bool fresh_row_direction(const ConceptFeatureMatrix& a, Vec& v,
                                const DMat& basis, std::size_t count,
                                std::mt19937_64& rng, double scale_ref) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Vec w(a.n_rows());
    for (int attempt = 0; attempt < 32; ++attempt) {
        for (double& x : w) x = dist(rng);
        std::fill(v.begin(), v.end(), 0.0);
        a.apply_transpose(w, v);
        reorthogonalize(v, basis, count);
        double n = norm2(v);
        if (n > 1e-10 * std::max(scale_ref, 1e-300)) {
            scale(v, 1.0 / n);
            return true;
        }
    }
    return fresh_direction(v, basis, count, rng);
}

}  // namespace detail

/// Top-k singular triplets by Lanczos bidiagonalization with full
/// reorthogonalization and Rayleigh-Ritz extraction on the right Krylov basis.
/// max_iter = 0 selects the default 10 * k.
inline TsvdResult truncated_svd(const ConceptFeatureMatrix& a, std::size_t k,
                                double tol = 1e-10, std::size_t max_iter = 0) {
    const std::size_t m = a.n_rows(), n = a.n_cols();
    const std::size_t min_dim = std::min(m, n);
    if (k == 0 || k > min_dim) throw RankTooLarge(k, min_dim);
    if (max_iter == 0) max_iter = 10 * k;
    const std::size_t d_max = min_dim;
    const std::size_t budget = std::min(std::max(max_iter, k), d_max);

    DMat p_basis(m, d_max), q_basis(n, d_max);
    std::mt19937_64 rng(0x51764c3aULL);

    const bool wide = m < n;
    const double scale_ref = a.frobenius_norm();

    // Deterministic start vector. For wide matrices it must lie in the row
    // space, or the d_max-column Q basis cannot reach an exact factorization.
    Vec q(n);
    if (wide) {
        if (!detail::fresh_row_direction(a, q, q_basis, 0, rng, scale_ref))
            throw NoConvergence(0);
    } else {
        std::normal_distribution<double> dist(0.0, 1.0);
        for (double& x : q) x = dist(rng);
        scale(q, 1.0 / norm2(q));
    }
    for (std::size_t i = 0; i < n; ++i) q_basis(i, 0) = q[i];

    std::size_t d = 0;
    double prev_beta = 0.0;
    Vec p(m), q_next(n);
    SvdResult ritz;
    bool converged = false;

    auto extract = [&](std::size_t cols) {
        // G = A * Q_d, then dense SVD of the small projection.
        DMat g(m, cols);
        for (std::size_t c = 0; c < cols; ++c) {
            Vec qc = q_basis.col(c);
            Vec y(m, 0.0);
            a.apply(qc, y);
            for (std::size_t i = 0; i < m; ++i) g(i, c) = y[i];
        }
        return jacobi_svd(std::move(g));
    };

    auto top_k_converged = [&](const SvdResult& r, std::size_t cols) {
        if (cols < k) return false;
        double smax = r.sigma[0];
        for (std::size_t i = 0; i < k; ++i) {
            if (r.sigma[i] <= smax * 1e-13) continue;  // zero mode, exact
            // residual of the left pair: || A^T u_i - sigma_i v_i ||
            Vec u = r.u.col(i);
            Vec atv(n, 0.0);
            a.apply_transpose(u, atv);
            for (std::size_t j = 0; j < n; ++j) {
                double vj = 0.0;
                for (std::size_t c = 0; c < cols; ++c)
                    vj += q_basis(j, c) * r.v(c, i);
                atv[j] -= r.sigma[i] * vj;
            }
            if (norm2(atv) > tol * std::max(smax, 1e-300)) return false;
        }
        return true;
    };

    const std::size_t check_every = std::max<std::size_t>(k, 8);
    std::size_t steps = 0;
    while (d < budget) {
        // p_d = A q_d - beta_{d-1} p_{d-1}, reorthogonalized.
        std::fill(p.begin(), p.end(), 0.0);
        Vec qd = q_basis.col(d);
        a.apply(qd, p);
        if (d > 0)
            for (std::size_t i = 0; i < m; ++i) p[i] -= prev_beta * p_basis(i, d - 1);
        detail::reorthogonalize(p, p_basis, d);
        double alpha = norm2(p);
        if (alpha > 1e-12) {
            scale(p, 1.0 / alpha);
        } else {
            alpha = 0.0;
            if (!detail::fresh_direction(p, p_basis, d, rng)) break;
        }
        for (std::size_t i = 0; i < m; ++i) p_basis(i, d) = p[i];

        ++d;
        ++steps;

        if (d < d_max) {
            // q_{d} = A^T p_{d-1} - alpha q_{d-1}, reorthogonalized.
            std::fill(q_next.begin(), q_next.end(), 0.0);
            a.apply_transpose(p, q_next);
            detail::reorthogonalize(q_next, q_basis, d);
            prev_beta = norm2(q_next);
            if (prev_beta > 1e-12) {
                scale(q_next, 1.0 / prev_beta);
            } else {
                prev_beta = 0.0;
                bool ok = wide
                              ? detail::fresh_row_direction(a, q_next, q_basis, d,
                                                            rng, scale_ref)
                              : detail::fresh_direction(q_next, q_basis, d, rng);
                if (!ok) break;
            }
            for (std::size_t i = 0; i < n; ++i) q_basis(i, d) = q_next[i];
        }

        bool final_step = (d == budget) || (d == d_max);
        if (d >= k && (steps % check_every == 0 || final_step)) {
            ritz = extract(d);
            if (top_k_converged(ritz, d)) {
                converged = true;
                break;
            }
        }
    }

    if (!converged) {
        // Subspace exhausted at the full min dimension means the
        // factorization is exact regardless of the residual estimate.
        if (d >= k) {
            ritz = extract(d);
            converged = top_k_converged(ritz, d) || d == d_max;
        }
        if (!converged) throw NoConvergence(steps);
    }

    TsvdResult out;
    out.u = DMat(m, k);
    out.v = DMat(n, k);
    out.sigma.assign(ritz.sigma.begin(), ritz.sigma.begin() + k);
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t i = 0; i < m; ++i) out.u(i, c) = ritz.u(i, c);
        for (std::size_t j = 0; j < n; ++j) {
            double vj = 0.0;
            for (std::size_t t = 0; t < d; ++t) vj += q_basis(j, t) * ritz.v(t, c);
            out.v(j, c) = vj;
        }
    }

    // Sign convention: largest-magnitude entry of each U column positive.
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t arg = 0;
        double best = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double mag = std::abs(out.u(i, c));
            if (mag > best) {
                best = mag;
                arg = i;
            }
        }
        if (out.u(arg, c) < 0.0) {
            for (std::size_t i = 0; i < m; ++i) out.u(i, c) = -out.u(i, c);
            for (std::size_t j = 0; j < n; ++j) out.v(j, c) = -out.v(j, c);
        }
    }
    return out;
}

// Per-concept k-dimensional coordinates (rows of U_k Sigma_k) plus the
// retained singular values. Immutable after build.
struct AffectiveSpace {
    std::vector<Concept> concepts;  // sorted, matching matrix rows
    DMat coords;                    // concepts x k
    Vec sigma;

    std::size_t k() const { return sigma.size(); }

    std::size_t index_of(const Concept& c) const {
        auto it = std::lower_bound(concepts.begin(), concepts.end(), c);
        if (it == concepts.end() || *it != c) throw UnknownConcept(c);
        return static_cast<std::size_t>(it - concepts.begin());
    }

    bool contains(const Concept& c) const {
        return std::binary_search(concepts.begin(), concepts.end(), c);
    }

    Vec vector_of(const Concept& c) const {
        std::size_t i = index_of(c);
        Vec out(k());
        for (std::size_t j = 0; j < k(); ++j) out[j] = coords(i, j);
        return out;
    }
};

/// Embed the matrix rows: coordinates = U_k Sigma_k. k is clamped to the
/// min dimension (with a warning) so desk-scale fixtures still embed.
inline AffectiveSpace build_space(const ConceptFeatureMatrix& a, std::size_t k = 100,
                                  double tol = 1e-10, std::size_t max_iter = 0) {
    const std::size_t min_dim = std::min(a.n_rows(), a.n_cols());
    if (min_dim == 0) throw RankTooLarge(k, 0);
    if (k > min_dim) {
        std::cerr << "warning: k = " << k << " clamped to min dimension "
                  << min_dim << "\n";
        k = min_dim;
    }
    TsvdResult t = truncated_svd(a, k, tol, max_iter);
    AffectiveSpace s;
    s.concepts = a.rows();
    s.sigma = t.sigma;
    s.coords = DMat(a.n_rows(), k);
    for (std::size_t i = 0; i < a.n_rows(); ++i)
        for (std::size_t c = 0; c < k; ++c) s.coords(i, c) = t.u(i, c) * t.sigma[c];
    return s;
}

namespace detail {

inline Vec space_row(const AffectiveSpace& s, std::size_t i) {
    Vec out(s.k());
    for (std::size_t c = 0; c < s.k(); ++c) out[c] = s.coords(i, c);
    return out;
}

}  // namespace detail

inline double cosine_similarity(const AffectiveSpace& s, const Concept& a,
                                const Concept& b) {
    Vec va = detail::space_row(s, s.index_of(a));
    Vec vb = detail::space_row(s, s.index_of(b));
    double na = norm2(va), nb = norm2(vb);
    if (na == 0.0) throw ZeroVector(a);
    if (nb == 0.0) throw ZeroVector(b);
    return dot(va, vb) / (na * nb);
}

/// Top-n other concepts by descending cosine similarity, ties lexicographic.
/// Concepts with all-zero vectors are skipped.
inline std::vector<std::pair<Concept, double>> nearest_neighbors(
    const AffectiveSpace& s, const Concept& c, std::size_t n) {
    std::size_t self = s.index_of(c);
    Vec vc = detail::space_row(s, self);
    double nc = norm2(vc);
    if (nc == 0.0) throw ZeroVector(c);
    std::vector<std::pair<Concept, double>> sims;
    for (std::size_t i = 0; i < s.concepts.size(); ++i) {
        if (i == self) continue;
        Vec vi = detail::space_row(s, i);
        double ni = norm2(vi);
        if (ni == 0.0) continue;
        sims.emplace_back(s.concepts[i], dot(vc, vi) / (nc * ni));
    }
    std::stable_sort(sims.begin(), sims.end(), [](const auto& x, const auto& y) {
        if (x.second != y.second) return x.second > y.second;
        return x.first < y.first;
    });
    if (sims.size() > n) sims.resize(n);
    return sims;
}

struct InferredAssertion {
    Concept subject;
    Feature feature;  // always forward
    double score;
};

/// Cumulative analogy: absent forward cells whose low-rank reconstruction
/// reaches tau, sorted by descending score.
inline std::vector<InferredAssertion> infer_assertions(const TsvdResult& t,
                                                       const ConceptFeatureMatrix& a,
                                                       double tau) {
    std::vector<InferredAssertion> out;
    const std::size_t k = t.sigma.size();
    for (std::size_t i = 0; i < a.n_rows(); ++i) {
        Vec row(k);
        for (std::size_t c = 0; c < k; ++c) row[c] = t.u(i, c) * t.sigma[c];
        for (std::size_t j = 0; j < a.n_cols(); ++j) {
            if (a.cols()[j].kind != FeatureKind::Forward) continue;
            if (a.has_entry(i, j)) continue;
            double score = 0.0;
            for (std::size_t c = 0; c < k; ++c) score += row[c] * t.v(j, c);
            if (score >= tau) out.push_back({a.rows()[i], a.cols()[j], score});
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        if (x.score != y.score) return x.score > y.score;
        if (x.subject != y.subject) return x.subject < y.subject;
        return x.feature.key() < y.feature.key();
    });
    return out;
}

/// Space export: `#k=` and `#sigma=` headers, then
/// `concept<TAB>v1<TAB>...<TAB>vk` at full precision.
inline void dump_space(const AffectiveSpace& s, std::ostream& out) {
    char buf[64];
    out << "#k=" << s.k() << '\n';
    out << "#sigma=";
    for (std::size_t c = 0; c < s.k(); ++c) {
        std::snprintf(buf, sizeof(buf), "%.17g", s.sigma[c]);
        out << (c ? "," : "") << buf;
    }
    out << '\n';
    for (std::size_t i = 0; i < s.concepts.size(); ++i) {
        out << s.concepts[i];
        for (std::size_t c = 0; c < s.k(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", s.coords(i, c));
            out << '\t' << buf;
        }
        out << '\n';
    }
}

inline AffectiveSpace load_space(std::istream& in) {
    AffectiveSpace s;
    std::string line;
    std::size_t line_no = 0, k = 0;
    std::vector<Vec> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("#k=", 0) == 0) {
            k = std::stoul(line.substr(3));
            continue;
        }
        if (line.rfind("#sigma=", 0) == 0) {
            std::stringstream ss(line.substr(7));
            std::string tok;
            while (std::getline(ss, tok, ',')) s.sigma.push_back(std::stod(tok));
            continue;
        }
        if (detail::skippable(line)) continue;
        auto fields = detail::split_tabs(line);
        if (k == 0 || fields.size() != k + 1)
            throw ParseError("expected concept plus " + std::to_string(k) +
                                 " coordinates",
                             line_no);
        s.concepts.push_back(fields[0]);
        Vec v(k);
        for (std::size_t c = 0; c < k; ++c) {
            try {
                v[c] = std::stod(fields[c + 1]);
            } catch (const std::exception&) {
                throw ParseError("bad coordinate '" + fields[c + 1] + "'", line_no);
            }
        }
        rows.push_back(std::move(v));
    }
    if (s.sigma.size() != k) throw ParseError("missing or inconsistent #sigma header", 0);
    s.coords = DMat(rows.size(), k);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t c = 0; c < k; ++c) s.coords(i, c) = rows[i][c];
    for (std::size_t i = 1; i < s.concepts.size(); ++i)
        if (s.concepts[i - 1] >= s.concepts[i])
            throw ParseError("concepts must be sorted and unique", 0);
    return s;
}

inline AffectiveSpace load_space(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open space file '" + path + "'");
    return load_space(in);
}

}  // namespace singlex
