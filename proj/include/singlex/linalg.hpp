#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <random>
#include <vector>

#include "singlex/errors.hpp"

namespace singlex {

using Vec = std::vector<double>;

// Minimal dense row-major matrix.
struct DMat {
    std::size_t rows = 0, cols = 0;
    Vec data;

    DMat() = default;
    DMat(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    Vec col(std::size_t j) const {
        Vec out(rows);
        for (std::size_t i = 0; i < rows; ++i) out[i] = (*this)(i, j);
        return out;
    }
};

inline double dot(const Vec& a, const Vec& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

inline double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

inline void axpy(double alpha, const Vec& x, Vec& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scale(Vec& x, double alpha) {
    for (double& v : x) v *= alpha;
}

namespace detail {

// Column dot products on a DMat.
inline double col_dot(const DMat& m, std::size_t a, std::size_t b) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows; ++i) s += m(i, a) * m(i, b);
    return s;
}

// Deterministic orthonormal completion: overwrite column j of U with a unit
// vector orthogonal to all columns marked as valid.
inline void complete_column(DMat& u, std::size_t j, const std::vector<bool>& valid,
                            std::mt19937_64& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    for (int attempt = 0; attempt < 64; ++attempt) {
        Vec v(u.rows);
        for (double& x : v) x = dist(rng);
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t c = 0; c < u.cols; ++c) {
                if (c == j || !valid[c]) continue;
                double proj = 0.0;
                for (std::size_t i = 0; i < u.rows; ++i) proj += v[i] * u(i, c);
                for (std::size_t i = 0; i < u.rows; ++i) v[i] -= proj * u(i, c);
            }
        }
        double n = norm2(v);
        if (n > 1e-8) {
            for (std::size_t i = 0; i < u.rows; ++i) u(i, j) = v[i] / n;
            return;
        }
    }
    throw Error("orthonormal completion failed");
}

}  // namespace detail

struct SvdResult {
    DMat u;      // m x n, orthonormal columns
    Vec sigma;   // n, descending
    DMat v;      // n x n, orthogonal
};

/// One-sided Jacobi SVD of a dense m x n matrix (m >= rank). Columns with
/// numerically zero singular value get orthonormal filler vectors in U/V.
inline SvdResult jacobi_svd(DMat a) {
    const std::size_t m = a.rows, n = a.cols;
    DMat v(n, n);
    for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

    double scale_est = 0.0;
    for (double x : a.data) scale_est = std::max(scale_est, std::abs(x));
    const double tol = 1e-15;

    if (scale_est > 0.0) {
        for (int sweep = 0; sweep < 60; ++sweep) {
            bool rotated = false;
            for (std::size_t p = 0; p + 1 < n; ++p) {
                for (std::size_t q = p + 1; q < n; ++q) {
                    double app = detail::col_dot(a, p, p);
                    double aqq = detail::col_dot(a, q, q);
                    double apq = detail::col_dot(a, p, q);
                    if (std::abs(apq) <= tol * std::sqrt(app * aqq) ||
                        apq == 0.0)
                        continue;
                    rotated = true;
                    double theta = (aqq - app) / (2.0 * apq);
                    double t = (theta >= 0 ? 1.0 : -1.0) /
                               (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                    double c = 1.0 / std::sqrt(1.0 + t * t);
                    double s = c * t;
                    for (std::size_t i = 0; i < m; ++i) {
                        double ap = a(i, p), aq = a(i, q);
                        a(i, p) = c * ap - s * aq;
                        a(i, q) = s * ap + c * aq;
                    }
                    for (std::size_t i = 0; i < n; ++i) {
                        double vp = v(i, p), vq = v(i, q);
                        v(i, p) = c * vp - s * vq;
                        v(i, q) = s * vp + c * vq;
                    }
                }
            }
            if (!rotated) break;
        }
    }

    Vec sigma(n);
    for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(detail::col_dot(a, j, j));

    // Sort descending, carrying U (columns of a, to be normalized) and V.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    SvdResult out;
    out.u = DMat(m, n);
    out.v = DMat(n, n);
    out.sigma.resize(n);
    std::vector<bool> valid(n, false);
    double smax = sigma.empty() ? 0.0 : sigma[order[0]];
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t src = order[j];
        out.sigma[j] = sigma[src];
        for (std::size_t i = 0; i < n; ++i) out.v(i, j) = v(i, src);
        if (sigma[src] > smax * 1e-13 && sigma[src] > 0.0) {
            for (std::size_t i = 0; i < m; ++i) out.u(i, j) = a(i, src) / sigma[src];
            valid[j] = true;
        }
    }
    std::mt19937_64 rng(0x0badf00dULL);
    for (std::size_t j = 0; j < n; ++j) {
        if (!valid[j]) {
            detail::complete_column(out.u, j, valid, rng);
            valid[j] = true;
        }
    }
    return out;
}

/// Solve the SPD system A x = b by Cholesky; A is overwritten.
inline Vec cholesky_solve(DMat a, Vec b) {
    const std::size_t n = a.rows;
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
        if (d <= 0.0 || !std::isfinite(d)) throw SingularSystem();
        d = std::sqrt(d);
        a(j, j) = d;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
            a(i, j) = s / d;
        }
    }
    // forward then back substitution
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= a(i, k) * b[k];
        b[i] = s / a(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= a(k, ii) * b[k];
        b[ii] = s / a(ii, ii);
    }
    return b;
}

}  // namespace singlex
