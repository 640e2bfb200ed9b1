/*
 * Copyright 2026 hafnia contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hafnia/linalg.hpp"
#include "hafnia/matrix.hpp"
#include "hafnia/rng.hpp"

namespace hafnia {

/// n vectors in R^d (or Q^d); their Gram matrix realizes a PSD matrix.
template <typename T>
struct GramFactor {
    int d = 0;
    std::vector<std::vector<T>> vectors;

    int count() const { return static_cast<int>(vectors.size()); }
};

template <typename T>
GramFactor<double> to_float(const GramFactor<T>& g) {
    GramFactor<double> f;
    f.d = g.d;
    f.vectors.reserve(g.vectors.size());
    for (const auto& v : g.vectors) {
        std::vector<double> w(v.size());
        for (std::size_t k = 0; k < v.size(); ++k) w[k] = entry_to_double(v[k]);
        f.vectors.push_back(std::move(w));
    }
    return f;
}

template <typename T>
T dot(const std::vector<T>& x, const std::vector<T>& y) {
    T s(0);
    for (std::size_t k = 0; k < x.size(); ++k) s += T(x[k] * y[k]);
    return s;
}

template <typename T>
SquareMatrix<T> gram_matrix(const GramFactor<T>& g) {
    const int n = g.count();
    for (const auto& v : g.vectors)
        if (static_cast<int>(v.size()) != g.d)
            throw std::invalid_argument("gram factor vector length differs from d");
    Matrix<T> m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            T v = dot(g.vectors[i], g.vectors[j]);
            m(i, j) = v;
            m(j, i) = v;
        }
    return SquareMatrix<T>(std::move(m), MatrixKind::Symmetric);
}

namespace detail {

inline std::optional<Rational> rational_sqrt(const Rational& x) {
    if (sgn(x) < 0) return std::nullopt;
    mpz_class num = x.get_num(), den = x.get_den();
    if (mpz_perfect_square_p(num.get_mpz_t()) == 0 || mpz_perfect_square_p(den.get_mpz_t()) == 0)
        return std::nullopt;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    Rational r(rn, rd);
    r.canonicalize();
    return r;
}

}  // namespace detail

/// Exact Gram factorization via pivoted L D L^T, when every pivot has a
/// rational square root. Vectors live in Q^rank.
inline std::optional<GramFactor<Rational>> try_factor_psd_exact(const SquareMatrix<Rational>& b) {
    if (b.kind() != MatrixKind::Symmetric)
        throw std::invalid_argument("factor_psd: symmetric matrix required");
    LdltResult<Rational> f = ldlt_psd(b);
    if (!f.psd) throw std::domain_error("factor_psd: matrix is not positive semi-definite");
    std::vector<Rational> roots;
    roots.reserve(f.pivots.size());
    for (const Rational& d : f.pivots) {
        auto r = detail::rational_sqrt(d);
        if (!r) return std::nullopt;
        roots.push_back(*r);
    }
    GramFactor<Rational> g;
    g.d = f.rank;
    g.vectors.assign(b.n(), std::vector<Rational>(f.rank, Rational(0)));
    for (int i = 0; i < b.n(); ++i)
        for (int k = 0; k < f.rank; ++k) g.vectors[i][k] = Rational(f.lower(i, k) * roots[k]);
    return g;
}

/// Float Gram factorization through the symmetric eigen-square-root.
inline GramFactor<double> factor_psd(const SquareMatrix<double>& b, double rel_tol = kRankRelTol) {
    if (b.kind() != MatrixKind::Symmetric)
        throw std::invalid_argument("factor_psd: symmetric matrix required");
    const int n = b.n();
    EigenSym e = eigen_sym(b.mat());
    double lam_max = 0;
    for (double v : e.values) lam_max = std::max(lam_max, std::fabs(v));
    GramFactor<double> g;
    g.d = n;
    g.vectors.assign(n, std::vector<double>(n, 0.0));
    for (int k = 0; k < n; ++k) {
        if (e.values[k] < -rel_tol * std::max(lam_max, 1.0))
            throw std::domain_error("factor_psd: matrix is not positive semi-definite");
        double r = std::sqrt(std::max(e.values[k], 0.0));
        for (int i = 0; i < n; ++i) g.vectors[i][k] = e.vectors(i, k) * r;
    }
    return g;
}

/// Rational input: exact factor when the pivots admit rational roots,
/// otherwise the float eigen route with `used_float_fallback` set.
struct FactorOutcome {
    std::optional<GramFactor<Rational>> exact;
    std::optional<GramFactor<double>> approx;
    bool used_float_fallback = false;
};

inline FactorOutcome factor_psd(const SquareMatrix<Rational>& b) {
    FactorOutcome out;
    out.exact = try_factor_psd_exact(b);
    if (!out.exact) {
        out.used_float_fallback = true;
        out.approx = factor_psd(to_float(b));
    }
    return out;
}

/// Seeded random instances with small integer entries; identical seed gives
/// an identical matrix on every platform.
inline SquareMatrix<Rational> random_symmetric(int n, Seed seed, long lo = -3, long hi = 3) {
    RngStream rng(seed);
    Matrix<Rational> m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            Rational v(rng.next_int(lo, hi));
            m(i, j) = v;
            m(j, i) = v;
        }
    return SquareMatrix<Rational>(std::move(m), MatrixKind::Symmetric);
}

inline SquareMatrix<Rational> random_skew(int n, Seed seed, long lo = -3, long hi = 3) {
    RngStream rng(seed);
    Matrix<Rational> m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Rational v(rng.next_int(lo, hi));
            m(i, j) = v;
            m(j, i) = Rational(-v);
        }
    return SquareMatrix<Rational>(std::move(m), MatrixKind::Skew);
}

/// PSD of prescribed rank as G^T G with G full row rank (resampled until the
/// rank is exact).
inline SquareMatrix<Rational> random_psd(int n, int rank, Seed seed, long lo = -3, long hi = 3) {
    if (rank < 0 || rank > n) throw std::invalid_argument("random_psd: invalid rank");
    RngStream rng(seed);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Matrix<Rational> g(rank, n);
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < n; ++j) g(i, j) = Rational(rng.next_int(lo, hi));
        if (rank_of(g) != rank) continue;
        Matrix<Rational> a = matmul(g.transposed(), g);
        return SquareMatrix<Rational>(std::move(a), MatrixKind::Symmetric);
    }
    throw std::runtime_error("random_psd: could not reach requested rank");
}

inline SquareMatrix<Rational> random_posdef(int n, Seed seed, long lo = -3, long hi = 3) {
    return random_psd(n, n, seed, lo, hi);
}

/// n unit-norm vectors in R^d, normalized Gaussian columns.
inline GramFactor<double> random_unit_vectors(int n, int d, Seed seed) {
    RngStream rng(seed);
    GramFactor<double> g;
    g.d = d;
    g.vectors.reserve(n);
    for (int i = 0; i < n; ++i) {
        std::vector<double> v(d);
        double norm2 = 0;
        do {
            norm2 = 0;
            for (int k = 0; k < d; ++k) {
                v[k] = rng.next_normal();
                norm2 += v[k] * v[k];
            }
        } while (norm2 < 1e-12);
        const double inv = 1.0 / std::sqrt(norm2);
        for (int k = 0; k < d; ++k) v[k] *= inv;
        g.vectors.push_back(v);
    }
    return g;
}

}  // namespace hafnia
