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
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hafnia/gram.hpp"
#include "hafnia/matfun.hpp"
#include "hafnia/report.hpp"
#include "hafnia/rng.hpp"

namespace hafnia {

/// Monte Carlo estimate; std_error is the sample standard deviation over
/// sqrt(n_samples).
struct McEstimate {
    double mean = 0;
    double std_error = 0;
    std::uint64_t n_samples = 0;
    Seed seed = 0;
};

/// Product moment E prod_i (x_i, xi)^{p_i} over a standard Gaussian xi.
template <typename T>
struct MomentSpec {
    GramFactor<T> factors;
    std::vector<int> powers;

    int total_degree() const {
        int s = 0;
        for (int p : powers) s += p;
        return s;
    }

    void validate() const {
        if (powers.size() != factors.vectors.size())
            throw std::invalid_argument("moment spec: powers/factors size mismatch");
        for (int p : powers)
            if (p < 1) throw std::invalid_argument("moment spec: powers must be >= 1");
        for (const auto& v : factors.vectors)
            if (static_cast<int>(v.size()) != factors.d)
                throw std::invalid_argument("moment spec: vector length differs from d");
    }
};

/// (-1)!! = 1, k!! = k (k-2)!! for odd k.
inline Rational double_factorial_exact(long k) {
    if (k < -1 || k % 2 == 0) throw std::invalid_argument("double factorial needs odd k >= -1");
    mpz_class acc(1);
    for (long v = k; v >= 3; v -= 2) acc *= v;
    return Rational(acc);
}

template <typename T>
T double_factorial(long k) {
    if constexpr (is_exact_v<T>)
        return double_factorial_exact(k);
    else
        return double_factorial_exact(k).get_d();
}

/// Exact Gaussian expectation by the Wick formula: repeat each factor by its
/// power and take the hafnian of the expanded Gram matrix. Odd total degree
/// gives 0.
template <typename T>
T wick_expectation(const MomentSpec<T>& spec, int cap = kHafCap) {
    spec.validate();
    if (spec.total_degree() % 2 != 0) return T(0);
    GramFactor<T> expanded;
    expanded.d = spec.factors.d;
    for (std::size_t i = 0; i < spec.powers.size(); ++i)
        for (int r = 0; r < spec.powers[i]; ++r) expanded.vectors.push_back(spec.factors.vectors[i]);
    return haf(gram_matrix(expanded), cap);
}

/// Monte Carlo counterpart. Sampling is keyed by (seed, sample index), and
/// accumulation runs over fixed-size chunks in a fixed order, so the result
/// depends only on (seed, n_samples).
inline McEstimate mc_expectation(const MomentSpec<double>& spec, std::uint64_t n_samples,
                                 Seed seed) {
    spec.validate();
    if (n_samples < 2) throw std::invalid_argument("mc_expectation: need n_samples >= 2");
    const int d = spec.factors.d;
    const std::size_t n = spec.factors.vectors.size();

    constexpr std::uint64_t kChunk = 1 << 14;
    double sum = 0, sum_sq = 0;
    std::vector<double> xi(d);
    for (std::uint64_t base = 0; base < n_samples; base += kChunk) {
        const std::uint64_t end = std::min(n_samples, base + kChunk);
        double csum = 0, csum_sq = 0;
        for (std::uint64_t s = base; s < end; ++s) {
            for (int k = 0; k < d; ++k)
                xi[k] = keyed_normal(seed, s * static_cast<std::uint64_t>(d) + k);
            double val = 1.0;
            for (std::size_t i = 0; i < n; ++i) {
                double dp = 0;
                for (int k = 0; k < d; ++k) dp += spec.factors.vectors[i][k] * xi[k];
                for (int r = 0; r < spec.powers[i]; ++r) val *= dp;
            }
            csum += val;
            csum_sq += val * val;
        }
        sum += csum;
        sum_sq += csum_sq;
    }
    McEstimate est;
    est.n_samples = n_samples;
    est.seed = seed;
    est.mean = sum / static_cast<double>(n_samples);
    const double nn = static_cast<double>(n_samples);
    double var = (sum_sq - nn * est.mean * est.mean) / (nn - 1.0);
    est.std_error = std::sqrt(std::max(var, 0.0) / nn);
    return est;
}

/// The 2pn x 2pn matrix whose (r, s) block is A for all r, s = 1..2p.
template <typename T>
SquareMatrix<T> conjecture_matrix(const SquareMatrix<T>& a, int p, int cap = kHafCap) {
    if (p < 1) throw std::invalid_argument("conjecture_matrix: p >= 1 required");
    const int n = a.n();
    const int big = 2 * p * n;
    detail::check_cap(big, cap, "conjecture matrix");
    Matrix<T> m(big, big);
    for (int i = 0; i < big; ++i)
        for (int j = 0; j < big; ++j) m(i, j) = a(i % n, j % n);
    return SquareMatrix<T>(std::move(m), MatrixKind::Symmetric);
}

namespace detail {

template <typename T>
T conjecture_rhs(const SquareMatrix<T>& a, int p) {
    T rhs = T(1);
    for (int i = 0; i < a.n(); ++i) {
        T d = a(i, i);
        T dp(1);
        for (int r = 0; r < p; ++r) dp *= d;
        rhs *= dp;
    }
    T df = double_factorial<T>(2L * p - 1);
    for (int i = 0; i < a.n(); ++i) rhs *= df;
    return rhs;
}

}  // namespace detail

/// Exact scan of one conjecture instance:
///   haf(block matrix) >= ((2p-1)!!)^n prod a_ii^p,
/// with the conjectured equality condition (zero row or diagonal) recorded
/// as the prediction.
inline InequalityReport<Rational> conjecture_check(const SquareMatrix<Rational>& a, int p,
                                                   int cap = kHafCap) {
    PsdStatus<Rational> st = psd_check(a);
    if (!st.psd) throw std::domain_error("conjecture_check: A must be PSD");
    InequalityReport<Rational> rep =
        make_report("conjecture", haf(conjecture_matrix(a, p, cap)), detail::conjecture_rhs(a, p));
    MatrixDiagnostics diag = diagnostics(a);
    rep.diagnosis.zero_rows = diag.zero_rows;
    rep.diagnosis.diagonal = diag.is_diagonal;
    rep.diagnosis.rank = diag.rank;
    rep.diagnosis.condition = "A has a zero row or is a diagonal matrix (conjectured)";
    rep.equality_applicable = true;
    rep.equality_predicted = diag.is_diagonal || !diag.zero_rows.empty();
    rep.detail = "p=" + std::to_string(p);
    return rep;
}

/// Monte Carlo screen of the same instance: estimates E prod X_i^{2p} by
/// sampling and flags a violation only when the estimate undershoots the
/// bound by more than `sigmas` standard errors. High-degree products are
/// tail-dominated: the empirical mean then sits far below the true mean
/// with a collapsed standard error, so a lower-tail test says nothing.
/// The screen abstains (holds stays true, detail says so) when the
/// effective sample size (sum^2 / sum of squares) drops below
/// `min_effective_samples`. Never proof, only evidence.
inline InequalityReport<double> conjecture_check_mc(const SquareMatrix<Rational>& a, int p,
                                                    std::uint64_t n_samples, Seed seed,
                                                    double sigmas = 4.0,
                                                    double min_effective_samples = 100.0) {
    PsdStatus<Rational> st = psd_check(a);
    if (!st.psd) throw std::domain_error("conjecture_check_mc: A must be PSD");
    MomentSpec<double> spec;
    spec.factors = factor_psd(to_float(a));
    spec.powers.assign(a.n(), 2 * p);
    McEstimate est = mc_expectation(spec, n_samples, seed);
    const double rhs = entry_to_double(detail::conjecture_rhs(to_float(a), p));

    const double nn = static_cast<double>(n_samples);
    const double var = est.std_error * est.std_error * nn;
    const double mean_sq = est.mean * est.mean;
    const double n_eff = mean_sq > 0 ? nn * mean_sq / ((nn - 1) / nn * var + mean_sq) : nn;
    const bool resolvable = n_eff >= min_effective_samples;

    InequalityReport<double> rep;
    rep.name = "conjecture_mc";
    rep.lhs = est.mean;
    rep.rhs = rhs;
    rep.slack = est.mean - rhs;
    rep.holds = !resolvable || est.mean + sigmas * est.std_error >= rhs;
    rep.equality_observed = std::fabs(rep.slack) <= sigmas * est.std_error;
    rep.equality_applicable = false;  // MC cannot certify equalities
    rep.mc_std_error = est.std_error;
    rep.mc_samples = n_samples;
    rep.instance_seed = seed;
    rep.detail = "p=" + std::to_string(p) +
                 (resolvable ? "" : " (tail-dominated estimate, screen abstains)");
    return rep;
}

}  // namespace hafnia
