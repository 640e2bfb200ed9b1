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

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "hafnia/blockpoly.hpp"
#include "hafnia/gram.hpp"
#include "hafnia/report.hpp"
#include "hafnia/wick.hpp"

namespace hafnia {

/// 1 / (d (d+2) (d+4) ... (d+2n-2)), the sphere-average normalizer relating
/// the uniform average on the unit sphere of R^d to the Gaussian expectation.
inline Rational sphere_avg_constant(int d, int n) {
    if (d < 1 || n < 1) throw std::invalid_argument("sphere_avg_constant: d, n >= 1");
    mpz_class den(1);
    for (int k = 0; k < n; ++k) den *= d + 2 * k;
    Rational c(mpz_class(1), den);
    c.canonicalize();
    return c;
}

/// Exact (or float) sphere average of prod (x_i, xi)^2 over the unit sphere:
/// haf[[A,A],[A,A]] times the normalizer, A the Gram matrix.
template <typename T>
T sphere_average_sq(const GramFactor<T>& g, int cap = kHafCap) {
    const int n = g.count();
    if (n == 0) throw std::invalid_argument("sphere_average_sq: need at least one vector");
    for (const auto& v : g.vectors) {
        T nn = dot(v, v);
        if constexpr (is_exact_v<T>) {
            if (!(nn == T(1)))
                throw std::invalid_argument("sphere_average_sq: vectors must be unit norm");
        } else {
            if (std::fabs(entry_to_double(nn) - 1.0) > 1e-12)
                throw std::invalid_argument("sphere_average_sq: vectors must be unit norm");
        }
    }
    SquareMatrix<T> a = gram_matrix(g);
    T block = haf(haf_block(a, a, T(1)), cap);
    if constexpr (is_exact_v<T>)
        return T(block * sphere_avg_constant(g.d, n));
    else
        return block * sphere_avg_constant(g.d, n).get_d();
}

/// Uniform-sphere Monte Carlo of the same average (normalized Gaussians).
inline McEstimate mc_sphere_average(const GramFactor<double>& g, std::uint64_t n_samples,
                                    Seed seed) {
    if (n_samples < 2) throw std::invalid_argument("mc_sphere_average: need n_samples >= 2");
    const int d = g.d;
    const std::size_t n = g.vectors.size();
    constexpr std::uint64_t kChunk = 1 << 14;
    double sum = 0, sum_sq = 0;
    std::vector<double> xi(d);
    for (std::uint64_t base = 0; base < n_samples; base += kChunk) {
        const std::uint64_t end = std::min(n_samples, base + kChunk);
        double csum = 0, csum_sq = 0;
        for (std::uint64_t s = base; s < end; ++s) {
            double norm2 = 0;
            for (int k = 0; k < d; ++k) {
                xi[k] = keyed_normal(seed, s * static_cast<std::uint64_t>(d) + k);
                norm2 += xi[k] * xi[k];
            }
            const double inv = 1.0 / std::sqrt(norm2);
            double val = 1.0;
            for (std::size_t i = 0; i < n; ++i) {
                double dp = 0;
                for (int k = 0; k < d; ++k) dp += g.vectors[i][k] * xi[k];
                dp *= inv;
                val *= dp * dp;
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

/// Unit-vector configuration plus optimizer settings.
struct SphereConfig {
    GramFactor<double> vectors;
    int restarts = 32;
    int max_iters = 60;
    Seed seed = kDefaultSeed;
};

struct SupResult {
    double value = 0;
    std::vector<double> witness;  // in the original ambient coordinates
    int feasible_restarts = 0;
};

namespace detail {

inline double vec_dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

inline void vec_normalize(std::vector<double>& v) {
    double s = std::sqrt(vec_dot(v, v));
    for (double& x : v) x /= s;
}

/// Modified Gram-Schmidt orthonormal basis of the span.
inline std::vector<std::vector<double>> span_basis(const std::vector<std::vector<double>>& xs,
                                                   double tol = 1e-12) {
    std::vector<std::vector<double>> basis;
    for (std::vector<double> v : xs) {
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) {
                double c = vec_dot(b, v);
                for (std::size_t k = 0; k < v.size(); ++k) v[k] -= c * b[k];
            }
        double nn = std::sqrt(vec_dot(v, v));
        if (nn > tol) {
            for (double& x : v) x /= nn;
            basis.push_back(std::move(v));
        }
    }
    return basis;
}

inline void validate_unit(const GramFactor<double>& g) {
    for (const auto& v : g.vectors) {
        if (static_cast<int>(v.size()) != g.d)
            throw std::invalid_argument("sphere config: vector length differs from d");
        if (std::fabs(vec_dot(v, v) - 1.0) > 1e-12)
            throw std::invalid_argument("sphere config: vectors must be unit norm");
    }
}

}  // namespace detail

/// Multi-start projected gradient ascent of sum_i log|(x_i, xi)| over the
/// unit sphere. The returned value is the product at the best witness found:
/// a certified lower bound on the true supremum, never the supremum itself.
/// Inputs with d > n are first projected onto the span of the x_i.
inline SupResult product_norm_sup(const SphereConfig& cfg) {
    const int n = cfg.vectors.count();
    if (n == 0) throw std::invalid_argument("product_norm_sup: empty configuration");
    detail::validate_unit(cfg.vectors);

    std::vector<std::vector<double>> xs = cfg.vectors.vectors;
    int d = cfg.vectors.d;
    std::vector<std::vector<double>> basis;
    if (d > n) {
        basis = detail::span_basis(xs);
        const int r = static_cast<int>(basis.size());
        std::vector<std::vector<double>> coords(n, std::vector<double>(r, 0.0));
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < r; ++k) coords[i][k] = detail::vec_dot(xs[i], basis[k]);
        xs = std::move(coords);
        d = r;
    }

    constexpr double kFeasibleMin = 1e-14;
    std::vector<double> dots(n);
    auto objective = [&](const std::vector<double>& xi, bool& feasible) {
        double f = 0;
        feasible = true;
        for (int i = 0; i < n; ++i) {
            double dp = detail::vec_dot(xs[i], xi);
            if (std::fabs(dp) < 1e-300) {
                feasible = false;
                return -1e300;
            }
            f += std::log(std::fabs(dp));
        }
        return f;
    };

    SupResult best;
    best.value = -1;
    auto ascend = [&](std::vector<double> xi) {
        ++best.feasible_restarts;
        bool feasible = true;
        double f = objective(xi, feasible);
        for (int iter = 0; iter < cfg.max_iters; ++iter) {
            std::vector<double> grad(d, 0.0);
            for (int i = 0; i < n; ++i) {
                const double dp = detail::vec_dot(xs[i], xi);
                for (int k = 0; k < d; ++k) grad[k] += xs[i][k] / dp;
            }
            const double radial = detail::vec_dot(grad, xi);
            double tangent_norm2 = 0;
            for (int k = 0; k < d; ++k) {
                grad[k] -= radial * xi[k];
                tangent_norm2 += grad[k] * grad[k];
            }
            if (tangent_norm2 < 1e-24) break;

            double alpha = 0.5;
            bool improved = false;
            std::vector<double> cand(d);
            while (alpha > 1e-14) {
                for (int k = 0; k < d; ++k) cand[k] = xi[k] + alpha * grad[k];
                detail::vec_normalize(cand);
                bool cand_ok = true;
                double fc = objective(cand, cand_ok);
                if (cand_ok && fc > f) {
                    xi = cand;
                    f = fc;
                    improved = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!improved) break;
        }

        double value = 1.0;
        for (int i = 0; i < n; ++i) value *= std::fabs(detail::vec_dot(xs[i], xi));
        if (value > best.value) {
            best.value = value;
            best.witness = xi;
        }
    };

    auto is_feasible = [&](const std::vector<double>& xi) {
        for (int i = 0; i < n; ++i)
            if (std::fabs(detail::vec_dot(xs[i], xi)) < kFeasibleMin) return false;
        return true;
    };

    // Deterministic signed-diagonal starts sum(+-x_i): for configurations
    // near orthonormal, the optimum sits near one of these and the basins
    // are nearly tied, where random starts alone are unreliable.
    const int sign_patterns = n <= 7 ? (1 << (n - 1)) : 64;
    for (int pattern = 0; pattern < sign_patterns; ++pattern) {
        std::vector<double> xi(d, 0.0);
        for (int i = 0; i < n; ++i) {
            const double s = (i > 0 && (pattern >> (i - 1)) & 1) ? -1.0 : 1.0;
            for (int k = 0; k < d; ++k) xi[k] += s * xs[i][k];
        }
        const double nn = std::sqrt(detail::vec_dot(xi, xi));
        if (nn < 1e-9) continue;
        for (double& c : xi) c /= nn;
        if (is_feasible(xi)) ascend(xi);
    }

    for (int restart = 0; restart < cfg.restarts; ++restart) {
        RngStream rng(keyed_u64(cfg.seed, static_cast<std::uint64_t>(restart)));
        std::vector<double> xi(d);
        bool started = false;
        for (int attempt = 0; attempt < 200 && !started; ++attempt) {
            for (double& c : xi) c = rng.next_normal();
            detail::vec_normalize(xi);
            started = is_feasible(xi);
        }
        if (started) ascend(xi);
    }
    if (best.feasible_restarts == 0)
        throw std::runtime_error("product_norm_sup: no feasible start in any restart");

    if (!basis.empty()) {
        // map the witness back to ambient coordinates
        std::vector<double> ambient(cfg.vectors.d, 0.0);
        for (std::size_t j = 0; j < basis.size(); ++j)
            for (int k = 0; k < cfg.vectors.d; ++k) ambient[k] += best.witness[j] * basis[j][k];
        best.witness = std::move(ambient);
        // certify against the original vectors
        double value = 1.0;
        for (int i = 0; i < n; ++i)
            value *= std::fabs(detail::vec_dot(cfg.vectors.vectors[i], best.witness));
        best.value = value;
    }
    return best;
}

/// The product lower bound 1/sqrt(n(n+2)...(3n-2)) in double precision.
inline double product_bound(int n) {
    double log_den = 0;
    for (int k = 0; k < n; ++k) log_den += std::log(static_cast<double>(n + 2 * k));
    return std::exp(-0.5 * log_den);
}

struct ProductBoundResult {
    InequalityReport<double> report;
    double certified = 0;  // optimizer value (lower bound on the sup)
    double sqrt_avg = 0;   // sqrt of the exact sphere average, the proof's certificate
    double bound = 0;
    std::vector<double> witness;
};

/// Verifies ||f_1...f_n|| >= 1/sqrt(n(n+2)...(3n-2)) on a unit configuration
/// two ways: the optimizer's certified value and the sphere-average route
/// (reduced to the span when d > n, as the proof requires d <= n).
inline ProductBoundResult verify_product_bound_full(const SphereConfig& cfg) {
    const int n = cfg.vectors.count();
    detail::validate_unit(cfg.vectors);

    GramFactor<double> reduced = cfg.vectors;
    if (reduced.d > n) {
        auto basis = detail::span_basis(reduced.vectors);
        const int r = static_cast<int>(basis.size());
        GramFactor<double> proj;
        proj.d = r;
        for (const auto& x : reduced.vectors) {
            std::vector<double> c(r);
            for (int k = 0; k < r; ++k) c[k] = detail::vec_dot(x, basis[k]);
            proj.vectors.push_back(std::move(c));
        }
        reduced = std::move(proj);
    }

    ProductBoundResult out;
    out.bound = product_bound(n);
    out.sqrt_avg = std::sqrt(sphere_average_sq(reduced));
    SupResult sup = product_norm_sup(cfg);
    out.certified = sup.value;
    out.witness = sup.witness;

    out.report.name = "product_bound";
    out.report.lhs = out.certified;
    out.report.rhs = out.bound;
    out.report.slack = out.certified - out.bound;
    const double slop = 1.0 - 1e-9;
    out.report.holds = out.certified >= out.bound * slop && out.sqrt_avg >= out.bound * slop &&
                       out.certified >= out.sqrt_avg * slop;
    out.report.equality_applicable = false;
    out.report.detail = "sqrt_avg=" + scalar_to_string(out.sqrt_avg) +
                        " bound=" + scalar_to_string(out.bound);
    return out;
}

inline InequalityReport<double> verify_product_bound(const SphereConfig& cfg) {
    return verify_product_bound_full(cfg).report;
}

/// Per-n comparison of the three bound denominators: n(n+2)...(3n-2), the
/// older (2n)^n/4, and the conjectured n^n. Raw values are reported as they
/// are; the asymptotic-improvement claim is checked through
/// den_new < (3 sqrt(3) n / e)^n per row.
struct BoundRow {
    int n = 0;
    mpz_class den_new;
    double bound_new = 0;
    double bound_rs = 0;
    double bound_conj = 0;
    double ratio_new_rs = 0;    // bound_new / bound_rs
    double ratio_conj_new = 0;  // bound_conj / bound_new
    bool den_below_estimate = false;
};

inline std::vector<BoundRow> bound_table(int n_max) {
    if (n_max < 2) throw std::invalid_argument("bound_table: n_max >= 2");
    std::vector<BoundRow> rows;
    for (int n = 2; n <= n_max; ++n) {
        BoundRow row;
        row.n = n;
        row.den_new = 1;
        double log_den = 0;
        for (int k = 0; k < n; ++k) {
            row.den_new *= n + 2 * k;
            log_den += std::log(static_cast<double>(n + 2 * k));
        }
        row.bound_new = std::exp(-0.5 * log_den);
        const double log_rs_den = n * std::log(2.0 * n) - std::log(4.0);
        row.bound_rs = std::exp(-0.5 * log_rs_den);
        row.bound_conj = std::exp(-0.5 * n * std::log(static_cast<double>(n)));
        row.ratio_new_rs = row.bound_new / row.bound_rs;
        row.ratio_conj_new = row.bound_conj / row.bound_new;
        const double log_estimate =
            n * (std::log(3.0 * std::sqrt(3.0)) + std::log(static_cast<double>(n)) - 1.0);
        row.den_below_estimate = log_den < log_estimate;
        rows.push_back(std::move(row));
    }
    return rows;
}

struct SearchResult {
    GramFactor<double> config;
    double value = 0;  // lowest certified product norm found
};

/// Best-effort heuristic minimization of the certified product norm over
/// unit-vector configurations in R^n: random restarts around the orthonormal
/// configuration with a shrinking perturbation phase.
inline SearchResult polarization_search(int n, int restarts, Seed seed, int inner_restarts = 16,
                                        int inner_iters = 60) {
    if (n < 1) throw std::invalid_argument("polarization_search: n >= 1");
    auto certify = [&](const GramFactor<double>& g, Seed s) {
        SphereConfig c;
        c.vectors = g;
        c.restarts = inner_restarts;
        c.max_iters = inner_iters;
        c.seed = s;
        return product_norm_sup(c).value;
    };

    SearchResult best;
    best.config.d = n;
    for (int i = 0; i < n; ++i) {
        std::vector<double> e(n, 0.0);
        e[i] = 1.0;
        best.config.vectors.push_back(std::move(e));
    }
    best.value = certify(best.config, keyed_u64(seed, 1));

    for (int r = 0; r < restarts; ++r) {
        GramFactor<double> cand = random_unit_vectors(n, n, keyed_u64(seed, 1000 + r));
        double v = certify(cand, keyed_u64(seed, 2000 + r));
        if (v < best.value) {
            best.value = v;
            best.config = cand;
        }
    }

    double sigma = 0.25;
    RngStream rng(keyed_u64(seed, 42));
    for (int step = 0; step < 2 * restarts && sigma > 1e-3; ++step) {
        GramFactor<double> cand = best.config;
        for (auto& v : cand.vectors) {
            for (double& c : v) c += sigma * rng.next_normal();
            detail::vec_normalize(v);
        }
        double val = certify(cand, keyed_u64(seed, 3000 + step));
        if (val < best.value) {
            best.value = val;
            best.config = cand;
        } else {
            sigma *= 0.85;
        }
    }
    return best;
}

}  // namespace hafnia
