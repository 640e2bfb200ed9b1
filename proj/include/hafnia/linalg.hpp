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
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hafnia/matrix.hpp"
#include "hafnia/scalar.hpp"

namespace hafnia {

/// Pivots (and singular values, where they appear) below rel_tol times the
/// largest one count as zero in float-mode rank decisions.
inline constexpr double kRankRelTol = 1e-10;

/// Fraction-free (Bareiss) elimination determinant. Exact on rationals:
/// every division is exact, no rounding anywhere.
inline Rational det_exact(Matrix<Rational> m) {
    const int n = m.rows();
    if (n == 0) return Rational(1);
    int sign = 1;
    Rational prev(1);
    for (int k = 0; k + 1 < n; ++k) {
        int pivot_row = -1;
        for (int i = k; i < n; ++i)
            if (sgn(m(i, k)) != 0) {
                pivot_row = i;
                break;
            }
        if (pivot_row < 0) return Rational(0);
        if (pivot_row != k) {
            for (int j = k; j < n; ++j) std::swap(m(k, j), m(pivot_row, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j)
                m(i, j) = Rational((m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev);
            m(i, k) = 0;
        }
        prev = m(k, k);
    }
    Rational d = m(n - 1, n - 1);
    if (sign < 0) d = Rational(-d);
    return d;
}

/// Partial-pivot Gaussian elimination determinant; overflow surfaces as an
/// error rather than a silent Inf.
inline double det_float(Matrix<double> m) {
    const int n = m.rows();
    if (n == 0) return 1.0;
    double det = 1.0;
    for (int k = 0; k < n; ++k) {
        int pivot_row = k;
        double best = std::fabs(m(k, k));
        for (int i = k + 1; i < n; ++i) {
            double v = std::fabs(m(i, k));
            if (v > best) {
                best = v;
                pivot_row = i;
            }
        }
        if (best == 0.0) return 0.0;
        if (pivot_row != k) {
            for (int j = k; j < n; ++j) std::swap(m(k, j), m(pivot_row, j));
            det = -det;
        }
        det *= m(k, k);
        for (int i = k + 1; i < n; ++i) {
            double f = m(i, k) / m(k, k);
            for (int j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
        }
    }
    if (!std::isfinite(det)) throw std::overflow_error("float determinant overflow");
    return det;
}

template <typename T>
T det_generic(const Matrix<T>& m) {
    if constexpr (is_exact_v<T>)
        return det_exact(m);
    else
        return det_float(m);
}

/// Rank of a rectangular matrix. Exact elimination on rationals; complete
/// pivoting with the relative threshold in float mode.
template <typename T>
int rank_of(Matrix<T> m, double rel_tol = kRankRelTol) {
    const int r = m.rows(), c = m.cols();
    int rank = 0;
    double largest = 0.0;
    for (int k = 0; k < std::min(r, c); ++k) {
        int pi = -1, pj = -1;
        if constexpr (is_exact_v<T>) {
            for (int i = k; i < r && pi < 0; ++i)
                for (int j = k; j < c; ++j)
                    if (sgn(m(i, j)) != 0) {
                        pi = i;
                        pj = j;
                        break;
                    }
            if (pi < 0) break;
        } else {
            double best = 0.0;
            for (int i = k; i < r; ++i)
                for (int j = k; j < c; ++j) {
                    double v = std::fabs(m(i, j));
                    if (v > best) {
                        best = v;
                        pi = i;
                        pj = j;
                    }
                }
            largest = std::max(largest, best);
            if (pi < 0 || best <= rel_tol * largest) break;
        }
        if (pi != k)
            for (int j = 0; j < c; ++j) std::swap(m(k, j), m(pi, j));
        if (pj != k)
            for (int i = 0; i < r; ++i) std::swap(m(i, k), m(i, pj));
        ++rank;
        for (int i = k + 1; i < r; ++i) {
            T f = T(m(i, k) / m(k, k));
            if (f == T(0)) continue;
            for (int j = k; j < c; ++j) m(i, j) = T(m(i, j) - f * m(k, j));
        }
    }
    return rank;
}

/// Symmetric elimination with diagonal pivoting: PSD test, rank, and the
/// L D L^T factor used by the exact Gram factorization.
/// For a PSD matrix a zero diagonal entry forces its whole row to vanish;
/// that is what the zero-pivot branch checks.
template <typename T>
struct LdltResult {
    bool psd = false;
    int rank = 0;
    std::vector<T> pivots;   // positive pivots, in elimination order
    Matrix<T> lower;         // unpermuted: original row i, pivot column k
    std::vector<int> pivot_order;
};

template <typename T>
LdltResult<T> ldlt_psd(const SquareMatrix<T>& a, double rel_tol = kRankRelTol) {
    const int n = a.n();
    Matrix<T> w = a.mat();
    LdltResult<T> res;
    res.lower = Matrix<T>(n, n);
    std::vector<int> remaining(n);
    for (int i = 0; i < n; ++i) remaining[i] = i;

    double diag_scale = 1.0;
    if constexpr (!is_exact_v<T>) {
        for (int i = 0; i < n; ++i) diag_scale = std::max(diag_scale, std::fabs(w(i, i)));
    }

    while (!remaining.empty()) {
        int best_pos = 0;
        for (std::size_t t = 1; t < remaining.size(); ++t)
            if (w(remaining[t], remaining[t]) > w(remaining[best_pos], remaining[best_pos]))
                best_pos = static_cast<int>(t);
        int p = remaining[best_pos];
        T d = w(p, p);

        bool zero_pivot;
        if constexpr (is_exact_v<T>) {
            if (sgn(d) < 0) return res;  // negative diagonal: not PSD
            zero_pivot = sgn(d) == 0;
        } else {
            if (entry_to_double(d) < -rel_tol * diag_scale) return res;
            zero_pivot = entry_to_double(d) <= rel_tol * diag_scale;
        }

        if (zero_pivot) {
            // Largest remaining diagonal is ~0: the rest of the matrix must be
            // (numerically) zero for PSD to hold.
            for (int i : remaining)
                for (int j : remaining) {
                    if constexpr (is_exact_v<T>) {
                        if (sgn(w(i, j)) != 0) return res;
                    } else {
                        if (std::fabs(entry_to_double(w(i, j))) > rel_tol * diag_scale) return res;
                    }
                }
            break;
        }

        res.pivots.push_back(d);
        res.pivot_order.push_back(p);
        const int k = res.rank;
        ++res.rank;
        remaining.erase(remaining.begin() + best_pos);
        for (int i : remaining) res.lower(i, k) = T(w(i, p) / d);
        res.lower(p, k) = T(1);
        for (std::size_t ti = 0; ti < remaining.size(); ++ti) {
            int i = remaining[ti];
            if (w(i, p) == T(0)) continue;
            for (std::size_t tj = ti; tj < remaining.size(); ++tj) {
                int j = remaining[tj];
                T upd = T(w(i, j) - w(i, p) * w(j, p) / d);
                w(i, j) = upd;
                w(j, i) = upd;
            }
        }
    }
    res.psd = true;
    return res;
}

template <typename T>
struct PsdStatus {
    bool psd = false;
    bool posdef = false;
    int rank = 0;
};

template <typename T>
PsdStatus<T> psd_check(const SquareMatrix<T>& a, double rel_tol = kRankRelTol) {
    LdltResult<T> f = ldlt_psd(a, rel_tol);
    return PsdStatus<T>{f.psd, f.psd && f.rank == a.n(), f.rank};
}

struct EigenSym {
    std::vector<double> values;  // ascending
    Matrix<double> vectors;      // column j pairs with values[j]
};

/// Cyclic Jacobi eigensolver for symmetric matrices. Desk-scale sizes only;
/// accuracy near machine precision, which the spectral cross-checks need.
inline EigenSym eigen_sym(Matrix<double> a) {
    const int n = a.rows();
    Matrix<double> v = Matrix<double>::identity(n);
    auto off_norm = [&]() {
        double s = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
        return std::sqrt(2.0 * s);
    };
    double scale = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) scale = std::max(scale, std::fabs(a(i, j)));
    const double tol = 1e-14 * std::max(scale, 1.0) * n;

    for (int sweep = 0; sweep < 100 && off_norm() > tol; ++sweep) {
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (std::fabs(a(p, q)) <= tol / (10.0 * n * n)) continue;
                double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
    }
    EigenSym out;
    out.values.resize(n);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int x, int y) { return a(x, x) < a(y, y); });
    out.vectors = Matrix<double>(n, n);
    for (int j = 0; j < n; ++j) {
        out.values[j] = a(order[j], order[j]);
        for (int i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
    }
    return out;
}

}  // namespace hafnia
