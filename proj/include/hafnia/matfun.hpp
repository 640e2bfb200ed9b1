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

#include <bit>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "hafnia/linalg.hpp"
#include "hafnia/matrix.hpp"
#include "hafnia/scalar.hpp"

namespace hafnia {

/// Size guards. The subset-sum functionals are exponential; oversized inputs
/// are refused up front instead of running unboundedly.
inline constexpr int kPerCap = 28;
inline constexpr int kHafCap = 26;
inline constexpr int kPfCap = 26;
inline constexpr int kOracleCap = 10;

namespace detail {

inline void check_cap(int n, int cap, const char* what) {
    // 62: the subset kernels index states by 64-bit masks
    if (n > cap || n > 62)
        throw cap_error(std::string(what) + ": dimension " + std::to_string(n) +
                        " exceeds cap " + std::to_string(std::min(cap, 62)));
}

template <typename T>
struct MaskMemo {
    std::unordered_map<std::uint64_t, T> table;
};

/// Matching sum over the surviving-index bitmask. The smallest surviving
/// index is paired with every other survivor; states reachable this way are
/// Fibonacci-many, not 2^n, so the memo stays small.
template <typename T>
T haf_masked(const Matrix<T>& a, std::uint64_t mask, MaskMemo<T>& memo) {
    if (mask == 0) return T(1);
    auto it = memo.table.find(mask);
    if (it != memo.table.end()) return it->second;
    const int i = std::countr_zero(mask);
    const std::uint64_t rest = mask & (mask - 1);
    T sum(0);
    for (std::uint64_t mm = rest; mm; mm &= mm - 1) {
        const int j = std::countr_zero(mm);
        if (a(i, j) == T(0)) continue;
        sum += T(a(i, j) * haf_masked(a, rest & ~(std::uint64_t(1) << j), memo));
    }
    memo.table.emplace(mask, sum);
    return sum;
}

/// Pfaffian expansion along the lowest surviving row. The sign of each term
/// is (-1)^r with r the 1-based position of the partner inside the surviving
/// index list.
template <typename T>
T pf_masked(const Matrix<T>& a, std::uint64_t mask, MaskMemo<T>& memo) {
    if (mask == 0) return T(1);
    auto it = memo.table.find(mask);
    if (it != memo.table.end()) return it->second;
    const int i = std::countr_zero(mask);
    const std::uint64_t rest = mask & (mask - 1);
    T sum(0);
    int pos = 1;
    for (std::uint64_t mm = rest; mm; mm &= mm - 1) {
        const int j = std::countr_zero(mm);
        ++pos;  // position of j in the surviving list, 1-based
        if (a(i, j) == T(0)) continue;
        T term = T(a(i, j) * pf_masked(a, rest & ~(std::uint64_t(1) << j), memo));
        if (pos % 2 == 0)
            sum += term;
        else
            sum -= term;
    }
    memo.table.emplace(mask, sum);
    return sum;
}

}  // namespace detail

/// Determinant. Exact mode runs fraction-free elimination, float mode
/// pivoted elimination; det of the empty matrix is 1.
template <typename T>
T det(const SquareMatrix<T>& m) {
    T d = det_generic(m.mat());
    if (!is_finite(d)) throw std::overflow_error("determinant overflow");
    return d;
}

/// Permanent by inclusion-exclusion over column subsets with Gray-code row
/// sum updates: O(2^n n) ring operations.
template <typename T>
T per(const SquareMatrix<T>& m, int cap = kPerCap) {
    const int n = m.n();
    if (n == 0) return T(1);
    detail::check_cap(n, cap, "per");
    std::vector<T> rowsum(n, T(0));
    T total(0);
    const std::uint64_t full = std::uint64_t(1) << n;
    for (std::uint64_t k = 1; k < full; ++k) {
        const int j = std::countr_zero(k);
        const std::uint64_t gray = k ^ (k >> 1);
        const bool added = (gray >> j) & 1;
        for (int i = 0; i < n; ++i) {
            if (added)
                rowsum[i] += m(i, j);
            else
                rowsum[i] -= m(i, j);
        }
        T prod(1);
        for (int i = 0; i < n; ++i) prod *= rowsum[i];
        if ((n - std::popcount(gray)) % 2 == 0)
            total += prod;
        else
            total -= prod;
    }
    if (!is_finite(total)) throw std::overflow_error("permanent overflow");
    return total;
}

/// Hafnian: sum over perfect matchings of a symmetric matrix. Odd dimension
/// is 0 by convention; diagonal entries never contribute.
template <typename T>
T haf(const SquareMatrix<T>& m, int cap = kHafCap) {
    if (m.kind() != MatrixKind::Symmetric)
        throw std::invalid_argument("haf requires a symmetric matrix");
    const int n = m.n();
    if (n % 2 != 0) return T(0);
    if (n == 0) return T(1);
    detail::check_cap(n, cap, "haf");
    detail::MaskMemo<T> memo;
    T h = detail::haf_masked(m.mat(), (std::uint64_t(1) << n) - 1, memo);
    if (!is_finite(h)) throw std::overflow_error("hafnian overflow");
    return h;
}

namespace detail {

/// Parlett-Reid: congruence reduction of a skew matrix to tridiagonal form
/// with pivoting; the pfaffian is the product of the (2k, 2k+1) entries
/// times the sign of the row swaps.
inline double pf_float(Matrix<double> a) {
    const int n = a.rows();
    if (n == 0) return 1.0;
    if (n % 2 != 0) return 0.0;
    double value = 1.0;
    for (int k = 0; k + 1 < n; k += 2) {
        int kp = k + 1;
        double best = std::fabs(a(k + 1, k));
        for (int i = k + 2; i < n; ++i) {
            double v = std::fabs(a(i, k));
            if (v > best) {
                best = v;
                kp = i;
            }
        }
        if (kp != k + 1) {
            for (int j = 0; j < n; ++j) std::swap(a(k + 1, j), a(kp, j));
            for (int i = 0; i < n; ++i) std::swap(a(i, k + 1), a(i, kp));
            value = -value;
        }
        if (a(k + 1, k) == 0.0) return 0.0;  // zero column: pfaffian vanishes
        value *= a(k, k + 1);
        if (k + 2 >= n) break;
        const double inv = 1.0 / a(k, k + 1);
        for (int i = k + 2; i < n; ++i) {
            const double tau = a(k, i) * inv;
            if (tau == 0.0) continue;
            for (int j = k + 2; j < n; ++j) a(i, j) += tau * a(j, k + 1);
        }
        for (int i = k + 2; i < n; ++i) {
            const double col = a(i, k + 1);
            if (col == 0.0) continue;
            for (int j = k + 2; j < n; ++j) a(i, j) -= col * a(k, j) * inv;
        }
    }
    return value;
}

}  // namespace detail

/// Pfaffian of an even-dimensional skew matrix. Exact mode expands along the
/// first surviving row with memoization; float mode uses Parlett-Reid
/// tridiagonalization with pivoting.
template <typename T>
T pf(const SquareMatrix<T>& m, int cap = kPfCap) {
    if (m.kind() != MatrixKind::Skew)
        throw std::invalid_argument("pf requires a skew matrix");
    const int n = m.n();
    if (n % 2 != 0) throw std::invalid_argument("pf requires even dimension");
    if (n == 0) return T(1);
    detail::check_cap(n, cap, "pf");
    if constexpr (is_exact_v<T>) {
        detail::MaskMemo<T> memo;
        return detail::pf_masked(m.mat(), (std::uint64_t(1) << n) - 1, memo);
    } else {
        double v = detail::pf_float(m.mat());
        if (!std::isfinite(v)) throw std::overflow_error("pfaffian overflow");
        return v;
    }
}

enum class Functional { Det, Per, Pf, Haf };

inline const char* functional_name(Functional f) {
    switch (f) {
        case Functional::Det: return "det";
        case Functional::Per: return "per";
        case Functional::Pf: return "pf";
        default: return "haf";
    }
}

namespace detail {

inline int permutation_parity(const std::vector<int>& p) {
    int inversions = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) ++inversions;
    return inversions % 2;
}

}  // namespace detail

/// Definition-sum oracle: the literal permutation sum for det/per, and the
/// normalized sum over S_2m for pf/haf. Factorial time; ground truth for the
/// fast kernels in tests only.
template <typename T>
T oracle(Functional kind, const SquareMatrix<T>& m) {
    const int n = m.n();
    detail::check_cap(n, kOracleCap, "oracle");
    if (n == 0) return T(1);

    if (kind == Functional::Det || kind == Functional::Per) {
        std::vector<int> p(n);
        std::iota(p.begin(), p.end(), 0);
        T sum(0);
        do {
            T term(1);
            for (int i = 0; i < n; ++i) term *= m(i, p[i]);
            if (kind == Functional::Per || detail::permutation_parity(p) == 0)
                sum += term;
            else
                sum -= term;
        } while (std::next_permutation(p.begin(), p.end()));
        return sum;
    }

    if (kind == Functional::Pf && m.kind() != MatrixKind::Skew)
        throw std::invalid_argument("oracle(pf) requires a skew matrix");
    if (kind == Functional::Haf && m.kind() != MatrixKind::Symmetric)
        throw std::invalid_argument("oracle(haf) requires a symmetric matrix");
    if (n % 2 != 0) {
        if (kind == Functional::Haf) return T(0);
        throw std::invalid_argument("oracle(pf) requires even dimension");
    }

    const int half = n / 2;
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    T sum(0);
    do {
        T term(1);
        for (int i = 0; i < half; ++i) term *= m(p[2 * i], p[2 * i + 1]);
        if (kind == Functional::Haf || detail::permutation_parity(p) == 0)
            sum += term;
        else
            sum -= term;
    } while (std::next_permutation(p.begin(), p.end()));

    // normalization 1/(m! 2^m)
    T norm(1);
    for (int i = 1; i <= half; ++i) norm *= T(2 * i);
    return T(sum / norm);
}

/// Structural facts feeding the equality-condition checks: rank, all-zero
/// rows (1-based) and diagonality.
struct MatrixDiagnostics {
    int rank = 0;
    std::vector<int> zero_rows;
    bool is_diagonal = true;
};

template <typename T>
MatrixDiagnostics diagnostics(const SquareMatrix<T>& m, double rel_tol = kRankRelTol) {
    MatrixDiagnostics d;
    d.rank = rank_of(m.mat(), rel_tol);
    const int n = m.n();
    for (int i = 0; i < n; ++i) {
        bool zero = true;
        for (int j = 0; j < n; ++j) {
            if (!(m(i, j) == T(0))) {
                zero = false;
                if (i != j) d.is_diagonal = false;
            }
        }
        if (zero) d.zero_rows.push_back(i + 1);
    }
    return d;
}

template <typename T>
bool has_zero_row(const SquareMatrix<T>& m) {
    const int n = m.n();
    for (int i = 0; i < n; ++i) {
        bool zero = true;
        for (int j = 0; j < n && zero; ++j)
            if (!(m(i, j) == T(0))) zero = false;
        if (zero) return true;
    }
    return false;
}

template <typename T>
bool is_diagonal(const SquareMatrix<T>& m) {
    const int n = m.n();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && !(m(i, j) == T(0))) return false;
    return true;
}

}  // namespace hafnia
