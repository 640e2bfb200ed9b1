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

#include <numeric>
#include <stdexcept>
#include <vector>

#include "hafnia/matfun.hpp"
#include "hafnia/matrix.hpp"

namespace hafnia {

/// Strictly increasing 1-based index subset of {1..n}.
struct SubsetIndex {
    int n = 0;
    std::vector<int> members;

    void validate() const {
        int prev = 0;
        for (int j : members) {
            if (j <= prev || j > n) throw std::invalid_argument("bad subset index list");
            prev = j;
        }
    }
};

/// Sign (-1)^T = (-1)^(t + sum of members) for an even subset |T| = 2t.
inline int subset_sign(const SubsetIndex& s) {
    s.validate();
    if (s.members.size() % 2 != 0)
        throw std::invalid_argument("subset sign requires even cardinality");
    long e = static_cast<long>(s.members.size() / 2);
    for (int j : s.members) e += j;
    return (e % 2 == 0) ? 1 : -1;
}

/// Coefficient vector of a lambda-polynomial, index t = 0..m. Trailing zeros
/// are kept: the degree structure is part of the theorems.
template <typename T>
struct CoeffPolynomial {
    std::vector<T> coeffs;

    int max_degree() const { return static_cast<int>(coeffs.size()) - 1; }

    T eval(const T& x) const {
        T acc(0);
        for (std::size_t i = coeffs.size(); i-- > 0;) acc = T(acc * x + coeffs[i]);
        return acc;
    }

    bool operator==(const CoeffPolynomial& o) const { return coeffs == o.coeffs; }
};

/// Lexicographic enumeration of the k-subsets of {0..n-1}.
template <typename F>
void for_each_subset(int n, int k, F&& fn) {
    if (k < 0 || k > n) return;
    std::vector<int> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        fn(static_cast<const std::vector<int>&>(idx));
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

namespace detail {

inline std::vector<int> complement_of(int n, const std::vector<int>& subset) {
    std::vector<int> out;
    out.reserve(n - subset.size());
    std::size_t s = 0;
    for (int i = 0; i < n; ++i) {
        if (s < subset.size() && subset[s] == i)
            ++s;
        else
            out.push_back(i);
    }
    return out;
}

inline int sign_of_0based(const std::vector<int>& subset) {
    long e = static_cast<long>(subset.size() / 2);
    for (int j : subset) e += j + 1;  // the sign convention counts 1-based indices
    return (e % 2 == 0) ? 1 : -1;
}

}  // namespace detail

/// h_t by the double subset sum
///   h_t = sum_{|S|=2t} sum_{|T|=2t} haf A_SS * haf A_TT * per B_{N\S, N\T}.
template <typename T>
CoeffPolynomial<T> haf_block_coeffs_subset(const SquareMatrix<T>& a, const SquareMatrix<T>& b) {
    if (a.n() != b.n()) throw std::invalid_argument("haf block: size mismatch");
    if (a.kind() != MatrixKind::Symmetric || b.kind() != MatrixKind::Symmetric)
        throw std::invalid_argument("haf block: symmetric matrices required");
    const int n = a.n();
    const int m = n / 2;
    CoeffPolynomial<T> poly;
    poly.coeffs.assign(m + 1, T(0));
    for (int t = 0; t <= m; ++t) {
        std::vector<std::vector<int>> subsets;
        std::vector<T> sub_hafs;
        for_each_subset(n, 2 * t, [&](const std::vector<int>& s) {
            subsets.push_back(s);
            sub_hafs.push_back(haf(a.principal(s)));
        });
        T acc(0);
        for (std::size_t si = 0; si < subsets.size(); ++si) {
            if (sub_hafs[si] == T(0)) continue;
            const std::vector<int> rows = detail::complement_of(n, subsets[si]);
            for (std::size_t ti = 0; ti < subsets.size(); ++ti) {
                if (sub_hafs[ti] == T(0)) continue;
                const std::vector<int> cols = detail::complement_of(n, subsets[ti]);
                T p = per(b.select(rows, cols));
                acc += T(sub_hafs[si] * sub_hafs[ti] * p);
            }
        }
        poly.coeffs[t] = acc;
    }
    return poly;
}

/// p_t by the signed double subset sum
///   p_t = sum (-1)^S (-1)^T pf A_SS * pf A_TT * det B_{N\S, N\T}.
template <typename T>
CoeffPolynomial<T> pf_block_coeffs_subset(const SquareMatrix<T>& a, const SquareMatrix<T>& b) {
    if (a.n() != b.n()) throw std::invalid_argument("pf block: size mismatch");
    if (a.kind() != MatrixKind::Skew) throw std::invalid_argument("pf block: A must be skew");
    if (b.kind() != MatrixKind::Symmetric)
        throw std::invalid_argument("pf block: B must be symmetric");
    const int n = a.n();
    const int m = n / 2;
    CoeffPolynomial<T> poly;
    poly.coeffs.assign(m + 1, T(0));
    for (int t = 0; t <= m; ++t) {
        std::vector<std::vector<int>> subsets;
        std::vector<T> sub_pfs;  // signed: (-1)^S pf A_SS
        for_each_subset(n, 2 * t, [&](const std::vector<int>& s) {
            subsets.push_back(s);
            T v = pf(a.principal(s));
            if (detail::sign_of_0based(s) < 0) v = T(-v);
            sub_pfs.push_back(v);
        });
        T acc(0);
        for (std::size_t si = 0; si < subsets.size(); ++si) {
            if (sub_pfs[si] == T(0)) continue;
            const std::vector<int> rows = detail::complement_of(n, subsets[si]);
            for (std::size_t ti = 0; ti < subsets.size(); ++ti) {
                if (sub_pfs[ti] == T(0)) continue;
                const std::vector<int> cols = detail::complement_of(n, subsets[ti]);
                T d = det_generic(b.mat().select(rows, cols));
                acc += T(sub_pfs[si] * sub_pfs[ti] * d);
            }
        }
        poly.coeffs[t] = acc;
    }
    return poly;
}

/// [[lambda A, B], [B, A]], symmetric.
template <typename T>
SquareMatrix<T> haf_block(const SquareMatrix<T>& a, const SquareMatrix<T>& b, const T& lambda) {
    const int n = a.n();
    if (b.n() != n) throw std::invalid_argument("haf block: size mismatch");
    Matrix<T> m(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            m(i, j) = T(lambda * a(i, j));
            m(i, n + j) = b(i, j);
            m(n + i, j) = b(j, i);
            m(n + i, n + j) = a(i, j);
        }
    return SquareMatrix<T>(std::move(m), MatrixKind::Symmetric);
}

/// [[-lambda A, B], [-B, A]], skew as a whole for skew A, symmetric B.
template <typename T>
SquareMatrix<T> pf_block(const SquareMatrix<T>& a, const SquareMatrix<T>& b, const T& lambda) {
    const int n = a.n();
    if (b.n() != n) throw std::invalid_argument("pf block: size mismatch");
    Matrix<T> m(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            m(i, j) = T(-lambda * a(i, j));
            m(i, n + j) = b(i, j);
            m(n + i, j) = T(-b(j, i));
            m(n + i, n + j) = a(i, j);
        }
    return SquareMatrix<T>(std::move(m), MatrixKind::Skew);
}

/// [[lambda A', B], [B^T, A'']] with A' of size n', A'' of size n'', B n' x n''.
template <typename T>
SquareMatrix<T> lieb_block(const SquareMatrix<T>& a1, const SquareMatrix<T>& a2,
                           const Matrix<T>& b, const T& lambda) {
    const int n1 = a1.n(), n2 = a2.n();
    if (b.rows() != n1 || b.cols() != n2)
        throw std::invalid_argument("lieb block: off-diagonal block shape mismatch");
    Matrix<T> m(n1 + n2, n1 + n2);
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n1; ++j) m(i, j) = T(lambda * a1(i, j));
    for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
            m(i, n1 + j) = b(i, j);
            m(n1 + j, i) = b(i, j);
        }
    for (int i = 0; i < n2; ++i)
        for (int j = 0; j < n2; ++j) m(n1 + i, n1 + j) = a2(i, j);
    return SquareMatrix<T>(std::move(m), MatrixKind::General);
}

/// Newton divided-difference interpolation through (nodes[j], values[j]);
/// exact over rationals. Returns monomial coefficients, length = #nodes.
template <typename T>
CoeffPolynomial<T> interpolate_poly(const std::vector<T>& nodes, const std::vector<T>& values) {
    const std::size_t m = nodes.size();
    if (values.size() != m || m == 0) throw std::invalid_argument("interpolation shape mismatch");
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (nodes[i] == nodes[j]) throw std::invalid_argument("duplicate interpolation nodes");

    std::vector<T> dd = values;
    for (std::size_t level = 1; level < m; ++level)
        for (std::size_t i = m - 1; i >= level; --i)
            dd[i] = T((dd[i] - dd[i - 1]) / (nodes[i] - nodes[i - level]));

    // Horner in coefficient space: p <- p * (x - node_i) + dd_i
    CoeffPolynomial<T> poly;
    std::vector<T> acc(m, T(0));
    for (std::size_t i = m; i-- > 0;) {
        for (std::size_t k = m - 1; k >= 1; --k)
            acc[k] = T(acc[k - 1] - nodes[i] * acc[k]);
        acc[0] = T(dd[i] - nodes[i] * acc[0]);
    }
    poly.coeffs = acc;
    return poly;
}

inline std::vector<int> default_nodes(int count) {
    std::vector<int> nodes(count);
    std::iota(nodes.begin(), nodes.end(), 0);
    return nodes;
}

/// Coefficients of the haf/pf block polynomial by exact interpolation at
/// small integer nodes. For pf the global sign (-1)^floor(n/2) is applied so
/// that p_0 = +det B.
template <typename T>
CoeffPolynomial<T> block_poly_interpolate(Functional kind, const SquareMatrix<T>& a,
                                          const SquareMatrix<T>& b,
                                          std::vector<int> int_nodes = {}) {
    if (kind != Functional::Haf && kind != Functional::Pf)
        throw std::invalid_argument("two-matrix block polynomial is haf or pf");
    const int n = a.n();
    const int m = n / 2;
    if (int_nodes.empty()) int_nodes = default_nodes(m + 1);
    if (static_cast<int>(int_nodes.size()) != m + 1)
        throw std::invalid_argument("need m+1 interpolation nodes");
    std::vector<T> nodes, values;
    nodes.reserve(m + 1);
    values.reserve(m + 1);
    const bool flip = kind == Functional::Pf && (m % 2 == 1);
    for (int node : int_nodes) {
        T lambda(node);
        T v = kind == Functional::Haf ? haf(haf_block(a, b, lambda))
                                      : pf(pf_block(a, b, lambda));
        if (flip) v = T(-v);
        nodes.push_back(lambda);
        values.push_back(v);
    }
    return interpolate_poly(nodes, values);
}

/// Coefficients c_t (per) or d_t (det) of the two-block polynomial
/// per/det [[lambda A', B], [B^T, A'']], degree n' = size of A'.
template <typename T>
CoeffPolynomial<T> block_poly_interpolate(Functional kind, const SquareMatrix<T>& a1,
                                          const SquareMatrix<T>& a2, const Matrix<T>& b,
                                          std::vector<int> int_nodes = {}) {
    if (kind != Functional::Per && kind != Functional::Det)
        throw std::invalid_argument("three-block polynomial is per or det");
    const int m = a1.n();
    if (int_nodes.empty()) int_nodes = default_nodes(m + 1);
    if (static_cast<int>(int_nodes.size()) != m + 1)
        throw std::invalid_argument("need m+1 interpolation nodes");
    std::vector<T> nodes, values;
    for (int node : int_nodes) {
        T lambda(node);
        SquareMatrix<T> block = lieb_block(a1, a2, b, lambda);
        values.push_back(kind == Functional::Per ? per(block) : det(block));
        nodes.push_back(lambda);
    }
    return interpolate_poly(nodes, values);
}

/// Nonnegative imaginary parts {a_i} of the eigenvalues of B^{-1/2} A B^{-1/2}
/// for skew A and positive definite B; multiplicity kept, size floor(n/2).
struct SkewSpectrum {
    std::vector<double> a_values;
};

inline SkewSpectrum skew_spectrum(const SquareMatrix<double>& a, const SquareMatrix<double>& b,
                                  double rel_tol = kRankRelTol) {
    if (a.kind() != MatrixKind::Skew) throw std::invalid_argument("skew_spectrum: A must be skew");
    if (b.kind() != MatrixKind::Symmetric)
        throw std::invalid_argument("skew_spectrum: B must be symmetric");
    const int n = a.n();
    if (b.n() != n) throw std::invalid_argument("skew_spectrum: size mismatch");

    EigenSym eb = eigen_sym(b.mat());
    double lam_max = 0;
    for (double v : eb.values) lam_max = std::max(lam_max, std::fabs(v));
    for (double v : eb.values)
        if (v <= rel_tol * std::max(lam_max, 1.0))
            throw std::domain_error("skew_spectrum: B is not positive definite");

    Matrix<double> b_inv_half(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double s = 0;
            for (int k = 0; k < n; ++k)
                s += eb.vectors(i, k) * eb.vectors(j, k) / std::sqrt(eb.values[k]);
            b_inv_half(i, j) = s;
        }

    Matrix<double> m = matmul(b_inv_half, matmul(a.mat(), b_inv_half));
    // eigenvalues of M are +- a_i sqrt(-1); M^T M = -M^2 has each a_i^2it twice
    Matrix<double> mtm = matmul(m.transposed(), m);
    EigenSym es = eigen_sym(mtm);

    SkewSpectrum spec;
    // ascending eigenvalues; mathematically exact pairs, so take every
    // second one from the top
    for (int k = n - 1; k >= 1; k -= 2)
        spec.a_values.push_back(std::sqrt(std::max(es.values[k], 0.0)));
    return spec;
}

/// det B * prod_i (1 + a_i^2 lambda), expanded; zero a_i contribute factor 1
/// but keep the coefficient vector at full length floor(n/2)+1.
inline CoeffPolynomial<double> product_form_poly(double det_b, const SkewSpectrum& s) {
    CoeffPolynomial<double> poly;
    poly.coeffs.assign(1, det_b);
    for (double a : s.a_values) {
        const double a2 = a * a;
        std::vector<double> next(poly.coeffs.size() + 1, 0.0);
        for (std::size_t i = 0; i < poly.coeffs.size(); ++i) {
            next[i] += poly.coeffs[i];
            next[i + 1] += poly.coeffs[i] * a2;
        }
        poly.coeffs = std::move(next);
    }
    return poly;
}

}  // namespace hafnia
