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

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hafnia/blockpoly.hpp"
#include "hafnia/gram.hpp"
#include "hafnia/matfun.hpp"
#include "hafnia/report.hpp"

namespace hafnia {

/// Principal-minor enumeration cap for the exact vanishing characterizations.
inline constexpr int kMinorEnumCap = 10;

namespace detail {

template <typename T>
T prod_diag(const SquareMatrix<T>& m) {
    T p(1);
    for (int i = 0; i < m.n(); ++i) p *= m(i, i);
    return p;
}

template <typename T>
std::string coeffs_to_string(const CoeffPolynomial<T>& poly) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < poly.coeffs.size(); ++i) {
        if (i) os << ", ";
        os << scalar_to_string(poly.coeffs[i]);
    }
    os << "]";
    return os.str();
}

/// Do all t x t subpermanents of b vanish? Order 0 is the empty permanent 1.
inline bool subpermanents_vanish(const Matrix<Rational>& b, int t) {
    if (t == 0) return false;
    if (t > std::min(b.rows(), b.cols())) return true;
    bool all_zero = true;
    for_each_subset(b.rows(), t, [&](const std::vector<int>& rows) {
        if (!all_zero) return;
        for_each_subset(b.cols(), t, [&](const std::vector<int>& cols) {
            if (!all_zero) return;
            Matrix<Rational> sub = b.select(rows, cols);
            if (sgn(per(SquareMatrix<Rational>(std::move(sub), MatrixKind::General))) != 0)
                all_zero = false;
        });
    });
    return all_zero;
}

/// Do all principal 2t x 2t subhafnians of a vanish?
inline bool subhafnians_vanish(const SquareMatrix<Rational>& a, int t) {
    if (t == 0) return false;  // empty hafnian is 1
    if (2 * t > a.n()) return true;
    bool all_zero = true;
    for_each_subset(a.n(), 2 * t, [&](const std::vector<int>& s) {
        if (!all_zero) return;
        if (sgn(haf(a.principal(s))) != 0) all_zero = false;
    });
    return all_zero;
}

inline void fill_diagnosis(InequalityReport<Rational>& rep, const SquareMatrix<Rational>& m,
                           std::string condition) {
    MatrixDiagnostics d = diagnostics(m);
    rep.diagnosis.zero_rows = d.zero_rows;
    rep.diagnosis.diagonal = d.is_diagonal;
    rep.diagnosis.rank = d.rank;
    rep.diagnosis.condition = std::move(condition);
}

inline SquareMatrix<Rational> require_psd(const SquareMatrix<Rational>& a, const char* who) {
    if (!psd_check(a).psd)
        throw std::domain_error(std::string(who) + ": matrix is not positive semi-definite");
    return a;
}

}  // namespace detail

enum class ClassicalIneq { Hadamard, Fischer, Marcus, LiebPer };

inline const char* classical_name(ClassicalIneq w) {
    switch (w) {
        case ClassicalIneq::Hadamard: return "hadamard";
        case ClassicalIneq::Fischer: return "fischer";
        case ClassicalIneq::Marcus: return "marcus";
        default: return "lieb_per";
    }
}

/// The four determinant/permanent inequalities for a PSD matrix, each with
/// its exact equality characterization. `split` is the block boundary
/// (1..n-1) for the Fischer and Lieb variants.
inline InequalityReport<Rational> check_classical(ClassicalIneq which,
                                                  const SquareMatrix<Rational>& a,
                                                  int split = -1) {
    detail::require_psd(a, "check_classical");
    const int n = a.n();

    if (which == ClassicalIneq::Hadamard || which == ClassicalIneq::Marcus) {
        Rational diag = detail::prod_diag(a);
        InequalityReport<Rational> rep =
            which == ClassicalIneq::Hadamard
                ? make_report("hadamard", diag, det(a))
                : make_report("marcus", per(a), diag);
        detail::fill_diagnosis(rep, a, "A has a zero row or is a diagonal matrix");
        rep.equality_applicable = true;
        rep.equality_predicted = rep.diagnosis.diagonal || !rep.diagnosis.zero_rows.empty();
        return rep;
    }

    if (split < 1 || split >= n)
        throw std::invalid_argument("check_classical: split must be in 1..n-1");
    std::vector<int> front, back;
    for (int i = 0; i < split; ++i) front.push_back(i);
    for (int i = split; i < n; ++i) back.push_back(i);
    SquareMatrix<Rational> a1 = a.principal(front);
    SquareMatrix<Rational> a2 = a.principal(back);
    Matrix<Rational> b = a.mat().select(front, back);

    if (which == ClassicalIneq::Fischer) {
        Rational lhs = Rational(det(a1) * det(a2));
        InequalityReport<Rational> rep = make_report("fischer", lhs, det(a));
        detail::fill_diagnosis(rep, a, "det A' * det A'' * B = 0");
        rep.equality_applicable = true;
        rep.equality_predicted = sgn(lhs) == 0 || b.is_zero();
        return rep;
    }

    Rational rhs = Rational(per(a1) * per(a2));
    InequalityReport<Rational> rep = make_report("lieb_per", per(a), rhs);
    detail::fill_diagnosis(rep, a, "A has a zero row or B = 0");
    rep.equality_predicted = !rep.diagnosis.zero_rows.empty() || b.is_zero();
    rep.equality_applicable = true;
    return rep;
}

/// Lieb's coefficient theorem: all c_t of per[[lambda A', B],[B^T, A'']] are
/// nonnegative whenever the diagonal blocks are PSD (the full matrix may be
/// indefinite). With positive definite blocks the vanishing pattern is
/// exact: c_{n'-t} = 0 iff all order-t subpermanents of B vanish.
inline InequalityReport<Rational> check_lieb_coeffs(const SquareMatrix<Rational>& a1,
                                                    const SquareMatrix<Rational>& a2,
                                                    const Matrix<Rational>& b) {
    PsdStatus<Rational> s1 = psd_check(a1), s2 = psd_check(a2);
    if (!s1.psd || !s2.psd)
        throw std::domain_error("check_lieb_coeffs: diagonal blocks must be PSD");
    CoeffPolynomial<Rational> c = block_poly_interpolate(Functional::Per, a1, a2, b);
    const int np = a1.n();

    Rational min_c = c.coeffs[0];
    for (const Rational& v : c.coeffs)
        if (v < min_c) min_c = v;
    bool nonneg = sgn(min_c) >= 0;

    std::string pattern_note;
    bool pattern_ok = true;
    const bool posdef = s1.posdef && s2.posdef;
    const bool enumerable = std::max(b.rows(), b.cols()) <= kMinorEnumCap;
    if (posdef && enumerable) {
        for (int t = 0; t <= np; ++t) {
            bool expect_zero = detail::subpermanents_vanish(b, t);
            bool is_zero = sgn(c.coeffs[np - t]) == 0;
            if (expect_zero != is_zero) {
                pattern_ok = false;
                pattern_note += " vanishing mismatch at t=" + std::to_string(t);
            }
        }
    }

    InequalityReport<Rational> rep = make_report("lieb_coeffs", min_c, Rational(0));
    rep.holds = nonneg && pattern_ok;
    rep.equality_applicable = false;
    rep.diagnosis.rank = rank_of(b);
    rep.diagnosis.condition = "c_{n'-t} = 0 iff all order-t subpermanents of B vanish";
    rep.detail = "c=" + detail::coeffs_to_string(c) + pattern_note;
    return rep;
}

/// The determinant analog: D identically zero when det A' * det A'' = 0 (full
/// matrix PSD there); with positive definite blocks, (-1)^t d_{n'-t} > 0 for
/// t <= rk B and d_{n'-t} = 0 beyond.
inline InequalityReport<Rational> check_det_coeffs(const SquareMatrix<Rational>& a1,
                                                   const SquareMatrix<Rational>& a2,
                                                   const Matrix<Rational>& b) {
    PsdStatus<Rational> s1 = psd_check(a1), s2 = psd_check(a2);
    if (!s1.psd || !s2.psd)
        throw std::domain_error("check_det_coeffs: diagonal blocks must be PSD");
    CoeffPolynomial<Rational> d = block_poly_interpolate(Functional::Det, a1, a2, b);
    const int np = a1.n();
    const bool degenerate = sgn(Rational(det(a1) * det(a2))) == 0;

    InequalityReport<Rational> rep;
    rep.name = "det_coeffs";
    rep.rhs = Rational(0);
    rep.detail = "d=" + detail::coeffs_to_string(d);

    if (degenerate) {
        SquareMatrix<Rational> assembled(lieb_block(a1, a2, b, Rational(1)).mat(),
                                         MatrixKind::Symmetric);
        if (!psd_check(assembled).psd)
            throw std::domain_error(
                "check_det_coeffs: degenerate branch needs the assembled matrix PSD");
        bool all_zero = true;
        for (const Rational& v : d.coeffs)
            if (sgn(v) != 0) all_zero = false;
        rep.holds = all_zero;
        rep.lhs = rep.slack = Rational(all_zero ? 0 : -1);
        rep.diagnosis.condition = "det A' * det A'' = 0 forces D identically 0";
        rep.detail += " (degenerate branch)";
        return rep;
    }

    if (!s1.posdef || !s2.posdef)
        throw std::domain_error("check_det_coeffs: sign pattern branch needs posdef blocks");
    const int rk_b = rank_of(b);
    bool ok = true;
    for (int t = 0; t <= np; ++t) {
        Rational signed_coeff = d.coeffs[np - t];
        if (t % 2 == 1) signed_coeff = Rational(-signed_coeff);
        if (t <= rk_b ? sgn(signed_coeff) <= 0 : sgn(signed_coeff) != 0) ok = false;
    }
    rep.holds = ok;
    rep.lhs = rep.slack = Rational(ok ? 1 : -1);
    rep.diagnosis.rank = rk_b;
    rep.diagnosis.condition = "(-1)^t d_{n'-t} > 0 for t <= rk B, zero beyond";
    return rep;
}

enum class PfHafCheck { PfCoeffs, PfIneq, HafCoeffs, HafIneq };

inline const char* pfhaf_name(PfHafCheck w) {
    switch (w) {
        case PfHafCheck::PfCoeffs: return "pf_coeffs";
        case PfHafCheck::PfIneq: return "pf_ineq";
        case PfHafCheck::HafCoeffs: return "haf_coeffs";
        default: return "haf_ineq";
    }
}

/// The pfaffian/hafnian block bounds. Coefficient variants check
/// nonnegativity plus the exact vanishing characterizations under a positive
/// definite B; inequality variants compare the block functional at lambda
/// against det B (pf) or per B (haf).
inline InequalityReport<Rational> check_pfhaf(PfHafCheck which, const SquareMatrix<Rational>& a,
                                              const SquareMatrix<Rational>& b,
                                              const Rational& lambda = Rational(1)) {
    const bool is_pf = which == PfHafCheck::PfCoeffs || which == PfHafCheck::PfIneq;
    if (is_pf && a.kind() != MatrixKind::Skew)
        throw std::invalid_argument("check_pfhaf: A must be skew for the pf variants");
    if (!is_pf && a.kind() != MatrixKind::Symmetric)
        throw std::invalid_argument("check_pfhaf: A must be symmetric for the haf variants");
    if (a.n() != b.n()) throw std::invalid_argument("check_pfhaf: size mismatch");
    PsdStatus<Rational> sb = psd_check(b);
    if (!sb.psd) throw std::domain_error("check_pfhaf: B must be PSD");
    const int n = a.n();
    const int m = n / 2;

    if (which == PfHafCheck::PfCoeffs || which == PfHafCheck::HafCoeffs) {
        CoeffPolynomial<Rational> poly = block_poly_interpolate(
            is_pf ? Functional::Pf : Functional::Haf, a, b);
        Rational min_c = poly.coeffs[0];
        for (const Rational& v : poly.coeffs)
            if (v < min_c) min_c = v;
        bool nonneg = sgn(min_c) >= 0;

        bool pattern_ok = true;
        std::string pattern_note;
        if (sb.posdef) {
            if (is_pf) {
                const int rk_a = rank_of(a.mat());
                for (int t = 0; t <= m; ++t) {
                    bool expect_zero = 2 * t > rk_a;
                    if (expect_zero != (sgn(poly.coeffs[t]) == 0)) {
                        pattern_ok = false;
                        pattern_note += " rank mismatch at t=" + std::to_string(t);
                    }
                }
            } else if (n <= kMinorEnumCap) {
                for (int t = 0; t <= m; ++t) {
                    bool expect_zero = detail::subhafnians_vanish(a, t);
                    if (expect_zero != (sgn(poly.coeffs[t]) == 0)) {
                        pattern_ok = false;
                        pattern_note += " subhafnian mismatch at t=" + std::to_string(t);
                    }
                }
            }
        }

        InequalityReport<Rational> rep = make_report(pfhaf_name(which), min_c, Rational(0));
        rep.holds = nonneg && pattern_ok;
        rep.equality_applicable = false;
        rep.diagnosis.rank = rank_of(a.mat());
        rep.diagnosis.condition = is_pf ? "p_t = 0 iff 2t > rk A (B posdef)"
                                        : "h_t = 0 iff all 2t x 2t subhafnians of A vanish";
        rep.detail = detail::coeffs_to_string(poly) + pattern_note;
        return rep;
    }

    if (sgn(lambda) < 0)
        throw std::invalid_argument("check_pfhaf: lambda must be nonnegative");

    InequalityReport<Rational> rep;
    if (which == PfHafCheck::PfIneq) {
        Rational lhs = pf(pf_block(a, b, lambda));
        if (m % 2 == 1) lhs = Rational(-lhs);
        rep = make_report("pf_ineq", lhs, det(b));
        rep.equality_applicable = sb.posdef;
        rep.equality_predicted = sgn(lambda) == 0 || a.mat().is_zero();
        detail::fill_diagnosis(rep, a, "lambda A = 0 (B posdef)");
    } else {
        rep = make_report("haf_ineq", haf(haf_block(a, b, lambda)), per(b));
        rep.equality_applicable = sb.posdef;
        rep.equality_predicted = sgn(lambda) == 0 || is_diagonal(a);
        detail::fill_diagnosis(rep, a, "A diagonal or lambda = 0 (B posdef)");
    }
    rep.detail = "lambda=" + scalar_to_string(lambda);
    return rep;
}

/// E(X_1^2 ... X_n^2) >= E X_1^2 ... E X_n^2 for centered jointly normal
/// variables, via the Wick route: haf[[A,A],[A,A]] >= prod a_ii with
/// equality iff A is diagonal or has a zero row.
inline InequalityReport<Rational> check_moment(const GramFactor<Rational>& g) {
    SquareMatrix<Rational> a = gram_matrix(g);
    InequalityReport<Rational> rep =
        make_report("moment", haf(haf_block(a, a, Rational(1))), detail::prod_diag(a));
    detail::fill_diagnosis(rep, a, "x_i pairwise orthogonal or some x_i = 0");
    rep.equality_applicable = true;
    rep.equality_predicted = rep.diagnosis.diagonal || !rep.diagnosis.zero_rows.empty();
    return rep;
}

/// The two links of haf[[A,A],[A,A]] >= per A >= prod a_ii for PSD A.
struct ChainReports {
    InequalityReport<Rational> haf_vs_per;
    InequalityReport<Rational> per_vs_diag;

    bool clean() const { return haf_vs_per.clean() && per_vs_diag.clean(); }
};

inline ChainReports check_chain(const SquareMatrix<Rational>& a) {
    ChainReports out;
    out.haf_vs_per = check_pfhaf(PfHafCheck::HafIneq, a, a, Rational(1));
    out.haf_vs_per.name = "chain_haf_per";
    out.per_vs_diag = check_classical(ClassicalIneq::Marcus, a);
    out.per_vs_diag.name = "chain_per_diag";
    return out;
}

}  // namespace hafnia
