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

#include <gtest/gtest.h>

#include "hafnia/batteries.hpp"
#include "hafnia/inequalities.hpp"

namespace hafnia {
namespace {

SquareMatrix<Rational> rq(const std::vector<std::vector<long>>& rows, MatrixKind kind) {
    std::vector<std::vector<Rational>> conv;
    for (const auto& r : rows) conv.emplace_back(r.begin(), r.end());
    return SquareMatrix<Rational>::from_rows(conv, kind);
}

TEST(Classical, SpecExamples) {
    auto marcus_diag = check_classical(ClassicalIneq::Marcus, rq({{2, 0}, {0, 3}},
                                                                 MatrixKind::Symmetric));
    EXPECT_TRUE(marcus_diag.holds);
    EXPECT_TRUE(marcus_diag.equality_observed);
    EXPECT_TRUE(marcus_diag.equality_predicted);
    EXPECT_EQ(marcus_diag.lhs, Rational(6));

    auto ones = rq({{1, 1}, {1, 1}}, MatrixKind::Symmetric);
    auto marcus_ones = check_classical(ClassicalIneq::Marcus, ones);
    EXPECT_TRUE(marcus_ones.holds);
    EXPECT_EQ(marcus_ones.lhs, Rational(2));
    EXPECT_EQ(marcus_ones.rhs, Rational(1));
    EXPECT_FALSE(marcus_ones.equality_observed);
    EXPECT_FALSE(marcus_ones.equality_predicted);

    auto hadamard_ones = check_classical(ClassicalIneq::Hadamard, ones);
    EXPECT_TRUE(hadamard_ones.holds);
    EXPECT_EQ(hadamard_ones.rhs, Rational(0));  // det of the singular matrix
    EXPECT_FALSE(hadamard_ones.equality_observed);

    auto lieb_id = check_classical(ClassicalIneq::LiebPer, SquareMatrix<Rational>::identity(4), 2);
    EXPECT_TRUE(lieb_id.holds);
    EXPECT_TRUE(lieb_id.equality_observed);   // B = 0
    EXPECT_TRUE(lieb_id.equality_predicted);

    EXPECT_THROW(check_classical(ClassicalIneq::Marcus, rq({{0, 1}, {1, 0}},
                                                           MatrixKind::Symmetric)),
                 std::domain_error);
    EXPECT_THROW(check_classical(ClassicalIneq::Fischer, SquareMatrix<Rational>::identity(3), 0),
                 std::invalid_argument);
}

TEST(Classical, FischerEqualityCharacterization) {
    // block diagonal: B = 0 forces equality
    auto blockdiag = rq({{2, 1, 0}, {1, 2, 0}, {0, 0, 5}}, MatrixKind::Symmetric);
    auto rep = check_classical(ClassicalIneq::Fischer, blockdiag, 2);
    EXPECT_TRUE(rep.holds);
    EXPECT_TRUE(rep.equality_observed);
    EXPECT_TRUE(rep.equality_predicted);

    // coupled posdef: strict
    auto coupled = rq({{2, 1}, {1, 2}}, MatrixKind::Symmetric);
    auto rep2 = check_classical(ClassicalIneq::Fischer, coupled, 1);
    EXPECT_TRUE(rep2.holds);
    EXPECT_FALSE(rep2.equality_observed);
    EXPECT_FALSE(rep2.equality_predicted);

    // singular diagonal block: det A' det A'' = 0 = det A, equality predicted
    auto singular = rq({{0, 0, 0}, {0, 1, 1}, {0, 1, 1}}, MatrixKind::Symmetric);
    auto rep3 = check_classical(ClassicalIneq::Fischer, singular, 1);
    EXPECT_TRUE(rep3.holds);
    EXPECT_TRUE(rep3.equality_observed);
    EXPECT_TRUE(rep3.equality_predicted);
}

TEST(LiebCoeffs, SpecExamples) {
    auto one = SquareMatrix<Rational>::identity(1);
    Matrix<Rational> b(1, 1);
    b(0, 0) = Rational(1);
    auto rep = check_lieb_coeffs(one, one, b);
    EXPECT_TRUE(rep.holds);
    EXPECT_NE(rep.detail.find("c=[1, 1]"), std::string::npos);

    // B = 0: c_t = 0 for t < n', c_{n'} = per A' per A''
    auto a1 = random_posdef(2, 5);
    auto a2 = random_posdef(2, 6);
    Matrix<Rational> zero(2, 2);
    auto rep2 = check_lieb_coeffs(a1, a2, zero);
    EXPECT_TRUE(rep2.holds);
    auto poly = block_poly_interpolate(Functional::Per, a1, a2, zero);
    EXPECT_EQ(poly.coeffs[2], Rational(per(a1) * per(a2)));
    EXPECT_EQ(poly.coeffs[0], Rational(0));
    EXPECT_EQ(poly.coeffs[1], Rational(0));

    // posdef blocks, B with a single nonzero entry: c_{n'-1} > 0, c_{n'-2} = 0
    Matrix<Rational> single(2, 2);
    single(0, 1) = Rational(2);
    auto rep3 = check_lieb_coeffs(SquareMatrix<Rational>::identity(2),
                                  SquareMatrix<Rational>::identity(2), single);
    EXPECT_TRUE(rep3.holds);
    auto poly3 = block_poly_interpolate(Functional::Per, SquareMatrix<Rational>::identity(2),
                                        SquareMatrix<Rational>::identity(2), single);
    EXPECT_GT(sgn(poly3.coeffs[1]), 0);
    EXPECT_EQ(poly3.coeffs[0], Rational(0));
}

TEST(LiebCoeffs, RemarkIndefiniteFullMatrix) {
    // diagonal blocks PSD, assembled matrix indefinite: c_t >= 0 must survive
    auto a1 = SquareMatrix<Rational>::identity(2);
    auto a2 = SquareMatrix<Rational>::identity(2);
    Matrix<Rational> b(2, 2);
    b(0, 0) = Rational(3);
    b(1, 1) = Rational(-2);
    SquareMatrix<Rational> assembled(lieb_block(a1, a2, b, Rational(1)).mat(),
                                     MatrixKind::Symmetric);
    EXPECT_FALSE(psd_check(assembled).psd);
    auto rep = check_lieb_coeffs(a1, a2, b);
    EXPECT_TRUE(rep.holds);
}

TEST(DetCoeffs, SpecExamples) {
    auto one = SquareMatrix<Rational>::identity(1);
    Matrix<Rational> b(1, 1);
    b(0, 0) = Rational(1);
    auto rep = check_det_coeffs(one, one, b);
    EXPECT_TRUE(rep.holds);

    // B = 0: only d_{n'} nonzero
    auto a1 = random_posdef(2, 15);
    auto a2 = random_posdef(3, 16);
    Matrix<Rational> zero(2, 3);
    auto rep2 = check_det_coeffs(a1, a2, zero);
    EXPECT_TRUE(rep2.holds);

    // degenerate: singular A' with assembled PSD forces D identically zero
    auto full = detail::zero_out_row(random_psd(4, 4, 21), 0);
    std::vector<int> front{0, 1}, back{2, 3};
    auto rep3 = check_det_coeffs(full.principal(front), full.principal(back),
                                 full.mat().select(front, back));
    EXPECT_TRUE(rep3.holds);
    EXPECT_NE(rep3.detail.find("degenerate"), std::string::npos);

    // rectangular B of intermediate rank
    Matrix<Rational> rank1(2, 3);
    for (int j = 0; j < 3; ++j) rank1(0, j) = Rational(j + 1);
    auto rep4 = check_det_coeffs(a1, a2, rank1);
    EXPECT_TRUE(rep4.holds);
}

TEST(PfHaf, IneqSpecExamples) {
    // haf_ineq: A diagonal, any lambda, B posdef: equality, predicted
    auto diag = rq({{3, 0}, {0, 2}}, MatrixKind::Symmetric);
    auto b = random_posdef(2, 31);
    auto rep = check_pfhaf(PfHafCheck::HafIneq, diag, b, Rational(2));
    EXPECT_TRUE(rep.holds);
    EXPECT_TRUE(rep.equality_observed);
    EXPECT_TRUE(rep.equality_applicable);
    EXPECT_TRUE(rep.equality_predicted);

    // pf_ineq at lambda = 0: both sides det B
    auto skew = random_skew(4, 77);
    auto b4 = random_posdef(4, 78);
    auto rep2 = check_pfhaf(PfHafCheck::PfIneq, skew, b4, Rational(0));
    EXPECT_TRUE(rep2.holds);
    EXPECT_TRUE(rep2.equality_observed);
    EXPECT_TRUE(rep2.equality_predicted);
    EXPECT_EQ(rep2.lhs, det(b4));

    // haf_ineq: A = B = all-ones, lambda = 1: 3 >= 2 strict
    auto ones = rq({{1, 1}, {1, 1}}, MatrixKind::Symmetric);
    auto rep3 = check_pfhaf(PfHafCheck::HafIneq, ones, ones, Rational(1));
    EXPECT_TRUE(rep3.holds);
    EXPECT_EQ(rep3.lhs, Rational(3));
    EXPECT_EQ(rep3.rhs, Rational(2));
    EXPECT_FALSE(rep3.equality_applicable);  // B is singular PSD

    EXPECT_THROW(check_pfhaf(PfHafCheck::HafIneq, ones, ones, Rational(-1)),
                 std::invalid_argument);
}

TEST(PfHaf, CoeffVariants) {
    // pf_coeffs: B = I3, generic skew of rank 2: p ends at t = 1
    auto a3 = rq({{0, 1, 2}, {-1, 0, 3}, {-2, -3, 0}}, MatrixKind::Skew);
    auto rep = check_pfhaf(PfHafCheck::PfCoeffs, a3, SquareMatrix<Rational>::identity(3));
    EXPECT_TRUE(rep.holds);
    EXPECT_EQ(rep.diagnosis.rank, 2);

    // haf_coeffs with a diagonal A: only h_0 survives
    auto diag = rq({{3, 0, 0}, {0, 2, 0}, {0, 0, 1}}, MatrixKind::Symmetric);
    auto reph = check_pfhaf(PfHafCheck::HafCoeffs, diag, random_posdef(3, 41));
    EXPECT_TRUE(reph.holds);

    EXPECT_THROW(check_pfhaf(PfHafCheck::PfCoeffs, diag, SquareMatrix<Rational>::identity(3)),
                 std::invalid_argument);
}

TEST(Moment, SpecExamples) {
    // orthonormal vectors: equality
    GramFactor<Rational> ortho{3, {{Rational(1), Rational(0), Rational(0)},
                                   {Rational(0), Rational(1), Rational(0)}}};
    auto rep = check_moment(ortho);
    EXPECT_TRUE(rep.holds);
    EXPECT_TRUE(rep.equality_observed);
    EXPECT_TRUE(rep.equality_predicted);

    // a zero vector: both sides vanish
    GramFactor<Rational> zeroed{2, {{Rational(0), Rational(0)}, {Rational(1), Rational(1)}}};
    auto rep2 = check_moment(zeroed);
    EXPECT_TRUE(rep2.holds);
    EXPECT_TRUE(rep2.equality_observed);
    EXPECT_TRUE(rep2.equality_predicted);
    EXPECT_EQ(rep2.lhs, Rational(0));

    // repeated unit vector: haf of 4x4 all-ones = 3 > 1
    GramFactor<Rational> same{1, {{Rational(1)}, {Rational(1)}}};
    auto rep3 = check_moment(same);
    EXPECT_EQ(rep3.lhs, Rational(3));
    EXPECT_EQ(rep3.rhs, Rational(1));
    EXPECT_FALSE(rep3.equality_observed);
    EXPECT_FALSE(rep3.equality_predicted);
}

TEST(Chain, LinksAreConsistent) {
    RngStream meta(0x8888);
    for (int rep = 0; rep < 10; ++rep) {
        const int n = static_cast<int>(meta.next_int(1, 5));
        SquareMatrix<Rational> a = random_psd(n, n, meta.next_u64());
        ChainReports chain = check_chain(a);
        EXPECT_TRUE(chain.haf_vs_per.holds);
        EXPECT_TRUE(chain.per_vs_diag.holds);
        EXPECT_TRUE(chain.clean());
        // the chain composes: haf block >= per A >= prod diag
        EXPECT_EQ(chain.haf_vs_per.rhs, chain.per_vs_diag.lhs);
        EXPECT_GE(sgn(Rational(chain.haf_vs_per.lhs - chain.per_vs_diag.rhs)), 0);
    }
}

TEST(Batteries, SmallRunsAreClean) {
    for (const std::string& name : battery_names()) {
        BatteryOutcome out = run_battery(name, 5, 60, 0xbeef0000 + name.size());
        EXPECT_EQ(out.violations, 0) << name << ": "
                                     << (out.failure_lines.empty() ? std::string("ok")
                                                                   : out.failure_lines[0]);
        EXPECT_EQ(out.equality_mismatches, 0) << name;
        EXPECT_GT(out.count, 0) << name;
    }
}

TEST(Batteries, EqualityCasesAreExercised) {
    // the instance mix must actually hit predicted-equality cases
    for (const std::string& name : {std::string("marcus"), std::string("haf_ineq"),
                                    std::string("moment"), std::string("fischer")}) {
        BatteryOutcome out = run_battery(name, 5, 100, 0x2222);
        EXPECT_GT(out.equality_cases, 0) << name;
    }
}

TEST(Batteries, ReplayIsBitIdentical) {
    BatteryOutcome a, b;
    a.name = b.name = "marcus";
    run_battery_instance("marcus", 5, 0x77777, a);
    run_battery_instance("marcus", 5, 0x77777, b);
    ASSERT_EQ(a.count, b.count);
    EXPECT_EQ(a.violations, b.violations);
    EXPECT_EQ(a.equality_cases, b.equality_cases);
}

}  // namespace
}  // namespace hafnia
