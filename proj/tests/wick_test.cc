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
#include "hafnia/wick.hpp"

namespace hafnia {
namespace {

std::vector<Rational> e_k(int d, int k, long scale = 1) {
    std::vector<Rational> v(d, Rational(0));
    v[k] = Rational(scale);
    return v;
}

TEST(DoubleFactorial, Values) {
    EXPECT_EQ(double_factorial_exact(-1), Rational(1));
    EXPECT_EQ(double_factorial_exact(1), Rational(1));
    EXPECT_EQ(double_factorial_exact(3), Rational(3));
    EXPECT_EQ(double_factorial_exact(7), Rational(105));
    EXPECT_EQ(double_factorial_exact(9), Rational(945));
    EXPECT_THROW(double_factorial_exact(4), std::invalid_argument);
    EXPECT_THROW(double_factorial_exact(-3), std::invalid_argument);
}

TEST(WickExpectation, SingleVectorMoments) {
    // E xi^(2p) = (2p-1)!!
    for (int p = 1; p <= 5; ++p) {
        MomentSpec<Rational> spec{{1, {e_k(1, 0)}}, {2 * p}};
        EXPECT_EQ(wick_expectation(spec), double_factorial_exact(2 * p - 1)) << "p=" << p;
    }
    MomentSpec<Rational> sq{{2, {e_k(2, 0)}}, {2}};
    EXPECT_EQ(wick_expectation(sq), Rational(1));
    // odd total degree vanishes
    MomentSpec<Rational> odd{{2, {e_k(2, 0)}}, {3}};
    EXPECT_EQ(wick_expectation(odd), Rational(0));
    // orthogonal pair, powers (1,1): haf [[1,0],[0,1]] = 0
    MomentSpec<Rational> pair{{2, {e_k(2, 0), e_k(2, 1)}}, {1, 1}};
    EXPECT_EQ(wick_expectation(pair), Rational(0));
}

TEST(WickExpectation, MultilinearInDegreeOneFactors) {
    RngStream meta(0xfeed);
    for (int rep = 0; rep < 10; ++rep) {
        const int d = static_cast<int>(meta.next_int(1, 4));
        const int n = 2 * static_cast<int>(meta.next_int(1, 2));
        GramFactor<Rational> g;
        g.d = d;
        for (int i = 0; i < n; ++i) {
            std::vector<Rational> v(d);
            for (int k = 0; k < d; ++k) v[k] = Rational(meta.next_int(-2, 2));
            g.vectors.push_back(v);
        }
        std::vector<int> powers(n, 1);
        MomentSpec<Rational> base{g, powers};
        Rational base_val = wick_expectation(base);

        // scale one factor
        const Rational c(3);
        MomentSpec<Rational> scaled = base;
        for (auto& x : scaled.factors.vectors[0]) x = Rational(c * x);
        EXPECT_EQ(wick_expectation(scaled), Rational(c * base_val));

        // additivity in the first factor
        GramFactor<Rational> g2 = g;
        std::vector<Rational> w(d);
        for (int k = 0; k < d; ++k) w[k] = Rational(meta.next_int(-2, 2));
        g2.vectors[0] = w;
        GramFactor<Rational> gsum = g;
        for (int k = 0; k < d; ++k) gsum.vectors[0][k] = Rational(g.vectors[0][k] + w[k]);
        MomentSpec<Rational> spec2{g2, powers}, spec_sum{gsum, powers};
        EXPECT_EQ(wick_expectation(spec_sum),
                  Rational(base_val + wick_expectation(spec2)));
    }
}

TEST(McExpectation, MatchesKnownMoments) {
    MomentSpec<double> sq{{1, {{1.0}}}, {2}};
    McEstimate est = mc_expectation(sq, 200000, 321);
    EXPECT_NEAR(est.mean, 1.0, 4 * est.std_error);

    MomentSpec<double> fourth{{1, {{1.0}}}, {4}};
    McEstimate est4 = mc_expectation(fourth, 400000, 321);
    EXPECT_NEAR(est4.mean, 3.0, 4 * est4.std_error);

    MomentSpec<double> cross{{2, {{1.0, 0.0}, {0.0, 1.0}}}, {2, 2}};
    McEstimate estc = mc_expectation(cross, 200000, 77);
    EXPECT_NEAR(estc.mean, 1.0, 4 * estc.std_error);
}

TEST(McExpectation, DeterministicInSeedAndCount) {
    MomentSpec<double> spec{{2, {{0.6, 0.8}, {1.0, 0.0}}}, {2, 2}};
    McEstimate a = mc_expectation(spec, 5000, 9);
    McEstimate b = mc_expectation(spec, 5000, 9);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.std_error, b.std_error);
    McEstimate c = mc_expectation(spec, 5000, 10);
    EXPECT_NE(a.mean, c.mean);
}

TEST(McExpectation, AgreesWithWickAcrossRandomSpecs) {
    RngStream meta(0xabcd);
    int within4 = 0, total = 0;
    for (int rep = 0; rep < 10; ++rep) {
        const int d = static_cast<int>(meta.next_int(1, 4));
        const int n = static_cast<int>(meta.next_int(1, 3));
        GramFactor<Rational> g;
        g.d = d;
        std::vector<int> powers;
        int degree = 0;
        for (int i = 0; i < n; ++i) {
            std::vector<Rational> v(d);
            for (int k = 0; k < d; ++k) v[k] = Rational(meta.next_int(-2, 2));
            g.vectors.push_back(v);
            int p = static_cast<int>(meta.next_int(1, 3));
            degree += p;
            powers.push_back(p);
        }
        if (degree % 2 != 0) {
            powers[0] += 1;
        }
        MomentSpec<Rational> exact_spec{g, powers};
        Rational exact = wick_expectation(exact_spec);
        MomentSpec<double> float_spec{to_float(g), powers};
        McEstimate est = mc_expectation(float_spec, 400000, meta.next_u64());
        double err = std::fabs(est.mean - exact.get_d());
        EXPECT_LE(err, 5 * std::max(est.std_error, 1e-12)) << "rep=" << rep;
        ++total;
        if (err <= 4 * std::max(est.std_error, 1e-12)) ++within4;
    }
    EXPECT_GE(within4, total - 1);
}

TEST(ConjectureMatrix, Shapes) {
    auto a = SquareMatrix<Rational>::from_rows({{Rational(5)}}, MatrixKind::Symmetric);
    auto m1 = conjecture_matrix(a, 1);
    EXPECT_EQ(m1.n(), 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) EXPECT_EQ(m1(i, j), Rational(5));

    auto m2 = conjecture_matrix(a, 2);
    EXPECT_EQ(m2.n(), 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) EXPECT_EQ(m2(i, j), Rational(5));

    auto b = random_psd(2, 2, 3);
    auto m3 = conjecture_matrix(b, 1);
    EXPECT_EQ(m3.n(), 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) EXPECT_EQ(m3(i, j), b(i % 2, j % 2));
}

TEST(ConjectureCheck, KnownInstances) {
    // A = [a], p = 2: haf of the 4x4 constant matrix is 3a^2 = rhs
    auto a = SquareMatrix<Rational>::from_rows({{Rational(4)}}, MatrixKind::Symmetric);
    auto rep = conjecture_check(a, 2);
    EXPECT_EQ(rep.lhs, Rational(48));
    EXPECT_EQ(rep.rhs, Rational(48));
    EXPECT_TRUE(rep.holds);
    EXPECT_TRUE(rep.equality_observed);
    EXPECT_TRUE(rep.equality_predicted);

    // A = [[1,1],[1,1]], p = 1: haf of 4x4 all-ones is 3 > 1
    auto ones = SquareMatrix<Rational>::from_rows(
        {{Rational(1), Rational(1)}, {Rational(1), Rational(1)}}, MatrixKind::Symmetric);
    auto rep2 = conjecture_check(ones, 1);
    EXPECT_EQ(rep2.lhs, Rational(3));
    EXPECT_EQ(rep2.rhs, Rational(1));
    EXPECT_TRUE(rep2.holds);
    EXPECT_FALSE(rep2.equality_observed);
    EXPECT_FALSE(rep2.equality_predicted);

    // diagonal: equality at any p
    auto diag = SquareMatrix<Rational>::from_rows(
        {{Rational(2), Rational(0)}, {Rational(0), Rational(3)}}, MatrixKind::Symmetric);
    auto rep3 = conjecture_check(diag, 2);
    EXPECT_TRUE(rep3.equality_observed);
    EXPECT_TRUE(rep3.equality_predicted);

    EXPECT_THROW(conjecture_check(SquareMatrix<Rational>::from_rows(
                                      {{Rational(0), Rational(1)}, {Rational(1), Rational(0)}},
                                      MatrixKind::Symmetric),
                                  1),
                 std::domain_error);
}

TEST(ConjectureScan, SmallExactScanIsClean) {
    BatteryOutcome out = conjecture_scan(8, 25, 0xc0ffee);
    EXPECT_GT(out.count, 0);
    EXPECT_EQ(out.violations, 0) << (out.failure_lines.empty() ? std::string() : out.failure_lines[0]);
    EXPECT_EQ(out.equality_mismatches, 0);
    EXPECT_GT(out.equality_cases, 0);  // diagonal/zero-row instances are in the mix
}

TEST(ConjectureScan, McScreenIsClean) {
    McScreenOutcome out = conjecture_mc_screen(12, 2, 20000, 0xdecaf);
    EXPECT_GT(out.count, 0);
    EXPECT_EQ(out.screened_violations, 0);
}

}  // namespace
}  // namespace hafnia
