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

#include <sstream>

#include "hafnia/io.hpp"

namespace hafnia {
namespace {

TEST(MatrixFormat, FloatByDefault) {
    std::istringstream in("2 symmetric\n1.5 0\n0 2\n");
    MatrixVariant v = read_matrix(in);
    ASSERT_TRUE(std::holds_alternative<SquareMatrix<double>>(v));
    const auto& m = std::get<SquareMatrix<double>>(v);
    EXPECT_EQ(m.kind(), MatrixKind::Symmetric);
    EXPECT_DOUBLE_EQ(m(0, 0), 1.5);
}

TEST(MatrixFormat, AnyFractionForcesExactMode) {
    std::istringstream in("2 general\n1/3 0.5\n-2 7\n");
    MatrixVariant v = read_matrix(in);
    ASSERT_TRUE(std::holds_alternative<SquareMatrix<Rational>>(v));
    const auto& m = std::get<SquareMatrix<Rational>>(v);
    EXPECT_EQ(m(0, 0), make_rational(1, 3));
    // the decimal is converted exactly from its decimal representation
    EXPECT_EQ(m(0, 1), make_rational(1, 2));
    EXPECT_EQ(m(1, 0), Rational(-2));
}

TEST(MatrixFormat, ModeOverride) {
    std::istringstream in("1 general\n0.1\n");
    MatrixVariant v = read_matrix(in, ScalarMode::Exact);
    ASSERT_TRUE(std::holds_alternative<SquareMatrix<Rational>>(v));
    EXPECT_EQ(std::get<SquareMatrix<Rational>>(v)(0, 0), make_rational(1, 10));

    std::istringstream in2("1 general\n1/4\n");
    MatrixVariant v2 = read_matrix(in2, ScalarMode::Float);
    ASSERT_TRUE(std::holds_alternative<SquareMatrix<double>>(v2));
    EXPECT_DOUBLE_EQ(std::get<SquareMatrix<double>>(v2)(0, 0), 0.25);
}

TEST(MatrixFormat, ErrorsCarryLineInfo) {
    std::istringstream bad_dim("x general\n");
    EXPECT_THROW(read_matrix(bad_dim), parse_error);

    std::istringstream bad_kind("2 weird\n1 0\n0 1\n");
    EXPECT_THROW(read_matrix(bad_kind), parse_error);

    std::istringstream short_row("2 general\n1 2 3\n4 5 6\n");
    try {
        read_matrix(short_row);
        FAIL() << "expected parse_error";
    } catch (const parse_error& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }

    std::istringstream bad_entry("1 general\nfoo\n");
    try {
        read_matrix(bad_entry);
        FAIL() << "expected parse_error";
    } catch (const parse_error& e) {
        EXPECT_NE(std::string(e.what()).find("entry 1"), std::string::npos);
    }

    std::istringstream not_skew("2 skew\n0 1\n1 0\n");
    EXPECT_THROW(read_matrix(not_skew), parse_error);
}

TEST(MatrixFormat, WriteReadRoundTrip) {
    SquareMatrix<Rational> m = random_skew(4, 1234);
    std::ostringstream out;
    write_matrix(out, m);
    std::istringstream in(out.str());
    MatrixVariant v = read_matrix(in, ScalarMode::Exact);
    EXPECT_EQ(std::get<SquareMatrix<Rational>>(v), m);
}

TEST(VectorFormat, ReadsBothModes) {
    std::istringstream in("2 3\n1 0 0\n1/2 1/2 0\n");
    VectorsVariant v = read_vectors(in);
    ASSERT_TRUE(std::holds_alternative<GramFactor<Rational>>(v));
    const auto& g = std::get<GramFactor<Rational>>(v);
    EXPECT_EQ(g.d, 3);
    ASSERT_EQ(g.vectors.size(), 2u);
    EXPECT_EQ(g.vectors[1][0], make_rational(1, 2));

    std::istringstream in2("1 2\n0.6 0.8\n");
    VectorsVariant v2 = read_vectors(in2);
    ASSERT_TRUE(std::holds_alternative<GramFactor<double>>(v2));
}

TEST(ReportJson, McExtrasAppearOnlyWhenSampled) {
    InequalityReport<double> rep;
    rep.name = "conjecture_mc";
    rep.lhs = 2.5;
    rep.rhs = 2.0;
    rep.mc_std_error = 0.1;
    rep.mc_samples = 1000;
    nlohmann::json j = report_json(rep);
    EXPECT_DOUBLE_EQ(j["mc_std_error"].get<double>(), 0.1);
    EXPECT_EQ(j["mc_samples"], 1000);

    InequalityReport<Rational> exact = make_report("marcus", Rational(1), Rational(1));
    nlohmann::json je = report_json(exact);
    EXPECT_FALSE(je.contains("mc_std_error"));
}

TEST(ReportJson, CarriesExactStrings) {
    InequalityReport<Rational> rep = make_report("marcus", make_rational(7, 2), Rational(3));
    rep.diagnosis.condition = "test";
    rep.instance_seed = 42;
    nlohmann::json j = report_json(rep);
    EXPECT_EQ(j["check"], "marcus");
    EXPECT_EQ(j["lhs"], "7/2");
    EXPECT_EQ(j["rhs"], "3");
    EXPECT_EQ(j["slack"], "1/2");
    EXPECT_TRUE(j["holds"].get<bool>());
    EXPECT_FALSE(j["equality_observed"].get<bool>());
    EXPECT_EQ(j["seed"], 42);
}

}  // namespace
}  // namespace hafnia
