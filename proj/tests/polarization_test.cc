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

#include <cmath>

#include "hafnia/polarization.hpp"

namespace hafnia {
namespace {

GramFactor<Rational> orthonormal_exact(int n) {
    GramFactor<Rational> g;
    g.d = n;
    for (int i = 0; i < n; ++i) {
        std::vector<Rational> e(n, Rational(0));
        e[i] = Rational(1);
        g.vectors.push_back(std::move(e));
    }
    return g;
}

GramFactor<double> orthonormal_float(int n) {
    GramFactor<double> g;
    g.d = n;
    for (int i = 0; i < n; ++i) {
        std::vector<double> e(n, 0.0);
        e[i] = 1.0;
        g.vectors.push_back(std::move(e));
    }
    return g;
}

TEST(SphereConstant, PaperValues) {
    EXPECT_EQ(sphere_avg_constant(1, 1), Rational(1));
    EXPECT_EQ(sphere_avg_constant(3, 2), make_rational(1, 15));
    EXPECT_EQ(sphere_avg_constant(2, 2), make_rational(1, 8));
}

TEST(SphereConstant, ProductInverseAndGammaForm) {
    for (int d = 1; d <= 50; ++d)
        for (int n = 1; n <= 50; ++n) {
            Rational c = sphere_avg_constant(d, n);
            mpz_class den(1);
            for (int k = 0; k < n; ++k) den *= d + 2 * k;
            ASSERT_EQ(Rational(c * Rational(den)), Rational(1)) << d << ", " << n;
            // Gamma(d/2) / (2^n Gamma(d/2+n)) via lgamma
            double log_c = std::lgamma(d / 2.0) - n * std::log(2.0) - std::lgamma(d / 2.0 + n);
            ASSERT_NEAR(std::log(c.get_d()), log_c, 1e-12 * std::max(1.0, std::fabs(log_c)))
                << d << ", " << n;
        }
}

TEST(SphereAverage, ExactCases) {
    // orthonormal: exactly the constant (the minimum)
    for (int n = 1; n <= 5; ++n)
        EXPECT_EQ(sphere_average_sq(orthonormal_exact(n)), sphere_avg_constant(n, n)) << n;

    // x1 = x2 in d = 2: 3 * (1/8)
    GramFactor<Rational> same{2, {{Rational(1), Rational(0)}, {Rational(1), Rational(0)}}};
    EXPECT_EQ(sphere_average_sq(same), make_rational(3, 8));

    // single vector in d = 2: 1/2
    GramFactor<Rational> single{2, {{Rational(0), Rational(1)}}};
    EXPECT_EQ(sphere_average_sq(single), make_rational(1, 2));

    GramFactor<Rational> not_unit{2, {{Rational(2), Rational(0)}}};
    EXPECT_THROW(sphere_average_sq(not_unit), std::invalid_argument);
}

TEST(SphereAverage, McAgreesWithExact) {
    RngStream meta(0x5555);
    for (int rep = 0; rep < 6; ++rep) {
        const int n = static_cast<int>(meta.next_int(1, 5));
        const int d = static_cast<int>(meta.next_int(1, 5));
        GramFactor<double> g = random_unit_vectors(n, d, meta.next_u64());
        double exact = sphere_average_sq(g);
        McEstimate est = mc_sphere_average(g, 300000, meta.next_u64());
        EXPECT_NEAR(est.mean, exact, 5 * std::max(est.std_error, 1e-12))
            << "n=" << n << " d=" << d;
    }
}

TEST(SphereAverage, OrthonormalMinimizesWithinRandomSet) {
    const int n = 3;
    Rational floor_value = sphere_average_sq(orthonormal_exact(n));
    RngStream meta(0x6666);
    for (int rep = 0; rep < 20; ++rep) {
        GramFactor<double> g = random_unit_vectors(n, n, meta.next_u64());
        EXPECT_GE(sphere_average_sq(g), floor_value.get_d() * (1 - 1e-12));
    }
}

TEST(ProductNormSup, KnownConfigurations) {
    // n = 1: the functional norm, attained at xi = x1
    SphereConfig one;
    one.vectors = orthonormal_float(1);
    SupResult r1 = product_norm_sup(one);
    EXPECT_NEAR(r1.value, 1.0, 1e-12);

    // orthonormal in R^n: sup prod |xi_i| = n^(-n/2) at the diagonal point
    for (int n = 2; n <= 4; ++n) {
        SphereConfig cfg;
        cfg.vectors = orthonormal_float(n);
        cfg.seed = 99;
        SupResult r = product_norm_sup(cfg);
        const double target = std::pow(static_cast<double>(n), -0.5 * n);
        EXPECT_NEAR(r.value, target, 1e-9 * target) << "n=" << n;
        for (double w : r.witness)
            EXPECT_NEAR(std::fabs(w), 1.0 / std::sqrt(static_cast<double>(n)), 1e-5);
    }

    // x1 = x2 = e1 in R^2: sup xi_1^2 = 1
    SphereConfig dup;
    dup.vectors.d = 2;
    dup.vectors.vectors = {{1.0, 0.0}, {1.0, 0.0}};
    SupResult rd = product_norm_sup(dup);
    EXPECT_NEAR(rd.value, 1.0, 1e-10);
}

TEST(ProductNormSup, InvariancesWithMatchedSeeds) {
    GramFactor<double> base = random_unit_vectors(4, 4, 2024);
    SphereConfig cfg;
    cfg.vectors = base;
    cfg.seed = 11;
    const double v0 = product_norm_sup(cfg).value;

    // permutation of the vectors
    SphereConfig perm = cfg;
    std::swap(perm.vectors.vectors[0], perm.vectors.vectors[3]);
    EXPECT_NEAR(product_norm_sup(perm).value, v0, 1e-8 * v0);

    // sign flip of one vector
    SphereConfig flip = cfg;
    for (double& c : flip.vectors.vectors[1]) c = -c;
    EXPECT_NEAR(product_norm_sup(flip).value, v0, 1e-8 * v0);

    // global rotation (Givens in coordinates 0,1)
    SphereConfig rot = cfg;
    const double th = 0.7, c = std::cos(th), s = std::sin(th);
    for (auto& v : rot.vectors.vectors) {
        const double a = v[0], b = v[1];
        v[0] = c * a - s * b;
        v[1] = s * a + c * b;
    }
    EXPECT_NEAR(product_norm_sup(rot).value, v0, 1e-8 * v0);
}

TEST(ProductNormSup, AmbientReductionHandlesLargeD) {
    // two vectors in R^5: sup over the span, witness mapped back
    GramFactor<double> g = random_unit_vectors(2, 5, 31337);
    SphereConfig cfg;
    cfg.vectors = g;
    SupResult r = product_norm_sup(cfg);
    EXPECT_EQ(r.witness.size(), 5u);
    double norm2 = 0;
    for (double w : r.witness) norm2 += w * w;
    EXPECT_NEAR(norm2, 1.0, 1e-9);
    EXPECT_GT(r.value, 0.0);
}

TEST(ProductBound, CertificatesHold) {
    RngStream meta(0x9999);
    for (int n = 2; n <= 5; ++n) {
        for (int rep = 0; rep < 5; ++rep) {
            const int d = static_cast<int>(meta.next_int(1, n));
            SphereConfig cfg;
            cfg.vectors = random_unit_vectors(n, d, meta.next_u64());
            cfg.seed = meta.next_u64();
            ProductBoundResult r = verify_product_bound_full(cfg);
            EXPECT_TRUE(r.report.holds) << "n=" << n << " d=" << d << " cert=" << r.certified
                                        << " sqrt_avg=" << r.sqrt_avg << " bound=" << r.bound;
            EXPECT_GE(r.sqrt_avg, r.bound * (1 - 1e-9));
            EXPECT_GE(r.certified, r.sqrt_avg * (1 - 1e-9));
        }
    }
}

TEST(ProductBound, OrthonormalEqualityCase) {
    // n = d = 3 orthonormal: sqrt(avg) = 1/sqrt(105) = bound exactly
    SphereConfig cfg;
    cfg.vectors = orthonormal_float(3);
    ProductBoundResult r = verify_product_bound_full(cfg);
    EXPECT_NEAR(r.sqrt_avg, 1.0 / std::sqrt(105.0), 1e-12);
    EXPECT_NEAR(r.bound, 1.0 / std::sqrt(105.0), 1e-12);
    EXPECT_TRUE(r.report.holds);
}

TEST(BoundTable, PaperRows) {
    auto rows = bound_table(40);
    EXPECT_EQ(rows[0].n, 2);
    EXPECT_EQ(rows[0].den_new, 8);
    EXPECT_NEAR(rows[0].bound_rs, 0.5, 1e-12);        // (2n)^n/4 = 4
    EXPECT_NEAR(rows[0].bound_conj, 0.5, 1e-12);      // n^n = 4
    EXPECT_EQ(rows[1].n, 3);
    EXPECT_EQ(rows[1].den_new, 105);                  // 3*5*7

    const double ratio = 3.0 * std::sqrt(3.0) / std::exp(1.0);
    EXPECT_LT(ratio, 2.0);
    for (const auto& row : rows) {
        EXPECT_TRUE(row.den_below_estimate) << row.n;
        // conjectured bound dominates the new bound everywhere
        EXPECT_GE(row.bound_conj, row.bound_new);
    }
    // the improvement is asymptotic: rs wins at n = 2, new wins by n = 40
    EXPECT_LT(rows[0].ratio_new_rs, 1.0);
    EXPECT_GT(rows.back().ratio_new_rs, 1.0);
}

TEST(PolarizationSearch, SmallCasesStayAboveConjecturedValue) {
    for (int n = 1; n <= 3; ++n) {
        SearchResult r = polarization_search(n, 4, 0x777 + n, 8, 40);
        const double conj = std::pow(static_cast<double>(n), -0.5 * n);
        EXPECT_GE(r.value, conj - 1e-6) << "n=" << n;
        EXPECT_EQ(r.config.vectors.size(), static_cast<std::size_t>(n));
    }
}

}  // namespace
}  // namespace hafnia
