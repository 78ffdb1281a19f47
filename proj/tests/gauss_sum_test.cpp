#include <gtest/gtest.h>

#include "congruence_lab/gauss_sum.hpp"

using namespace congruence_lab;

namespace {

void expect_close(std::complex<double> a, std::complex<double> b, double tol) {
    EXPECT_LE(std::abs(a - b), tol) << a << " vs " << b;
}

}  // namespace

TEST(GaussBrute, ClassicalValues) {
    expect_close(gauss_brute(1, 0, 5), {std::sqrt(5.0), 0}, 1e-12);
    expect_close(gauss_brute(1, 0, 6), {0, 0}, 1e-12);
    expect_close(gauss_brute(1, 0, 3), {0, std::sqrt(3.0)}, 1e-12);
    expect_close(gauss_brute(1, 0, 8), {std::sqrt(8.0), std::sqrt(8.0)}, 1e-12);
    // direct summation over n = 1..5, frozen
    expect_close(gauss_brute(1, 2, 5), {0.6909830056250525, -2.1266270208801}, 1e-9);
    expect_close(gauss_brute(1, 2, 5), std::sqrt(5.0) * unit_exp(0.8), 1e-12);
}

TEST(GaussBrute, AllowsNonCoprimeArguments) {
    // G(2, 0; 4) = 1 + (-1)... sum of e(2n^2/4) = e(1/2)+e(2)+e(9/2)+e(8) = -1 + 1 - 1 + 1
    expect_close(gauss_brute(2, 0, 4), {0, 0}, 1e-12);
    // G(3, 0; 9) = sum_{n} e(n^2/3) = 3 * G(1,0;3) = 3 i sqrt(3)
    expect_close(gauss_brute(3, 0, 9), {0, 3 * std::sqrt(3.0)}, 1e-9);
}

TEST(GaussClosed, SpecExamples) {
    auto g = gauss_closed(1, 0, 3);
    expect_close(g.numeric, {0, std::sqrt(3.0)}, 1e-12);
    ASSERT_TRUE(g.structure);
    EXPECT_EQ(g.structure->kind, GaussCase::odd);
    EXPECT_EQ(g.structure->unit_power, 1);

    auto z = gauss_closed(1, 1, 4);
    expect_close(z.numeric, {0, 0}, 1e-12);
    EXPECT_EQ(z.structure->coefficient, (GaussianInt{0, 0}));

    auto h = gauss_closed(1, 2, 5);
    EXPECT_EQ(h.structure->phase, Rational(4, 5));
    EXPECT_EQ(h.structure->jacobi_sign, 1);
    EXPECT_EQ(h.structure->radicand, 5u);
    expect_close(h.numeric, gauss_brute(1, 2, 5), 1e-9);
}

TEST(GaussClosed, RejectsSharedFactor) {
    EXPECT_THROW(gauss_closed(2, 1, 4), precondition_error);
    EXPECT_THROW(gauss_closed(3, 0, 9), precondition_error);
}

TEST(GaussClosed, NegativeAndLargeS) {
    for (u64 u : {7u, 10u, 12u, 16u, 30u, 45u}) {
        RootsOfUnity roots(u);
        for (i64 s : {-1, -7, -11, 1001, 12347}) {
            if (std::gcd(abs_u(s), u) != 1) continue;
            for (i64 t : {-3, 0, 5, 8}) {
                auto closed = gauss_closed(s, t, u);
                expect_close(closed.numeric, gauss_brute(s, t, roots), 1e-9 * std::sqrt(double(u)));
            }
        }
    }
}

TEST(GaussClosed, PhaseIsReducedIntoUnitInterval) {
    for (u64 u = 1; u <= 60; ++u)
        for (i64 s = 1; s < static_cast<i64>(std::max<u64>(u, 2)); ++s) {
            if (std::gcd(static_cast<u64>(s), u) != 1) continue;
            for (i64 t = 0; t < static_cast<i64>(u); ++t) {
                auto form = *gauss_closed(s, t, u).structure;
                ASSERT_GE(form.phase, Rational(0));
                ASSERT_LT(form.phase, Rational(1));
            }
        }
}

TEST(GaussClosed, MagnitudeLawForOddModulus) {
    for (u64 u = 1; u <= 99; u += 2) {
        RootsOfUnity roots(u);
        for (i64 s = 1; s <= static_cast<i64>(u); ++s) {
            if (std::gcd(static_cast<u64>(s), u) != 1) continue;
            for (i64 t = 0; t < static_cast<i64>(u); ++t)
                ASSERT_NEAR(std::abs(gauss_brute(s, t, roots)), std::sqrt(double(u)), 1e-9);
        }
    }
}

TEST(GaussClosed, VanishesForOddTWhenFourDividesU) {
    for (u64 u = 4; u <= 200; u += 4) {
        RootsOfUnity roots(u);
        for (i64 s = 1; s < static_cast<i64>(u); s += 2) {
            if (std::gcd(static_cast<u64>(s), u) != 1) continue;
            for (i64 t = 1; t < static_cast<i64>(u); t += 2) {
                ASSERT_LE(std::abs(gauss_brute(s, t, roots)), 1e-9);
                ASSERT_EQ(gauss_closed(s, t, u).numeric, std::complex<double>(0, 0));
            }
        }
    }
}

TEST(Reciprocity, Examples) {
    EXPECT_TRUE(reciprocity_check(3, 5));
    EXPECT_TRUE(reciprocity_check(1, 1));
    EXPECT_TRUE(reciprocity_check(5, 8));
    EXPECT_THROW(reciprocity_check(3, 6), precondition_error);
    // (-sqrt5)(-i sqrt3) = i sqrt15
    expect_close(gauss_brute(3, 0, 5) * gauss_brute(5, 0, 3), {0, std::sqrt(15.0)}, 1e-9);
}

TEST(Reciprocity, CoprimeOddGrid) {
    for (i64 s = 1; s <= 50; s += 2)
        for (u64 u = 1; u <= 50; u += 2) {
            if (std::gcd(static_cast<u64>(s), u) != 1) continue;
            ASSERT_TRUE(reciprocity_check(s, u)) << s << "," << u;
        }
}
