#include <gtest/gtest.h>

#include <random>

#include "congruence_lab/congruence.hpp"

using namespace congruence_lab;

namespace {

CongruenceInstance box(i64 a, i64 b, u64 q, double X, double Y, int e = 1, int f = 2) {
    return CongruenceInstance{a, b, q, e, f, X, Y};
}

}  // namespace

TEST(CountExact, Fixtures) {
    EXPECT_EQ(count_exact(box(1, 1, 5, 10, 10)), 16u);
    EXPECT_EQ(count_exact(box(1, -1, 7, 7, 7)), 6u);
    for (u64 N : {1u, 7u, 31u}) EXPECT_EQ(count_exact(box(5, -3, 1, N, N)), N * N);
    EXPECT_EQ(count_exact(box(1, 1, 5, 10.9, 10.2)), 16u);
}

TEST(CountExact, RejectsSharedFactor) {
    EXPECT_THROW(count_exact(box(2, 1, 4, 10, 10)), precondition_error);
    EXPECT_THROW(count_exact(box(1, 3, 9, 10, 10)), precondition_error);
    EXPECT_THROW(count_exact(box(1, 1, 5, 0.5, 10)), precondition_error);
}

TEST(CountExact, MatchesDoubleLoopOnSeededInstances) {
    std::mt19937_64 rng(1234567);
    int checked = 0;
    while (checked < 100) {
        u64 q = 1 + rng() % 50;
        i64 a = static_cast<i64>(rng() % 201) - 100, b = static_cast<i64>(rng() % 201) - 100;
        if (a == 0 || b == 0) continue;
        if (q > 1 && std::gcd(residue(a, q) * residue(b, q) % q, q) != 1) continue;
        auto inst = box(a, b, q, 1 + static_cast<double>(rng() % 200), 1 + static_cast<double>(rng() % 200));
        ASSERT_EQ(count_exact(inst), count_naive(inst)) << a << " " << b << " " << q;
        ++checked;
    }
}

TEST(CountExact, GeneralExponentsMatchDoubleLoop) {
    std::mt19937_64 rng(99);
    for (int k = 0; k < 60; ++k) {
        u64 q = 2 + rng() % 60;
        int e = 1 + static_cast<int>(rng() % 4), f = 1 + static_cast<int>(rng() % 4);
        i64 a = 1 + static_cast<i64>(rng() % 50), b = -1 - static_cast<i64>(rng() % 50);
        if (std::gcd(residue(a, q) * residue(b, q) % q, q) != 1) continue;
        auto inst = box(a, b, q, 1 + static_cast<double>(rng() % 150), 1 + static_cast<double>(rng() % 150), e, f);
        ASSERT_EQ(count_exact(inst), count_naive(inst)) << q << " e=" << e << " f=" << f;
    }
}

TEST(CountExact, XCoprimalityIsAutomaticForLinearX) {
    // without the x filter every solution still has gcd(x, q) = 1
    for (u64 q : {9u, 12u, 25u, 30u}) {
        for (u64 y = 1; y <= 60; ++y) {
            if (std::gcd(y, q) != 1) continue;
            for (u64 x = 1; x <= 60; ++x)
                if ((x + 7 * y * y) % q == 0) ASSERT_EQ(std::gcd(x, q), 1u);
        }
    }
}

TEST(CountExact, ScaleInvariance) {
    for (u64 q : {7u, 12u, 35u}) {
        for (i64 k : {2, 3, -1, 11}) {
            if (std::gcd(abs_u(k), q) != 1) continue;
            auto base = box(3, 4, q, 77, 53);
            if (std::gcd(12u, q) != 1) base = box(1, 1, q, 77, 53);
            auto scaled = base;
            scaled.a *= k;
            scaled.b *= k;
            EXPECT_EQ(count_exact(base), count_exact(scaled));
        }
    }
}

TEST(MainTerm, Values) {
    EXPECT_DOUBLE_EQ(main_term_thm1(box(1, 1, 5, 10, 10)), 16.0);
    EXPECT_DOUBLE_EQ(main_term_thm1(box(1, 1, 1, 9, 9)), 81.0);
    EXPECT_DOUBLE_EQ(main_term_thm1(box(1, 1, 7, 7, 7)), 6.0);
    for (u64 N = 1; N <= 20; ++N)
        EXPECT_DOUBLE_EQ(main_term_thm1(box(1, 1, 1, N, N)), static_cast<double>(count_exact(box(1, 1, 1, N, N))));
}

TEST(Envelope, Values) {
    // frozen from direct evaluation of the printed expression
    EXPECT_NEAR(envelope_thm1(box(1, 1, 5, 10, 10)), 37.58210085976404, 1e-9);
    EXPECT_NEAR(envelope_thm1(box(1, 1, 4, 4, 4)), 35.74730297018444, 1e-9);
    double l2 = std::log(2.0);
    EXPECT_NEAR(envelope_thm1(box(1, 1, 1, 3, 7)), 3 + l2 * (7 + l2), 1e-12);
    EXPECT_THROW(envelope_thm1(box(1, 1, 5, 10, 10, 2, 3)), precondition_error);
}

TEST(Thm1Report, Fields) {
    auto r = thm1_report(box(1, 1, 5, 10, 10));
    EXPECT_EQ(r.exact, 16u);
    EXPECT_DOUBLE_EQ(r.main_term, 16.0);
    EXPECT_DOUBLE_EQ(r.ratio, 0.0);
    EXPECT_EQ(r.seconds, 0.0);
}

TEST(CountBoundaries, ReducesToBoxCount) {
    for (u64 q = 1; q <= 30; ++q) {
        for (i64 a : {1, 5, -7}) {
            for (i64 b : {1, -2, 9}) {
                if (q > 1 && std::gcd(residue(a, q) * residue(b, q) % q, q) != 1) continue;
                for (int X : {1, 17, 40}) {
                    for (int Y : {1, 23}) {
                        auto bounds = BoundarySpec::constant(0, X);
                        u64 got = count_boundaries(a, b, q, bounds, Interval{0, Y});
                        ASSERT_EQ(got, count_exact(box(a, b, q, X, Y))) << q << " " << a << " " << b;
                    }
                }
            }
        }
    }
}

TEST(CountBoundaries, Examples) {
    EXPECT_EQ(count_boundaries(1, 1, 3, BoundarySpec::constant(5, 5), Interval{0, 40}), 0u);
    BoundarySpec diag{AffineBoundary::constant(0), AffineBoundary{0, 1}};
    EXPECT_EQ(count_boundaries(1, 1, 3, diag, Interval{0, 6}), 4u);
    // frozen by brute-force enumeration over x
    BoundarySpec affine{AffineBoundary{-1, Rational(1, 2)}, AffineBoundary{Rational(5, 3), Rational(3, 2)}};
    EXPECT_EQ(count_boundaries(2, 3, 7, affine, Interval{2, 17}), 29u);
    BoundarySpec crossing{AffineBoundary{0, Rational(-7, 3)}, AffineBoundary{10, Rational(1, 4)}};
    EXPECT_EQ(count_boundaries(-5, 7, 12, crossing, Interval{Rational(-3, 2), Rational(41, 2)}), 24u);
}

TEST(CountBoundaries, RejectsInvertedBounds) {
    BoundarySpec inverted{AffineBoundary::constant(3), AffineBoundary{0, 1}};
    EXPECT_THROW(count_boundaries(1, 1, 5, inverted, Interval{0, 10}), precondition_error);
    EXPECT_THROW(count_boundaries(2, 1, 4, BoundarySpec::constant(0, 4), Interval{0, 10}), precondition_error);
}

TEST(CountBoundaries, FunctionBoundaryAgreesOnRationalInputs) {
    BoundarySpec affine{AffineBoundary{-1, Rational(1, 2)}, AffineBoundary{Rational(5, 3), Rational(3, 2)}};
    FunctionBoundary fn{[](double y) { return y / 2 - 1; }, [](double y) { return 1.5 * y + 5.0 / 3.0; }, 1.5};
    EXPECT_EQ(count_boundaries(2, 3, 7, fn, Interval{2, 17}), count_boundaries(2, 3, 7, affine, Interval{2, 17}));
}

TEST(Corollary, Examples) {
    BoundarySpec diag{AffineBoundary::constant(0), AffineBoundary{0, 1}};
    auto r = corollary_report(1, 1, 3, diag, Interval{0, 6}, 3);
    EXPECT_EQ(r.exact, 4u);
    EXPECT_DOUBLE_EQ(r.main_term, 4.0);
    EXPECT_DOUBLE_EQ(r.ratio, 0.0);
    EXPECT_DOUBLE_EQ(corollary_delta_H(3, diag.derivative_bound(), 6, 3), 1.0 + 3.0 * 6.0 / 3.0);

    // constant bounds with H = q: main term is (X/q) #{y in J coprime to q}
    auto c = corollary_report(2, 5, 9, BoundarySpec::constant(0, 20), Interval{0, 30}, 9);
    EXPECT_NEAR(c.main_term, 20.0 / 9.0 * 20.0, 1e-12);
    EXPECT_DOUBLE_EQ(corollary_delta_H(9, 0, 30, 9), 1.0);
    EXPECT_EQ(c.exact, count_exact(box(2, 5, 9, 20, 30)));
}

TEST(Bilinear, Examples) {
    std::vector<std::complex<double>> ones3(3, 1.0);
    auto r = bilinear_jacobi(ones3, ones3, 0.05);
    EXPECT_NEAR(r.sum.real(), 3.0, 1e-12);
    EXPECT_NEAR(r.sum.imag(), 0.0, 1e-12);
    EXPECT_NEAR(r.bound, std::pow(9.0, 0.05) * (3 * std::sqrt(3.0) + std::sqrt(3.0) * 3), 1e-12);

    std::vector<std::complex<double>> b{{1, 2}, {-3, 0}, {0.5, -1}};
    std::vector<std::complex<double>> one(1, 1.0);
    auto t = bilinear_jacobi(one, b, 0.0);
    EXPECT_NEAR(std::abs(t.sum - (b[0] + b[1] + b[2])), 0.0, 1e-12);
}

TEST(Bilinear, SeededSignsStayUnderBound) {
    std::mt19937_64 rng(256);
    std::vector<std::complex<double>> a(256), b(256);
    for (auto& x : a) x = (rng() & 1) ? 1.0 : -1.0;
    for (auto& x : b) x = (rng() & 1) ? 1.0 : -1.0;
    auto r = bilinear_jacobi(a, b, 0.05);
    EXPECT_LE(std::abs(r.sum), 8 * r.bound);
}

TEST(Scan, PrimesUpTo100) {
    auto qs = primes_in(2, 100);
    auto reports = scan_thm1(
        qs, [](u64 q) { return double(q); }, [](u64 q) { return double(q); }, [](u64) { return i64{1}; },
        [](u64) { return i64{1}; });
    ASSERT_EQ(reports.size(), 25u);
    for (std::size_t i = 0; i < reports.size(); ++i) EXPECT_EQ(reports[i].instance.q, qs[i]);
}

TEST(Scan, SingleAndEmpty) {
    std::vector<u64> five{5};
    auto one = scan_thm1(
        five, [](u64) { return 10.0; }, [](u64) { return 10.0; }, [](u64) { return i64{1}; },
        [](u64) { return i64{1}; });
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].exact, 16u);
    EXPECT_NEAR(one[0].envelope, 37.58210085976404, 1e-9);

    std::vector<u64> none;
    EXPECT_TRUE(scan_thm1(
                    none, [](u64) { return 1.0; }, [](u64) { return 1.0; }, [](u64) { return i64{1}; },
                    [](u64) { return i64{1}; })
                    .empty());
}

TEST(Scan, SkipsNonCoprimeAndIsThreadInvariant) {
    std::vector<u64> qs;
    for (u64 q = 1; q <= 120; ++q) qs.push_back(q);
    std::vector<std::string> skipped;
    ScanOptions serial{1, false, &skipped};
    auto a_rule = [](u64) { return i64{6}; };
    auto b_rule = [](u64) { return i64{1}; };
    auto X = [](u64 q) { return 1.0 + q / 2.0; };
    auto Y = [](u64 q) { return 3.0 * q; };
    auto one = scan_thm1(qs, X, Y, a_rule, b_rule, serial);
    auto many = scan_thm1(qs, X, Y, a_rule, b_rule, ScanOptions{8, false, nullptr});
    EXPECT_EQ(one.size() + skipped.size(), qs.size());
    EXPECT_FALSE(skipped.empty());
    ASSERT_EQ(one.size(), many.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        EXPECT_EQ(one[i].exact, many[i].exact);
        EXPECT_EQ(one[i].ratio, many[i].ratio);
        EXPECT_EQ(std::gcd(u64{6}, one[i].instance.q), 1u);
    }
}

TEST(Scan, ShortRangeRatiosStayModest) {
    // X = Y ~ sqrt(q): a regime where main term and error are comparable
    auto qs = primes_in(3, 2000);
    auto reports = scan_thm1(
        qs, [](u64 q) { return std::floor(std::sqrt(double(q))) + 1; },
        [](u64 q) { return std::floor(2 * std::sqrt(double(q))) + 1; }, [](u64) { return i64{1}; },
        [](u64) { return i64{-1}; });
    double worst = 0;
    for (const auto& r : reports) worst = std::max(worst, r.ratio);
    EXPECT_LE(worst, 1.0);
}
