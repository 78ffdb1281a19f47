#include <gtest/gtest.h>

#include "congruence_lab/averaged.hpp"

using namespace congruence_lab;

namespace {

AveragedFamily constant_family(int l, int m, i64 r, i64 s, u64 t, double U, double V, double W, i64 X, i64 Y) {
    AveragedFamily f;
    f.l = l;
    f.m = m;
    f.r = r;
    f.s = s;
    f.t = t;
    f.U = U;
    f.V = V;
    f.W = W;
    f.J = Interval{0, Y};
    f.lower = AffineFamilyBoundary::constant(0);
    f.upper = AffineFamilyBoundary::constant(X);
    return f;
}

i64 ipow(i64 b, int e) {
    i64 v = 1;
    while (e-- > 0) v *= b;
    return v;
}

/// Sum of count_exact over the admissible cells, computed cell by cell.
u64 summed_cell_counts(const AveragedFamily& f, i64 X, i64 Y) {
    u64 total = 0;
    for (i64 u = static_cast<i64>(std::floor(f.U)) + 1; u <= static_cast<i64>(std::floor(2 * f.U)); ++u)
        for (i64 v = static_cast<i64>(std::floor(f.V)) + 1; v <= static_cast<i64>(std::floor(2 * f.V)); ++v)
            for (i64 w = static_cast<i64>(std::floor(f.W)) + 1; w <= static_cast<i64>(std::floor(2 * f.W)); ++w) {
                u64 q = f.t * static_cast<u64>(w);
                if (std::gcd(abs_u(f.r * f.s * u * v), q) != 1) continue;
                total += count_exact(CongruenceInstance{f.r * ipow(u, f.l), f.s * ipow(v, f.m), q, 1, 2,
                                                        static_cast<double>(X), static_cast<double>(Y)});
            }
    return total;
}

}  // namespace

TEST(SExact, SingleCellExample) {
    // u = v = w = 2 with t = 1: gcd(uv, w) = 2 removes the only cell
    auto empty = constant_family(2, 1, 1, 1, 1, 1, 1, 1, 10, 10);
    EXPECT_EQ(s_exact(empty), std::complex<double>(0, 0));
    // u = v = 2, w = 1, t = 3: the single cell (a, b, q) = (4, 2, 3)
    auto f = constant_family(2, 1, 1, 1, 3, 1, 1, 0.5, 10, 10);
    auto S = s_exact(f);
    EXPECT_EQ(S.imag(), 0.0);
    EXPECT_EQ(S.real(), static_cast<double>(count_exact(CongruenceInstance{4, 2, 3, 1, 2, 10, 10})));
}

TEST(SExact, MatchesSummedCellCounts) {
    const double starts[] = {0.5, 1, 2, 3, 4};
    const std::pair<int, int> exps[] = {{1, 1}, {2, 1}, {1, 2}};
    int checked = 0;
    for (auto [l, m] : exps)
        for (double U : starts)
            for (double W : starts)
                for (i64 Y : {1, 17, 50}) {
                    auto f = constant_family(l, m, 1, -1, 1, U, 3, W, 9, Y);
                    ASSERT_EQ(s_exact(f).real(), static_cast<double>(summed_cell_counts(f, 9, Y)))
                        << l << m << " U=" << U << " W=" << W << " Y=" << Y;
                    ++checked;
                }
    EXPECT_EQ(checked, 225);
    auto g = constant_family(1, 2, 3, 5, 2, 2, 1, 4, 30, 44);
    EXPECT_EQ(s_exact(g).real(), static_cast<double>(summed_cell_counts(g, 30, 44)));
}

TEST(SExact, TrivialCases) {
    auto f = constant_family(1, 1, 1, 1, 3, 2, 2, 2, 5, 20);
    f.upper = f.lower;
    EXPECT_EQ(s_exact(f), std::complex<double>(0, 0));

    auto g = constant_family(1, 1, 1, 1, 3, 2, 2, 2, 5, 20);
    auto zeros = make_coefficients(g);
    for (auto& z : zeros.d) z = 0;
    EXPECT_EQ(s_exact(g, zeros), std::complex<double>(0, 0));
}

TEST(SExact, LinearInCoefficients) {
    auto f = constant_family(1, 2, 1, 2, 3, 2, 2, 2, 7, 30);
    f.scheme = CoefficientScheme::joint;
    f.seed = 11;
    auto t1 = make_coefficients(f);
    f.seed = 12;
    auto t2 = make_coefficients(f);
    t2.e = t1.e;
    auto sum = t1;
    for (std::size_t i = 0; i < sum.d.size(); ++i) sum.d[i] += t2.d[i];
    auto lhs = s_exact(f, sum);
    auto rhs = s_exact(f, t1) + s_exact(f, t2);
    EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-9);
}

TEST(SExact, ThreadCountDoesNotChangeBits) {
    auto f = seeded_family(5);
    auto one = s_exact(f, 1), many = s_exact(f, 4);
    EXPECT_EQ(one, many);
}

TEST(SExact, Rejections) {
    auto f = constant_family(1, 1, 2, 1, 4, 1, 1, 1, 3, 3);
    EXPECT_THROW(s_exact(f), precondition_error);
    auto g = constant_family(1, 1, 1, 1, 1, 0.25, 1, 1, 3, 3);
    EXPECT_THROW(s_exact(g), precondition_error);
    auto h = constant_family(1, 1, 1, 1, 1, 1, 1, 1, 3, 3);
    h.upper = AffineFamilyBoundary::constant(-1);
    EXPECT_THROW(s_exact(h), precondition_error);
}

TEST(Coefficients, StayOnUnitDisc) {
    for (auto scheme : {CoefficientScheme::factorized, CoefficientScheme::joint}) {
        auto f = constant_family(1, 1, 1, 1, 1, 4, 4, 4, 1, 1);
        f.scheme = scheme;
        f.seed = 77;
        auto table = make_coefficients(f);
        for (auto z : table.d) EXPECT_LE(std::abs(z), 1.0);
        for (auto z : table.e) EXPECT_LE(std::abs(z), 1.0);
        auto again = make_coefficients(f);
        EXPECT_EQ(table.d, again.d);
    }
}

TEST(MainTerm3, ConstantBoundsSpecialization) {
    auto f = constant_family(1, 1, 1, 1, 3, 1, 2, 2, 5, 20);
    double expect = 0;
    for (i64 u = 2; u <= 2; ++u)
        for (i64 v = 3; v <= 4; ++v)
            for (i64 w = 3; w <= 4; ++w) {
                u64 q = 3 * static_cast<u64>(w);
                if (std::gcd(static_cast<u64>(u * v), q) != 1) continue;
                int coprime_y = 0;
                for (u64 y = 1; y <= 20; ++y) coprime_y += std::gcd(y, q) == 1;
                expect += 5.0 / static_cast<double>(q) * coprime_y;
            }
    EXPECT_NEAR(main_term_thm3(f).real(), expect, 1e-12);
}

TEST(MainTerm3, EmptyIntervalAndCrossModule) {
    auto f = constant_family(1, 1, 1, 1, 3, 1, 2, 2, 5, 20);
    f.J = Interval{Rational(1, 3), Rational(1, 2)};
    EXPECT_EQ(main_term_thm3(f), std::complex<double>(0, 0));

    // single cell (a, b, q) = (4, 2, 3) with 3 | Y: matches phi(q) X Y / q^2
    auto g = constant_family(2, 1, 1, 1, 3, 1, 1, 0.5, 10, 9);
    EXPECT_NEAR(main_term_thm3(g).real(), main_term_thm1(CongruenceInstance{4, 2, 3, 1, 2, 10, 9}), 1e-12);
    EXPECT_EQ(main_term_thm3(constant_family(2, 1, 1, 1, 1, 1, 1, 1, 10, 10)), std::complex<double>(0, 0));
}

TEST(DeltaH, Examples) {
    auto flat = constant_family(1, 1, 1, 1, 1, 2, 2, 2, 2, 4);
    EXPECT_DOUBLE_EQ(delta_H(flat, 100.0), 1.0);

    // width 2, slopes chosen so rho U = sigma V = tau Y = 1
    AveragedFamily f = flat;
    f.lower = {0, 1, 1, 0, Rational(1, 2)};
    f.upper = f.lower;
    f.upper.c0 = 2;
    auto d = derivative_bounds(f);
    EXPECT_DOUBLE_EQ(d.F, 2.0);
    double H = 1.0 * 2.0 / d.F;
    EXPECT_DOUBLE_EQ(delta_H(f, H), 8.0);
    for (double h : {0.1, 1.0, 3.0, 17.0}) {
        EXPECT_LE(delta_H(f, h), delta_H(f, 2 * h));
        EXPECT_LE(delta_H(f, 2 * h), 8 * delta_H(f, h) + 1e-12);
    }
    EXPECT_THROW(delta_H(f, 0.0), precondition_error);
}

TEST(ErrorBudget, ZCases) {
    auto f = constant_family(1, 1, 1, 1, 1, 2, 2, 2, 2, 4);
    f.scheme = CoefficientScheme::joint;
    auto b = error_budget(f, 5.0, 0.1);
    EXPECT_DOUBLE_EQ(b.Z, std::sqrt(2.0) * 2 * 2 * 2);

    // factorized with U = V = tW: (2tW)^{1/2} (2tW)^{1/2} (tW tW)^{1/2} W
    auto g = constant_family(1, 1, 1, 1, 3, 6, 6, 2, 2, 4);
    g.scheme = CoefficientScheme::factorized;
    double q0 = 6;
    EXPECT_NEAR(error_budget(g, 5.0, 0.1).Z, (2 * q0) * q0 * 2, 1e-9);
    g.U = 2;  // UV = 12 >= 6 still
    EXPECT_NEAR(big_Z(g), std::sqrt(8.0) * std::sqrt(12.0) * std::sqrt(12.0) * 2, 1e-9);
    g.V = 2;  // UV = 4 < 6: general case
    EXPECT_NEAR(big_Z(g), std::sqrt(6.0) * 2 * 2 * 2, 1e-12);
}

TEST(ErrorBudget, TShapeAtZeroEpsilon) {
    auto f = constant_family(1, 1, 1, 1, 2, 3, 2, 4, 8, 30);
    auto b = error_budget(f, 1.0, 0.0);
    EXPECT_DOUBLE_EQ(b.delta_H, 1.0);
    double q0 = 8, U = 3, V = 2, W = 4, Y = 30;
    double expect = Y / std::sqrt(q0) * (std::sqrt(U) * std::sqrt(V) * W + U * V * std::sqrt(W)) + b.Z;
    EXPECT_NEAR(b.T, expect, 1e-9);
    EXPECT_DOUBLE_EQ(b.first_O, U * V * W * Y / 1.0);
    EXPECT_TRUE(b.valid);  // H = 1 = tW / F

    auto even = f;
    even.l = even.m = 2;
    double expect_even = Y / std::sqrt(q0) * (U * V * W + U * V * std::sqrt(W)) + b.Z;
    EXPECT_NEAR(error_budget(even, 1.0, 0.0).T, expect_even, 1e-9);

    EXPECT_FALSE(error_budget(f, 0.5, 0.0).valid);
    EXPECT_THROW(error_budget(f, 1.0, 0.5), precondition_error);
}

TEST(SuggestH, Examples) {
    auto f = constant_family(1, 1, 1, 1, 25, 1, 1, 4, 10, 10);
    EXPECT_NEAR(suggest_H(f, 0.1), 15.848931924611142, 1e-9);
    auto g = constant_family(1, 1, 1, 1, 25, 1, 1, 4, 100, 10);
    EXPECT_DOUBLE_EQ(suggest_H(g, 0.0), 1.0);
    auto h = constant_family(1, 1, 1, 1, 25, 1, 1, 4, 1, 10);
    EXPECT_DOUBLE_EQ(suggest_H(h, 0.0), 100.0);
    auto too_long = constant_family(1, 1, 1, 1, 25, 1, 1, 4, 101, 10);
    EXPECT_THROW(suggest_H(too_long, 0.1), precondition_error);
}

TEST(Dominance, Verdicts) {
    auto wide = constant_family(1, 1, 1, 1, 1, 4, 4, 16, 16, 1'000'000);
    auto r = dominance_report(wide, 0.1);
    EXPECT_TRUE(r.all());
    EXPECT_EQ(r.Z_case, "(XY)^{2/3}");
    EXPECT_TRUE(r.warnings.empty());

    auto narrow = constant_family(1, 1, 1, 1, 7, 1, 1, 100, 1, 50);
    EXPECT_FALSE(dominance_report(narrow, 0.1).main_term_bound);

    auto even = constant_family(2, 2, 1, 1, 1, 3, 3, 8, 5, 50);
    EXPECT_DOUBLE_EQ(dominance_report(even, 0.1).first_min_argument, 25.0);

    auto fact = constant_family(1, 1, 1, 1, 1, 4, 4, 2, 2, 50);
    fact.scheme = CoefficientScheme::factorized;
    auto fr = dominance_report(fact, 0.1);
    EXPECT_EQ(fr.Z_case, "(UV)^{1/4}(XY)^{1/2}");
    EXPECT_EQ(fr.warnings.size(), 2u);  // U, V > tW
}

TEST(SeededFamilies, RatioStaysBounded) {
    double worst = 0;
    for (u64 seed = 1; seed <= 20; ++seed) {
        auto f = seeded_family(seed);
        double eps = 0.1;
        auto r = averaged_report(f, suggest_H(f, eps), eps);
        ASSERT_TRUE(r.budget.valid) << seed;
        worst = std::max(worst, r.ratio);
    }
    EXPECT_LE(worst, 100.0);
}
