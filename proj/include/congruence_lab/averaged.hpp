#pragma once

/// Averaged sums of the congruence count over the family
///   S = {(r u^l, s v^m, t w) : U < u <= 2U, V < v <= 2V, W < w <= 2W, gcd(rsuv, tw) = 1}
/// with weights d_{u,v} e_w, the matching main term, and the error budget
/// (Delta_H, Z, T) used to judge it.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "congruence_lab/arith.hpp"
#include "congruence_lab/congruence.hpp"
#include "congruence_lab/parallel.hpp"
#include "congruence_lab/rational.hpp"

namespace congruence_lab {

/// Upper limit on (cells) x (integer y) inner steps for s_exact.
inline constexpr double kMaxAveragedSteps = 1e9;

enum class CoefficientScheme { all_ones, factorized, joint };

inline std::string to_string(CoefficientScheme s) {
    switch (s) {
        case CoefficientScheme::all_ones: return "all-ones";
        case CoefficientScheme::factorized: return "factorized";
        case CoefficientScheme::joint: return "joint";
    }
    return "?";
}

inline CoefficientScheme parse_scheme(const std::string& name) {
    if (name == "all-ones") return CoefficientScheme::all_ones;
    if (name == "factorized") return CoefficientScheme::factorized;
    if (name == "joint") return CoefficientScheme::joint;
    throw precondition_error("unknown coefficient scheme '" + name + "'");
}

/// (u, v, w, y) -> c0 + cu u + cv v + cw w + cy y.
struct AffineFamilyBoundary {
    Rational c0;
    Rational cu;
    Rational cv;
    Rational cw;
    Rational cy;

    Rational at(i64 u, i64 v, i64 w, const Rational& y) const {
        return c0 + cu * Rational(u) + cv * Rational(v) + cw * Rational(w) + cy * y;
    }
    /// The boundary in y alone once (u, v, w) is fixed.
    AffineBoundary slice(i64 u, i64 v, i64 w) const { return {c0 + cu * Rational(u) + cv * Rational(v) + cw * Rational(w), cy}; }
    static AffineFamilyBoundary constant(Rational c) { return {c, 0, 0, 0, 0}; }
};

/// Integer points of (start, 2 start].
struct DyadicRange {
    i64 first = 1;
    i64 last = 0;

    std::size_t size() const { return last >= first ? static_cast<std::size_t>(last - first + 1) : 0; }
    Rational mean() const { return Rational(first + last, 2); }
    static DyadicRange of(double start) {
        return {static_cast<i64>(std::floor(start)) + 1, static_cast<i64>(std::floor(2 * start))};
    }
};

struct AveragedFamily {
    int l = 1;
    int m = 1;
    i64 r = 1;
    i64 s = 1;
    u64 t = 1;
    double U = 1;
    double V = 1;
    double W = 1;
    Interval J{0, 1};
    CoefficientScheme scheme = CoefficientScheme::all_ones;
    u64 seed = 0;
    AffineFamilyBoundary lower = AffineFamilyBoundary::constant(0);
    AffineFamilyBoundary upper = AffineFamilyBoundary::constant(1);

    DyadicRange u_range() const { return DyadicRange::of(U); }
    DyadicRange v_range() const { return DyadicRange::of(V); }
    DyadicRange w_range() const { return DyadicRange::of(W); }
    double Y() const { return J.length.to_double(); }

    void validate() const {
        require(l >= 1 && m >= 1, "family: l and m must be positive");
        require(r != 0 && s != 0, "family: r and s must be non-zero");
        require(t >= 1, "family: t must be positive");
        require(t == 1 || gcd_u(mul_mod(residue(r, t), residue(s, t), t), t) == 1, "family: requires gcd(rs, t) = 1");
        require(U >= 0.5 && V >= 0.5 && W >= 0.5, "family: U, V, W must be at least 1/2");
        require(J.length >= Rational(0), "family: interval length must be non-negative");
        double cells = static_cast<double>(u_range().size() * v_range().size() * w_range().size());
        require(cells * std::max(1.0, Y()) <= kMaxAveragedSteps, "family: more than 1e9 inner steps");
        // affine boundaries: checking the corners of the lattice box covers every point
        auto ur = u_range(), vr = v_range(), wr = w_range();
        for (i64 u : {ur.first, ur.last})
            for (i64 v : {vr.first, vr.last})
                for (i64 w : {wr.first, wr.last})
                    for (const Rational& y : {J.start, J.end()})
                        require(upper.at(u, v, w, y) >= lower.at(u, v, w, y), "family: requires f+ >= f- on the domain");
    }
};

/// Seeded weights d_{u,v} and e_w, indexed from the first point of each dyadic range.
struct CoefficientTable {
    DyadicRange u, v, w;
    std::vector<std::complex<double>> d;  // row-major in u
    std::vector<std::complex<double>> e;

    std::complex<double> d_at(i64 uu, i64 vv) const {
        return d[static_cast<std::size_t>(uu - u.first) * v.size() + static_cast<std::size_t>(vv - v.first)];
    }
    std::complex<double> e_at(i64 ww) const { return e[static_cast<std::size_t>(ww - w.first)]; }
};

namespace detail {

inline double unit_double(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform point of the closed unit disc.
inline std::complex<double> unit_disc(std::mt19937_64& rng) {
    double radius = std::sqrt(unit_double(rng));
    double angle = 2 * std::numbers::pi * unit_double(rng);
    return std::polar(radius, angle);
}

inline i64 checked_power(i64 base, int exponent) {
    i128 v = 1;
    for (int i = 0; i < exponent; ++i) {
        v *= base;
        require(v <= INT64_MAX && v >= -static_cast<i128>(INT64_MAX), "family: coefficient r u^l overflows 64 bits");
    }
    return static_cast<i64>(v);
}

struct Cell {
    i64 u, v, w;
};

inline std::vector<Cell> admissible_cells(const AveragedFamily& f) {
    std::vector<Cell> cells;
    auto ur = f.u_range(), vr = f.v_range(), wr = f.w_range();
    for (i64 u = ur.first; u <= ur.last; ++u)
        for (i64 v = vr.first; v <= vr.last; ++v)
            for (i64 w = wr.first; w <= wr.last; ++w) {
                u64 q = f.t * static_cast<u64>(w);
                u64 rsuv = mul_mod(mul_mod(residue(f.r, q), residue(f.s, q), q), mul_mod(residue(u, q), residue(v, q), q), q);
                if (q == 1 || gcd_u(rsuv, q) == 1) cells.push_back({u, v, w});
            }
    return cells;
}

}  // namespace detail

/// Weights for the family's scheme; the generator is mt19937_64(seed) drawn
/// in the order d then e.
inline CoefficientTable make_coefficients(const AveragedFamily& f) {
    CoefficientTable table{f.u_range(), f.v_range(), f.w_range(), {}, {}};
    std::size_t nu = table.u.size(), nv = table.v.size(), nw = table.w.size();
    table.d.assign(nu * nv, 1.0);
    table.e.assign(nw, 1.0);
    if (f.scheme == CoefficientScheme::all_ones) return table;
    std::mt19937_64 rng(f.seed);
    if (f.scheme == CoefficientScheme::factorized) {
        std::vector<std::complex<double>> du(nu), dv(nv);
        for (auto& z : du) z = detail::unit_disc(rng);
        for (auto& z : dv) z = detail::unit_disc(rng);
        for (std::size_t i = 0; i < nu; ++i)
            for (std::size_t j = 0; j < nv; ++j) table.d[i * nv + j] = du[i] * dv[j];
    } else {
        for (auto& z : table.d) z = detail::unit_disc(rng);
    }
    for (auto& z : table.e) z = detail::unit_disc(rng);
    return table;
}

/// Sum over admissible cells of d_{u,v} e_w times the exact count of
/// (x, y), y in J, gcd(y, tw) = 1, x in (f-(u,v,w,y), f+(u,v,w,y)], with
/// r u^l x + s v^m y^2 = 0 (mod tw). Cells are reduced in lexicographic order.
inline std::complex<double> s_exact(const AveragedFamily& f, const CoefficientTable& table, unsigned threads = 1) {
    f.validate();
    auto cells = detail::admissible_cells(f);
    auto counts = ordered_map(cells.size(), threads, [&](std::size_t i) {
        const auto& c = cells[i];
        BoundarySpec bounds{f.lower.slice(c.u, c.v, c.w), f.upper.slice(c.u, c.v, c.w)};
        return count_boundaries(f.r * detail::checked_power(c.u, f.l), f.s * detail::checked_power(c.v, f.m),
                                f.t * static_cast<u64>(c.w), bounds, f.J);
    });
    std::complex<double> total{};
    for (std::size_t i = 0; i < cells.size(); ++i)
        total += table.d_at(cells[i].u, cells[i].v) * table.e_at(cells[i].w) * static_cast<double>(counts[i]);
    return total;
}

inline std::complex<double> s_exact(const AveragedFamily& f, unsigned threads = 1) {
    return s_exact(f, make_coefficients(f), threads);
}

/// sum over admissible cells of d_{u,v} e_w / (tw) sum_{y in J, (y, tw) = 1} (f+ - f-).
inline std::complex<double> main_term_thm3(const AveragedFamily& f, const CoefficientTable& table) {
    f.validate();
    std::complex<double> total{};
    for (const auto& c : detail::admissible_cells(f)) {
        BoundarySpec bounds{f.lower.slice(c.u, c.v, c.w), f.upper.slice(c.u, c.v, c.w)};
        Rational inner = boundary_main_term(f.t * static_cast<u64>(c.w), bounds, f.J);
        total += table.d_at(c.u, c.v) * table.e_at(c.w) * inner.to_double();
    }
    return total;
}

inline std::complex<double> main_term_thm3(const AveragedFamily& f) { return main_term_thm3(f, make_coefficients(f)); }

/// Bounds |d^{i+j+k} f / du^i dv^j dy^k| <= rho^i sigma^j tau^k F for the affine family.
struct DerivativeBounds {
    double F = 1;
    double rho = 0;
    double sigma = 0;
    double tau = 0;
};

/// Mean of f+ - f- over the lattice points of the domain; for an empty J the
/// midpoint of J stands in for the mean y.
inline double characteristic_length(const AveragedFamily& f) {
    auto ur = f.u_range(), vr = f.v_range(), wr = f.w_range();
    require(ur.size() > 0 && vr.size() > 0 && wr.size() > 0, "family: a dyadic range contains no integer");
    Rational y_mean =
        f.J.last() >= f.J.first() ? Rational(f.J.first() + f.J.last(), 2) : f.J.start + f.J.length / Rational(2);
    auto width = [&](const AffineFamilyBoundary& b) {
        return b.c0 + b.cu * ur.mean() + b.cv * vr.mean() + b.cw * wr.mean() + b.cy * y_mean;
    };
    return (width(f.upper) - width(f.lower)).to_double();
}

/// F is the characteristic length (1 when it vanishes); mixed derivatives of
/// an affine family are zero so only the first-order slopes matter.
inline DerivativeBounds derivative_bounds(const AveragedFamily& f) {
    DerivativeBounds d;
    double X = characteristic_length(f);
    d.F = X > 0 ? X : 1.0;
    auto slope = [](const Rational& a, const Rational& b) { return std::max(std::abs(a.to_double()), std::abs(b.to_double())); };
    d.rho = slope(f.lower.cu, f.upper.cu) / d.F;
    d.sigma = slope(f.lower.cv, f.upper.cv) / d.F;
    d.tau = slope(f.lower.cy, f.upper.cy) / d.F;
    return d;
}

/// (1 + H F rho U/(tW)) (1 + H F sigma V/(tW)) (1 + H F tau Y/(tW)).
inline double delta_H(const AveragedFamily& f, const DerivativeBounds& d, double H) {
    require(H > 0, "delta_H: H must be positive");
    double q0 = static_cast<double>(f.t) * f.W;
    return (1 + H * d.F * d.rho * f.U / q0) * (1 + H * d.F * d.sigma * f.V / q0) * (1 + H * d.F * d.tau * f.Y() / q0);
}

inline double delta_H(const AveragedFamily& f, double H) { return delta_H(f, derivative_bounds(f), H); }

struct ErrorBudget {
    double H = 0;
    double delta_H = 1;
    double Z = 0;
    double T = 0;
    double first_O = 0;  // UVWY/H
    double epsilon = 0;
    bool valid = false;  // H >= tW/F
};

/// Z: (tW+U)^{1/2}(tW+V)^{1/2}(UV)^{1/2}W for factorized weights with UV >= tW,
/// otherwise (tW)^{1/2} UVW.
inline double big_Z(const AveragedFamily& f) {
    double q0 = static_cast<double>(f.t) * f.W;
    if (f.scheme == CoefficientScheme::factorized && f.U * f.V >= q0)
        return std::sqrt(q0 + f.U) * std::sqrt(q0 + f.V) * std::sqrt(f.U * f.V) * f.W;
    return std::sqrt(q0) * f.U * f.V * f.W;
}

/// T = Delta_H (Y/(tW)^{1/2} (U^{1-{l/2}} V^{1-{m/2}} W + UVW^{1/2}) + Z) (HtUVW)^eps.
inline ErrorBudget error_budget(const AveragedFamily& f, double H, double epsilon) {
    require(H > 0, "error_budget: H must be positive");
    require(epsilon >= 0 && epsilon < 0.5, "error_budget: epsilon must lie in [0, 1/2)");
    auto d = derivative_bounds(f);
    double q0 = static_cast<double>(f.t) * f.W;
    double frac_l = f.l % 2 ? 0.5 : 0.0, frac_m = f.m % 2 ? 0.5 : 0.0;
    double Y = f.Y();
    ErrorBudget b;
    b.H = H;
    b.epsilon = epsilon;
    b.delta_H = delta_H(f, d, H);
    b.Z = big_Z(f);
    double inner = Y / std::sqrt(q0) * (std::pow(f.U, 1 - frac_l) * std::pow(f.V, 1 - frac_m) * f.W + f.U * f.V * std::sqrt(f.W));
    b.T = b.delta_H * (inner + b.Z) * std::pow(H * static_cast<double>(f.t) * f.U * f.V * f.W, epsilon);
    b.first_O = f.U * f.V * f.W * Y / H;
    b.valid = H >= q0 / d.F;
    return b;
}

/// (tW)^{1+eps} / X with X the characteristic length.
inline double suggest_H(const AveragedFamily& f, double epsilon) {
    double q0 = static_cast<double>(f.t) * f.W;
    double X = characteristic_length(f);
    require(X > 0, "suggest_H: characteristic length must be positive");
    require(X <= q0, "suggest_H: requires X <= tW");
    return std::pow(q0, 1 + epsilon) / X;
}

struct DominanceReport {
    double X = 0;
    double q0 = 0;
    double first_min_argument = 0;  // U^{2{l/2}} V^{2{m/2}} X^2
    double Z_dom = 0;
    std::string Z_case;              // "(UV)^{1/4}(XY)^{1/2}" or "(XY)^{2/3}"
    bool first_bound = false;        // q0^{1+eps} <= U^{2{l/2}} V^{2{m/2}} X^2
    bool Z_bound = false;            // q0^{1+eps} <= Z
    bool main_term_bound = false;    // q0^eps t^{1/2} <= X
    std::vector<std::string> warnings;

    bool all() const { return first_bound && Z_bound && main_term_bound; }
};

/// Verdicts for the inequalities under which the main term should dominate.
inline DominanceReport dominance_report(const AveragedFamily& f, double epsilon) {
    DominanceReport r;
    r.q0 = static_cast<double>(f.t) * f.W;
    r.X = characteristic_length(f);
    double Y = f.Y();
    if (f.U > r.q0) r.warnings.push_back("U > tW: outside the regime U <= tW");
    if (f.V > r.q0) r.warnings.push_back("V > tW: outside the regime V <= tW");
    if (r.X > r.q0) r.warnings.push_back("X > tW: outside the regime X <= tW");
    double frac_l = f.l % 2 ? 0.5 : 0.0, frac_m = f.m % 2 ? 0.5 : 0.0;
    r.first_min_argument = std::pow(f.U, 2 * frac_l) * std::pow(f.V, 2 * frac_m) * r.X * r.X;
    if (f.scheme == CoefficientScheme::factorized && f.U * f.V >= r.q0) {
        r.Z_case = "(UV)^{1/4}(XY)^{1/2}";
        r.Z_dom = std::pow(f.U * f.V, 0.25) * std::sqrt(r.X * Y);
    } else {
        r.Z_case = "(XY)^{2/3}";
        r.Z_dom = std::pow(r.X * Y, 2.0 / 3.0);
    }
    double lhs = std::pow(r.q0, 1 + epsilon);
    r.first_bound = lhs <= r.first_min_argument;
    r.Z_bound = lhs <= r.Z_dom;
    r.main_term_bound = std::pow(r.q0, epsilon) * std::sqrt(static_cast<double>(f.t)) <= r.X;
    return r;
}

struct AveragedReport {
    AveragedFamily family;
    ErrorBudget budget;
    std::complex<double> S;
    std::complex<double> M;
    double ratio = 0;  // |S - M| / (UVWY/H + T)
};

inline AveragedReport averaged_report(const AveragedFamily& f, double H, double epsilon, unsigned threads = 1) {
    AveragedReport r;
    r.family = f;
    auto table = make_coefficients(f);
    r.S = s_exact(f, table, threads);
    r.M = main_term_thm3(f, table);
    r.budget = error_budget(f, H, epsilon);
    r.ratio = std::abs(r.S - r.M) / (r.budget.first_O + r.budget.T);
    return r;
}

/// A random admissible family with affine boundaries: small (r, s, t), cell
/// starts in {1/2, 1, 2, 3, 4}, Y <= 50, interval width X <= tW, scheme drawn
/// uniformly. Deterministic in the seed.
inline AveragedFamily seeded_family(u64 seed) {
    std::mt19937_64 rng(seed);
    auto pick = [&](u64 n) { return rng() % n; };
    auto small_rational = [&](i64 range, i64 den) { return Rational(static_cast<i64>(pick(2 * range + 1)) - range, den); };
    AveragedFamily f;
    f.seed = seed;
    f.l = 1 + static_cast<int>(pick(2));
    f.m = 1 + static_cast<int>(pick(2));
    const double starts[] = {0.5, 1, 2, 3, 4};
    f.U = starts[pick(5)];
    f.V = starts[pick(5)];
    f.W = starts[1 + pick(4)];
    f.t = 1 + pick(5);
    do {
        f.r = static_cast<i64>(pick(11)) - 5;
        f.s = static_cast<i64>(pick(11)) - 5;
    } while (f.r == 0 || f.s == 0 || (f.t > 1 && gcd_u(abs_u(f.r * f.s), f.t) != 1));
    f.scheme = static_cast<CoefficientScheme>(pick(3));
    i64 Y = 1 + static_cast<i64>(pick(50));
    f.J = Interval{small_rational(10, 2), Rational(Y)};
    i64 q0 = static_cast<i64>(f.t) * static_cast<i64>(f.W);
    Rational width(1 + static_cast<i64>(pick(static_cast<u64>(q0))));
    f.lower = {small_rational(20, 3), small_rational(4, 4), small_rational(4, 4), small_rational(4, 4), small_rational(4, 8)};
    f.upper = f.lower;
    f.upper.c0 += width;
    return f;
}

}  // namespace congruence_lab
