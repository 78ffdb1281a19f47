#pragma once

/// Quadratic Gauss sums G(s, t; u) = sum_{n=1}^{u} e((s n^2 + t n) / u).
///
/// gauss_brute sums the definition directly. gauss_closed returns the
/// evaluation for gcd(s, u) = 1 in structural form, split by the 2-adic
/// valuation of u:
///
///   u odd:        eps_u sqrt(u) (s/u) e(-conj(4s) t^2 / u)
///   u = 2v, v odd: 2 delta_t eps_v sqrt(v) (2s/v) e(-conj(8s) t^2 / v)
///   4 | u:        (1+i) eps_s^{-1} (1 - delta_t) sqrt(u) (u/s) e(-conj(s) t^2 / (4u))
///
/// where conj(x) is the inverse of x modulo the denominator of the phase.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "congruence_lab/arith.hpp"
#include "congruence_lab/rational.hpp"

namespace congruence_lab {

/// Absolute tolerance per unit of sqrt(u) when comparing Gauss sum evaluations.
inline constexpr double kGaussTolerance = 1e-6;

/// e(x) = exp(2 pi i x).
inline std::complex<double> unit_exp(double x) {
    double angle = 2.0 * std::numbers::pi * x;
    return {std::cos(angle), std::sin(angle)};
}

/// e(r) for an exact phase; reduces r mod 1 before touching floating point.
inline std::complex<double> unit_exp(const Rational& r) {
    Rational f = r.frac();
    return unit_exp(static_cast<double>(f.num()) / static_cast<double>(f.den()));
}

/// cos/sin table of e(k/u) for k in [0, u), so repeated sums at one modulus avoid trig calls.
class RootsOfUnity {
public:
    explicit RootsOfUnity(u64 u) : u_(u), table_(u) {
        require(u >= 1, "RootsOfUnity: modulus must be positive");
        for (u64 k = 0; k < u; ++k)
            table_[k] = unit_exp(static_cast<double>(k) / static_cast<double>(u));
    }
    u64 modulus() const { return u_; }
    const std::complex<double>& operator[](u64 k) const { return table_[k]; }

private:
    u64 u_;
    std::vector<std::complex<double>> table_;
};

namespace detail {

/// Neumaier-compensated accumulator for a complex sum.
struct CompensatedSum {
    double re = 0, im = 0, cre = 0, cim = 0;
    static void add(double& sum, double& comp, double x) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    void operator+=(std::complex<double> z) {
        add(re, cre, z.real());
        add(im, cim, z.imag());
    }
    std::complex<double> value() const { return {re + cre, im + cim}; }
};

}  // namespace detail

/// Direct summation against a prebuilt table for modulus u.
inline std::complex<double> gauss_brute(i64 s, i64 t, const RootsOfUnity& roots) {
    u64 u = roots.modulus();
    u64 sr = residue(s, u), tr = residue(t, u);
    // k = s n^2 + t n mod u, stepped by k(n+1) - k(n) = s(2n + 1) + t
    auto add = [u](u64 a, u64 b) { return a >= u - b ? a - (u - b) : a + b; };
    u64 step = add(sr, tr), twice_s = add(sr, sr), k = 0;
    detail::CompensatedSum acc;
    for (u64 n = 0; n < u; ++n) {
        acc += roots[k];
        k = add(k, step);
        step = add(step, twice_s);
    }
    return acc.value();
}

/// Direct summation of the definition; no coprimality requirement.
inline std::complex<double> gauss_brute(i64 s, i64 t, u64 u) { return gauss_brute(s, t, RootsOfUnity(u)); }

/// Gaussian integer coefficient of a closed form.
struct GaussianInt {
    int re = 0;
    int im = 0;
    std::complex<double> value() const { return {static_cast<double>(re), static_cast<double>(im)}; }
    friend bool operator==(const GaussianInt&, const GaussianInt&) = default;
};

enum class GaussCase { odd, twice_odd, divisible_by_four };

inline const char* to_string(GaussCase c) {
    switch (c) {
        case GaussCase::odd: return "u odd";
        case GaussCase::twice_odd: return "u = 2v, v odd";
        case GaussCase::divisible_by_four: return "4 | u";
    }
    return "?";
}

/// coefficient * i^unit_power * jacobi_sign * sqrt(radicand) * e(phase)
struct GaussClosedForm {
    GaussCase kind = GaussCase::odd;
    GaussianInt coefficient;
    int unit_power = 0;  // 0..3
    int jacobi_sign = 1;
    u64 radicand = 1;
    Rational phase;  // in [0, 1)

    std::complex<double> evaluate() const {
        static constexpr std::complex<double> powers[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        return coefficient.value() * powers[unit_power & 3] * static_cast<double>(jacobi_sign) *
               std::sqrt(static_cast<double>(radicand)) * unit_exp(phase);
    }

    std::string describe() const {
        static const char* units[] = {"1", "i", "-1", "-i"};
        std::string c = coefficient.im == 0 ? std::to_string(coefficient.re)
                                            : "(" + std::to_string(coefficient.re) + "+" +
                                                  std::to_string(coefficient.im) + "i)";
        return c + " * " + units[unit_power & 3] + " * (" + std::to_string(jacobi_sign) + ") * sqrt(" +
               std::to_string(radicand) + ") * e(" + phase.str() + ")";
    }
};

struct GaussSumValue {
    std::complex<double> numeric;
    std::optional<GaussClosedForm> structure;
};

/// Closed-form evaluation; requires gcd(s, u) = 1.
inline GaussSumValue gauss_closed(i64 s, i64 t, u64 u) {
    require(u >= 1, "gauss_closed: u must be positive");
    require(gcd_u(abs_u(s), u) == 1, "gauss_closed: requires gcd(s, u) = 1");

    GaussClosedForm form;
    if (u % 2 == 1) {
        // G(s,t;u) = e(-conj(4s) t^2/u) (s/u) G(1,0;u), G(1,0;u) = eps_u sqrt(u)
        u64 sr = residue(s, u), tr = residue(t, u);
        u64 inv = mod_inv(static_cast<i64>(mul_mod(4 % u, sr, u)), u);
        u64 k = mul_mod(inv, mul_mod(tr, tr, u), u);
        form.kind = GaussCase::odd;
        form.coefficient = {1, 0};
        form.unit_power = epsilon_power(static_cast<i64>(u));
        form.jacobi_sign = jacobi(static_cast<i64>(sr), static_cast<i64>(u));
        form.radicand = u;
        form.phase = Rational(static_cast<i64>((u - k) % u), static_cast<i64>(u));
    } else if (u % 4 == 2) {
        u64 v = u / 2;
        u64 sr = residue(s, v), tr = residue(t, v);
        u64 inv = mod_inv(static_cast<i64>(mul_mod(8 % v, sr, v)), v);
        u64 k = mul_mod(inv, mul_mod(tr, tr, v), v);
        form.kind = GaussCase::twice_odd;
        form.coefficient = {2 * delta(t), 0};
        form.unit_power = epsilon_power(static_cast<i64>(v));
        form.jacobi_sign = jacobi(static_cast<i64>(mul_mod(2 % v, sr, v)), static_cast<i64>(v));
        form.radicand = v;
        form.phase = Rational(static_cast<i64>((v - k) % v), static_cast<i64>(v));
    } else {
        // s is odd; reduce to its representative in [1, u) so (u/s) has a positive modulus
        u64 sr = residue(s, u);
        u64 four_u = 4 * u;
        u64 inv = mod_inv(static_cast<i64>(sr), four_u);
        u64 tr = residue(t, four_u);
        u64 k = mul_mod(inv, mul_mod(tr, tr, four_u), four_u);
        int one_minus_delta = 1 - delta(t);
        form.kind = GaussCase::divisible_by_four;
        form.coefficient = {one_minus_delta, one_minus_delta};
        form.unit_power = epsilon_power(static_cast<i64>(sr)) == 0 ? 0 : 3;  // eps_s^{-1}
        form.jacobi_sign = jacobi(static_cast<i64>(u), static_cast<i64>(sr));
        form.radicand = u;
        form.phase = Rational(static_cast<i64>((four_u - k) % four_u), static_cast<i64>(four_u));
    }
    return {form.evaluate(), form};
}

struct ReciprocityResult {
    bool holds = false;
    double residual = 0;   // |G(s,0;u) G(u,0;s) - G(1,0;su)|
    double tolerance = 0;  // kGaussTolerance * sqrt(su)
};

/// Checks G(s,0;u) G(u,0;s) = G(1,0;su) by direct summation.
inline ReciprocityResult reciprocity_residual(i64 s, u64 u) {
    require(s >= 1, "reciprocity_check: s must be positive");
    require(u >= 1, "reciprocity_check: u must be positive");
    require(gcd_u(static_cast<u64>(s), u) == 1, "reciprocity_check: requires gcd(s, u) = 1");
    u64 su = static_cast<u64>(s) * u;
    auto lhs = gauss_brute(s, 0, u) * gauss_brute(static_cast<i64>(u), 0, static_cast<u64>(s));
    auto rhs = gauss_brute(1, 0, su);
    ReciprocityResult r;
    r.residual = std::abs(lhs - rhs);
    r.tolerance = kGaussTolerance * std::sqrt(static_cast<double>(su));
    r.holds = r.residual <= r.tolerance;
    return r;
}

inline bool reciprocity_check(i64 s, u64 u) { return reciprocity_residual(s, u).holds; }

}  // namespace congruence_lab
