#pragma once

/// Solution counts for a x^e + b y^f = 0 (mod q) in boxes and between
/// boundary functions, together with the asymptotic main terms and error
/// envelopes they are compared against.
///
/// Envelopes are the O-expressions evaluated with implicit constant 1; the
/// reports give |exact - main| / envelope rather than claiming dominance.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "congruence_lab/arith.hpp"
#include "congruence_lab/parallel.hpp"
#include "congruence_lab/rational.hpp"

namespace congruence_lab {

/// Largest modulus accepted by the residue-class tabulation for e != 1.
inline constexpr u64 kMaxTabulatedModulus = 10'000'000;

struct CongruenceInstance {
    i64 a = 1;
    i64 b = 1;
    u64 q = 1;
    int e = 1;
    int f = 2;
    double X = 1;
    double Y = 1;

    void validate() const {
        require(a != 0 && b != 0, "instance: a and b must be non-zero");
        require(q >= 1, "instance: q must be positive");
        require(e >= 1 && f >= 1, "instance: exponents must be positive");
        require(X >= 1 && Y >= 1, "instance: X and Y must be at least 1");
        require(q == 1 || gcd_u(mul_mod(residue(a, q), residue(b, q), q), q) == 1,
                "instance: requires gcd(ab, q) = 1");
    }
};

struct CountReport {
    CongruenceInstance instance;
    u64 exact = 0;
    double main_term = 0;
    double envelope = 0;
    double ratio = 0;    // |exact - main_term| / envelope
    double seconds = 0;  // zero unless timing was requested
};

namespace detail {

/// #{1 <= n <= N : n = r (mod q)} for r in [0, q).
inline u64 count_in_class(u64 N, u64 r, u64 q) {
    if (r == 0) return N / q;
    return N >= r ? (N - r) / q + 1 : 0;
}

inline u64 floor_count(double bound) { return bound < 1 ? 0 : static_cast<u64>(std::floor(bound)); }

}  // namespace detail

/// Double loop over the box; the oracle for count_exact.
inline u64 count_naive(const CongruenceInstance& inst) {
    inst.validate();
    u64 q = inst.q, nx = detail::floor_count(inst.X), ny = detail::floor_count(inst.Y);
    u64 ar = residue(inst.a, q), br = residue(inst.b, q);
    u64 total = 0;
    for (u64 x = 1; x <= nx; ++x) {
        if (gcd_u(x, q) != 1) continue;
        u64 ax = mul_mod(ar, pow_mod(x, static_cast<u64>(inst.e), q), q);
        for (u64 y = 1; y <= ny; ++y) {
            if (gcd_u(y, q) != 1) continue;
            if ((ax + mul_mod(br, pow_mod(y, static_cast<u64>(inst.f), q), q)) % q == 0) ++total;
        }
    }
    return total;
}

/// M_{e,f}(X, Y; a, b, q): pairs 0 < x <= X, 0 < y <= Y with gcd(xy, q) = 1
/// and a x^e + b y^f = 0 (mod q), counted per residue class.
inline u64 count_exact(const CongruenceInstance& inst) {
    inst.validate();
    u64 q = inst.q, nx = detail::floor_count(inst.X), ny = detail::floor_count(inst.Y);
    if (q == 1) return nx * ny;
    u64 ar = residue(inst.a, q), br = residue(inst.b, q);
    u64 total = 0;
    if (inst.e == 1) {
        // x = -conj(a) b y^f (mod q) is a unit whenever y is
        u64 abar_b = mul_mod(mod_inv(static_cast<i64>(ar), q), br, q);
        for (u64 j = 1; j < q; ++j) {
            if (gcd_u(j, q) != 1) continue;
            u64 y_count = detail::count_in_class(ny, j, q);
            if (y_count == 0) continue;
            u64 c = (q - mul_mod(abar_b, pow_mod(j, static_cast<u64>(inst.f), q), q)) % q;
            total += y_count * detail::count_in_class(nx, c, q);
        }
        return total;
    }
    require(q <= kMaxTabulatedModulus, "count_exact: modulus too large for residue tabulation");
    // weight[v] = number of admissible x with a x^e = v (mod q)
    std::vector<u64> weight(q, 0);
    for (u64 i = 1; i < q; ++i) {
        if (gcd_u(i, q) != 1) continue;
        weight[mul_mod(ar, pow_mod(i, static_cast<u64>(inst.e), q), q)] += detail::count_in_class(nx, i, q);
    }
    for (u64 j = 1; j < q; ++j) {
        if (gcd_u(j, q) != 1) continue;
        u64 v = (q - mul_mod(br, pow_mod(j, static_cast<u64>(inst.f), q), q)) % q;
        total += detail::count_in_class(ny, j, q) * weight[v];
    }
    return total;
}

/// phi(q) X Y / q^2.
inline double main_term_thm1(const CongruenceInstance& inst) {
    require(inst.e == 1 && inst.f == 2, "main_term: requires e = 1, f = 2");
    double q = static_cast<double>(inst.q);
    return static_cast<double>(euler_phi(inst.q)) * inst.X * inst.Y / (q * q);
}

/// X/q tau(q) + L(q) sigma_{-1/2}(q) (Y/sqrt(q) tau(q) + sqrt(q) L(q)).
inline double envelope_thm1(const CongruenceInstance& inst) {
    require(inst.e == 1 && inst.f == 2, "envelope: requires e = 1, f = 2");
    Factorization fq = factorize(inst.q);
    double q = static_cast<double>(inst.q);
    double t = static_cast<double>(tau(fq));
    double L = log_plus_one(q);
    double root = std::sqrt(q);
    return inst.X / q * t + L * sigma_half_inv(fq) * (inst.Y / root * t + root * L);
}

/// Exact count, main term, envelope and ratio for one instance with (e, f) = (1, 2).
inline CountReport thm1_report(const CongruenceInstance& inst, bool timing = false) {
    auto start = std::chrono::steady_clock::now();
    CountReport r;
    r.instance = inst;
    r.exact = count_exact(inst);
    r.main_term = main_term_thm1(inst);
    r.envelope = envelope_thm1(inst);
    r.ratio = std::abs(static_cast<double>(r.exact) - r.main_term) / r.envelope;
    if (timing) r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

// ---------------------------------------------------------------------------
// counting between boundary functions
// ---------------------------------------------------------------------------

/// Half-open interval (start, start + length].
struct Interval {
    Rational start;
    Rational length;

    i64 first() const { return start.floor() + 1; }
    i64 last() const { return (start + length).floor(); }
    Rational end() const { return start + length; }
};

/// y -> intercept + slope * y with rational coefficients.
struct AffineBoundary {
    Rational intercept;
    Rational slope;

    Rational at(const Rational& y) const { return intercept + slope * y; }
    static AffineBoundary constant(Rational c) { return {c, Rational(0)}; }
};

/// Interval family I(y) = (lower(y), upper(y)].
struct BoundarySpec {
    AffineBoundary lower;
    AffineBoundary upper;

    /// T with |d f^{+-}/dy| <= T.
    double derivative_bound() const {
        return std::max(std::abs(lower.slope.to_double()), std::abs(upper.slope.to_double()));
    }
    Rational length_at(const Rational& y) const { return upper.at(y) - lower.at(y); }

    static BoundarySpec constant(Rational lo, Rational hi) {
        return {AffineBoundary::constant(lo), AffineBoundary::constant(hi)};
    }
};

/// Boundaries given as arbitrary real functions; counts are exact up to 1e-9
/// at the interval ends.
struct FunctionBoundary {
    std::function<double(double)> lower;
    std::function<double(double)> upper;
    double derivative_bound = 0;
};

namespace detail {

inline void check_coprime(i64 a, i64 b, u64 q, const char* who) {
    require(q >= 1, std::string(who) + ": q must be positive");
    require(a != 0 && b != 0, std::string(who) + ": a and b must be non-zero");
    require(q == 1 || gcd_u(mul_mod(residue(a, q), residue(b, q), q), q) == 1,
            std::string(who) + ": requires gcd(ab, q) = 1");
}

/// floor((v + shift) / q) for rational v.
inline i64 shifted_floor(const Rational& v, u64 shift, u64 q) {
    return ((v + Rational(static_cast<i64>(shift))) / Rational(static_cast<i64>(q))).floor();
}

inline i64 snapped_floor(double z) {
    double r = std::round(z);
    return std::abs(z - r) <= 1e-9 ? static_cast<i64>(r) : static_cast<i64>(std::floor(z));
}

}  // namespace detail

/// Number of (x, y) with y in J, gcd(y, q) = 1, x in (f^-(y), f^+(y)] and
/// a x + b y^2 = 0 (mod q), via
///   [(f^+(y) + conj(a) b y^2)/q] - [(f^-(y) + conj(a) b y^2)/q].
inline u64 count_boundaries(i64 a, i64 b, u64 q, const BoundarySpec& bounds, const Interval& J) {
    detail::check_coprime(a, b, q, "count_boundaries");
    require(J.length >= Rational(0), "count_boundaries: interval length must be non-negative");
    require(bounds.length_at(J.start) >= Rational(0) && bounds.length_at(J.end()) >= Rational(0),
            "count_boundaries: requires f+ >= f- on J");
    u64 abar_b = mul_mod(mod_inv(a, q), residue(b, q), q);
    i64 total = 0;
    for (i64 y = J.first(); y <= J.last(); ++y) {
        u64 yr = residue(y, q);
        if (gcd_u(yr, q) != 1 && q != 1) continue;
        u64 shift = mul_mod(abar_b, mul_mod(yr, yr, q), q);
        Rational yy(y);
        total += detail::shifted_floor(bounds.upper.at(yy), shift, q) - detail::shifted_floor(bounds.lower.at(yy), shift, q);
    }
    return static_cast<u64>(total);
}

inline u64 count_boundaries(i64 a, i64 b, u64 q, const FunctionBoundary& bounds, const Interval& J) {
    detail::check_coprime(a, b, q, "count_boundaries");
    u64 abar_b = mul_mod(mod_inv(a, q), residue(b, q), q);
    double qd = static_cast<double>(q);
    i64 total = 0;
    for (i64 y = J.first(); y <= J.last(); ++y) {
        u64 yr = residue(y, q);
        if (gcd_u(yr, q) != 1 && q != 1) continue;
        double shift = static_cast<double>(mul_mod(abar_b, mul_mod(yr, yr, q), q));
        double lo = bounds.lower(static_cast<double>(y)), hi = bounds.upper(static_cast<double>(y));
        require(hi >= lo, "count_boundaries: requires f+ >= f- on J");
        total += detail::snapped_floor((hi + shift) / qd) - detail::snapped_floor((lo + shift) / qd);
    }
    return static_cast<u64>(total);
}

/// Delta_H = 1 + H T Y / q.
inline double corollary_delta_H(double H, double T, double Y, u64 q) { return 1.0 + H * T * Y / static_cast<double>(q); }

/// (1/q) sum over y in J with gcd(y, q) = 1 of X(y), exact.
inline Rational boundary_main_term(u64 q, const BoundarySpec& bounds, const Interval& J) {
    Rational sum(0);
    for (i64 y = J.first(); y <= J.last(); ++y) {
        if (q != 1 && gcd_u(residue(y, q), q) != 1) continue;
        sum += bounds.length_at(Rational(y));
    }
    return sum / Rational(static_cast<i64>(q));
}

/// Count between boundaries with main term (1/q) sum X(y) and envelope
///   Y/H + Delta_H L(H) sigma_{-1/2}(q) (Y/sqrt(q) tau(q) + sqrt(q) L(q)).
/// instance.X carries the mean interval length over J.
inline CountReport corollary_report(i64 a, i64 b, u64 q, const BoundarySpec& bounds, const Interval& J, double H,
                                    bool timing = false) {
    require(H > 0, "corollary_report: H must be positive");
    auto start = std::chrono::steady_clock::now();
    CountReport r;
    r.exact = count_boundaries(a, b, q, bounds, J);
    r.main_term = boundary_main_term(q, bounds, J).to_double();

    Factorization fq = factorize(q);
    double Y = J.length.to_double();
    double qd = static_cast<double>(q), root = std::sqrt(qd);
    double delta_H = corollary_delta_H(H, bounds.derivative_bound(), Y, q);
    r.envelope = Y / H + delta_H * log_plus_one(H) * sigma_half_inv(fq) *
                             (Y / root * static_cast<double>(tau(fq)) + root * log_plus_one(qd));
    r.ratio = std::abs(static_cast<double>(r.exact) - r.main_term) / r.envelope;

    i64 points = std::max<i64>(0, J.last() - J.first() + 1);
    Rational total_length(0);
    for (i64 y = J.first(); y <= J.last(); ++y) total_length += bounds.length_at(Rational(y));
    r.instance = CongruenceInstance{a, b, q, 1, 2, points > 0 ? total_length.to_double() / points : 0.0, Y};
    if (timing) r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

// ---------------------------------------------------------------------------
// bilinear sums with the Jacobi symbol
// ---------------------------------------------------------------------------

struct BilinearResult {
    std::complex<double> sum;
    double bound = 0;  // (MN)^eps (M N^{1/2} + M^{1/2} N)
};

/// sum_{m <= M odd} sum_{n <= N} a_m b_n (n/m); a[m-1] = a_m, b[n-1] = b_n.
/// Entries of `a` at even m are ignored.
inline BilinearResult bilinear_jacobi(std::span<const std::complex<double>> a, std::span<const std::complex<double>> b,
                                      double epsilon) {
    require(!a.empty() && !b.empty(), "bilinear_jacobi: M and N must be at least 1");
    std::complex<double> total{};
    for (std::size_t m = 1; m <= a.size(); m += 2) {
        std::complex<double> row{};
        for (std::size_t n = 1; n <= b.size(); ++n) {
            int chi = jacobi(static_cast<i64>(n), static_cast<i64>(m));
            if (chi != 0) row += static_cast<double>(chi) * b[n - 1];
        }
        total += a[m - 1] * row;
    }
    double M = static_cast<double>(a.size()), N = static_cast<double>(b.size());
    return {total, std::pow(M * N, epsilon) * (M * std::sqrt(N) + std::sqrt(M) * N)};
}

// ---------------------------------------------------------------------------
// scans
// ---------------------------------------------------------------------------

struct ScanOptions {
    unsigned threads = 1;
    bool timing = false;
    std::vector<std::string>* skipped = nullptr;  // receives one line per rejected instance
};

using ValueRule = std::function<double(u64)>;
using CoefficientRule = std::function<i64(u64)>;

/// One report per q in q_list (in order); instances violating gcd(ab, q) = 1 are skipped.
inline std::vector<CountReport> scan_thm1(std::span<const u64> q_list, const ValueRule& X_rule, const ValueRule& Y_rule,
                                          const CoefficientRule& a_rule, const CoefficientRule& b_rule,
                                          const ScanOptions& options = {}) {
    std::vector<CongruenceInstance> instances;
    for (u64 q : q_list) {
        CongruenceInstance inst{a_rule(q), b_rule(q), q, 1, 2, X_rule(q), Y_rule(q)};
        try {
            inst.validate();
            instances.push_back(inst);
        } catch (const precondition_error& e) {
            if (options.skipped) options.skipped->push_back("q=" + std::to_string(q) + ": " + e.what());
        }
    }
    return ordered_map(instances.size(), options.threads,
                       [&](std::size_t i) { return thm1_report(instances[i], options.timing); });
}

}  // namespace congruence_lab
