#pragma once

/// Almost-prime points on the sextic del Pezzo surface with an A2 singularity,
/// through its universal torsor
///   eta2 a1^2 + eta3 a2 + eta4 a3 = 0,
/// together with the sieve data (rho, remainders, dimension and level
/// conditions) used to bound their number from below.

#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "congruence_lab/arith.hpp"
#include "congruence_lab/parallel.hpp"
#include "congruence_lab/rational.hpp"

namespace congruence_lab {

/// Sieving limit for dimension 3 (Diamond-Halberstam tables).
inline constexpr double kBeta3 = 6.640859;

struct TorsorPoint {
    std::array<i64, 4> eta{1, 1, 1, 1};
    std::array<i64, 3> alpha{1, 1, 1};

    bool satisfies_equation() const {
        return static_cast<i128>(eta[1]) * alpha[0] * alpha[0] + static_cast<i128>(eta[2]) * alpha[1] +
                   static_cast<i128>(eta[3]) * alpha[2] ==
               0;
    }

    void validate() const {
        for (i64 e : eta) require(e > 0, "torsor: eta must be positive");
        for (i64 a : alpha) require(a != 0, "torsor: alpha1 alpha2 alpha3 must be non-zero");
        require(satisfies_equation(), "torsor: eta2 a1^2 + eta3 a2 + eta4 a3 != 0");
        auto coprime = [](i64 a, i64 b) { return gcd_u(abs_u(a), abs_u(b)) == 1; };
        auto [e1, e2, e3, e4] = eta;
        require(coprime(alpha[0], e1 * e3 * e4) && coprime(alpha[1], e1 * e2 * e4) && coprime(alpha[2], e1 * e2 * e3),
                "torsor: alpha coprimality conditions fail");
        require(coprime(e2, e3) && coprime(e2, e4) && coprime(e3, e4), "torsor: eta2, eta3, eta4 must be pairwise coprime");
    }
};

struct SurfacePoint {
    std::array<i64, 7> x{};

    /// x3 x4 = x0 x5.
    bool first_quadric() const { return static_cast<i128>(x[3]) * x[4] == static_cast<i128>(x[0]) * x[5]; }
    /// x6^2 + x3 x5 + x4 x5 = 0.
    bool second_quadric() const {
        return static_cast<i128>(x[6]) * x[6] + static_cast<i128>(x[3]) * x[5] + static_cast<i128>(x[4]) * x[5] == 0;
    }
    i64 height() const {
        i64 h = 0;
        for (i64 v : x) h = std::max<i64>(h, v < 0 ? -v : v);
        return h;
    }
};

namespace detail {

/// eta1^a eta2^b eta3^c eta4^d
inline i128 eta_monomial(const std::array<i64, 4>& eta, int a, int b, int c, int d) {
    i128 v = 1;
    const int exps[4] = {a, b, c, d};
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < exps[i]; ++k) v *= eta[i];
    return v;
}

inline i64 narrow_coordinate(i128 v) {
    require(v <= INT64_MAX && v >= -static_cast<i128>(INT64_MAX), "pi_map: coordinate overflows 64 bits");
    return static_cast<i64>(v);
}

}  // namespace detail

/// (a2 a3, eta^(1,1,1,0) a1 a2, eta^(1,1,0,1) a1 a3, eta^(2,1,2,1) a2,
///  eta^(2,1,1,2) a3, eta^(4,2,3,3), eta^(3,2,2,2) a1).
inline SurfacePoint pi_map(const TorsorPoint& p) {
    p.validate();
    const auto& e = p.eta;
    auto [a1, a2, a3] = p.alpha;
    using detail::eta_monomial;
    SurfacePoint s;
    const i128 coords[7] = {
        static_cast<i128>(a2) * a3,
        eta_monomial(e, 1, 1, 1, 0) * a1 * a2,
        eta_monomial(e, 1, 1, 0, 1) * a1 * a3,
        eta_monomial(e, 2, 1, 2, 1) * a2,
        eta_monomial(e, 2, 1, 1, 2) * a3,
        eta_monomial(e, 4, 2, 3, 3),
        eta_monomial(e, 3, 2, 2, 2) * a1,
    };
    for (int i = 0; i < 7; ++i) s.x[i] = detail::narrow_coordinate(coords[i]);
    return s;
}

/// x0 ... x6 = eta1^13 eta2^8 eta3^9 eta4^9 (a1 a2 a3)^3, in arbitrary precision.
inline bool product_identity_holds(const TorsorPoint& p, const SurfacePoint& s) {
    using boost::multiprecision::cpp_int;
    cpp_int lhs = 1;
    for (i64 v : s.x) lhs *= v;
    cpp_int rhs = 1;
    const int exps[4] = {13, 8, 9, 9};
    for (int i = 0; i < 4; ++i) rhs *= boost::multiprecision::pow(cpp_int(p.eta[i]), static_cast<unsigned>(exps[i]));
    for (i64 a : p.alpha) rhs *= boost::multiprecision::pow(cpp_int(a), 3);
    return lhs == rhs;
}

/// A solution of a1^2 - a2 + q a3 = 0 with eta4 = q prime.
struct SpecialPoint {
    u64 q = 2;
    std::array<i64, 3> alpha{1, 1, 0};

    void validate() const {
        require(is_prime(q), "special point: q must be prime");
        auto [a1, a2, a3] = alpha;
        require(a3 != 0 && a1 != 0 && a2 != 0, "special point: alpha1 alpha2 alpha3 must be non-zero");
        require(static_cast<i128>(a1) * a1 - a2 + static_cast<i128>(q) * a3 == 0, "special point: a1^2 - a2 + q a3 != 0");
        require(gcd_u(mul_mod(residue(a1, q), residue(a2, q), q), q) == 1, "special point: requires gcd(a1 a2, q) = 1");
    }
};

/// eta = (1, 1, 1, q), alpha = (a1, -a2, a3).
inline TorsorPoint special_to_torsor(const SpecialPoint& p) {
    p.validate();
    TorsorPoint t{{1, 1, 1, static_cast<i64>(p.q)}, {p.alpha[0], -p.alpha[1], p.alpha[2]}};
    t.validate();
    return t;
}

namespace detail {

/// Largest a >= 0 with c a^3 <= N.
inline u64 cube_root_floor(u128 N, u128 c) {
    u64 lo = 0, hi = 1;
    while (c * hi * hi * hi <= N) hi *= 2;
    while (hi - lo > 1) {
        u64 mid = lo + (hi - lo) / 2;
        (c * mid * mid * mid <= N ? lo : hi) = mid;
    }
    return lo;
}

/// Primes q with B^{1/3}/2 < q <= B^{1/3}, i.e. 8 q^3 > B and q^3 <= B.
inline std::vector<u64> window_primes(u64 B) {
    u64 hi = cube_root_floor(B, 1);
    u64 lo = cube_root_floor(B, 8);  // largest q with 8 q^3 <= B
    return primes_in(lo + 1, hi);
}

inline bool in_window(u64 q, u64 B) {
    u128 c = u128{q} * q * q;
    return 8 * c > B && c <= B;
}

inline int omega_abs(i64 v) { return big_omega(abs_u(v)); }

/// The seven monomials bounding the anticanonical height, with eta1 = eta2 = eta3 = 1.
inline bool heights_hold(u64 q, const std::array<i64, 3>& a, u64 B) {
    i128 Q = static_cast<i128>(q);
    auto [a1, a2, a3] = a;
    auto abs128 = [](i128 v) { return v < 0 ? -v : v; };
    const i128 monomials[7] = {static_cast<i128>(a2) * a3, static_cast<i128>(a1) * a2, Q * a1 * a3, Q * a2,
                               Q * Q * a3,                 Q * Q * Q,                  Q * Q * a1};
    for (i128 m : monomials)
        if (abs128(m) > static_cast<i128>(B)) return false;
    return true;
}

/// Calls visit(a1, a2, a3) for every triple with 0 < a1 <= B^{1/3}/2,
/// 0 < a2 <= B^{2/3}/2, a2 = a1^2 (mod q), gcd(a1 a2, q) = 1, a3 != 0.
template <class Visit>
void for_each_special(u64 B, u64 q, Visit&& visit) {
    u64 a1_max = cube_root_floor(B, 8);
    u64 a2_max = cube_root_floor(u128{B} * B, 8);
    for (u64 a1 = 1; a1 <= a1_max; ++a1) {
        if (a1 % q == 0) continue;
        u64 sq = a1 * a1;
        u64 r = sq % q;  // non-zero since q is prime and q does not divide a1
        for (u64 a2 = r; a2 <= a2_max; a2 += q) {
            if (a2 == sq) continue;
            i64 a3 = (static_cast<i64>(a2) - static_cast<i64>(sq)) / static_cast<i64>(q);
            visit(static_cast<i64>(a1), static_cast<i64>(a2), a3);
        }
    }
}

}  // namespace detail

struct EnumeratedPoint {
    SpecialPoint special;
    int omega = 0;  // Omega(|a1 a2 a3|)
};

struct Enumeration {
    u64 count = 0;
    std::vector<EnumeratedPoint> points;  // empty unless requested; ascending q, then a1, then a2
};

struct EnumerateOptions {
    unsigned threads = 1;
    bool keep_points = false;
};

namespace detail {

inline Enumeration enumerate_for_q(u64 B, u64 q, int t, bool keep_points, bool check_heights) {
    Enumeration out;
    for_each_special(B, q, [&](i64 a1, i64 a2, i64 a3) {
        int omega = omega_abs(a1) + omega_abs(a2) + omega_abs(a3);
        if (omega > t) return;
        SpecialPoint sp{q, {a1, a2, a3}};
        auto torsor = special_to_torsor(sp);  // validates equation and coprimality
        if (check_heights && !heights_hold(q, sp.alpha, B))
            throw std::logic_error("dp6: height bound violated at q=" + std::to_string(q));
        (void)torsor;
        ++out.count;
        if (keep_points) out.points.push_back({sp, omega});
    });
    return out;
}

}  // namespace detail

/// Points counted by the lower bound for M_t(B): primes q in (B^{1/3}/2, B^{1/3}]
/// and triples of the special family with Omega(|a1 a2 a3|) <= t. Each point is
/// checked against the torsor equation, coprimality and the seven height bounds.
inline Enumeration enumerate_lower_bound_points(u64 B, int t, const EnumerateOptions& options = {}) {
    require(B >= 8, "enumerate: B must be at least 8");
    require(t >= 0, "enumerate: t must be non-negative");
    auto qs = detail::window_primes(B);
    auto parts = ordered_map(qs.size(), options.threads,
                             [&](std::size_t i) { return detail::enumerate_for_q(B, qs[i], t, options.keep_points, true); });
    Enumeration all;
    for (auto& part : parts) {
        all.count += part.count;
        all.points.insert(all.points.end(), part.points.begin(), part.points.end());
    }
    return all;
}

/// L_t(B; q); zero by convention when q^3 > B.
inline u64 l_t_count(u64 B, u64 q, int t) {
    require(is_prime(q), "l_t_count: q must be prime");
    require(B >= 1, "l_t_count: B must be positive");
    if (u128{q} * q * q > B) return 0;
    return detail::enumerate_for_q(B, q, t, false, false).count;
}

struct SieveSequence {
    u64 B = 0;
    u64 q = 0;
    std::map<u64, u64> a;  // n -> number of triples with |a1 a2 a3| = n
    Rational X_approx;     // phi(q) B / (4 q^2)

    u64 total() const {
        u64 s = 0;
        for (const auto& [n, c] : a) s += c;
        return s;
    }
};

inline SieveSequence build_sieve_sequence(u64 B, u64 q) {
    require(is_prime(q), "sieve sequence: q must be prime");
    require(detail::in_window(q, B), "sieve sequence: requires B^{1/3}/2 < q <= B^{1/3}");
    SieveSequence seq;
    seq.B = B;
    seq.q = q;
    detail::for_each_special(B, q, [&](i64 a1, i64 a2, i64 a3) {
        seq.a[static_cast<u64>(a1) * static_cast<u64>(a2) * abs_u(a3)] += 1;
    });
    seq.X_approx = Rational(static_cast<i128>(euler_phi(q)) * B, static_cast<i128>(4) * q * q);
    return seq;
}

/// The density rho(d) for the special family at prime q, from the triple sum
///   mu(d) d sum_e mu(e1) mu(e2) mu(e3) k / (e1 e2 e3) sum_{l | f3} (1/l) phi*(f3/l) / phi*((f3/l, q))
/// over e with p | e1 e2 e3 <=> p | d and (e1 e2, q) = 1.
inline Rational rho(u64 d, u64 q) {
    require(d >= 1, "rho: d must be positive");
    require(is_prime(q), "rho: q must be prime");
    auto fd = factorize(d);
    require(fd.square_free(), "rho: d must be square-free");
    std::vector<u64> primes;
    for (const auto& pp : fd.factors) primes.push_back(pp.prime);

    // each prime of d divides a non-empty subset of {e1, e2, e3}; q may only divide e3
    std::size_t n = primes.size();
    std::vector<int> mask(n, 1);
    Rational sum(0);
    while (true) {
        u64 e[3] = {1, 1, 1};
        bool allowed = true;
        for (std::size_t i = 0; i < n; ++i) {
            for (int j = 0; j < 3; ++j)
                if (mask[i] >> j & 1) e[j] *= primes[i];
            if (primes[i] == q && (mask[i] & 3)) allowed = false;
        }
        if (allowed) {
            u64 k = gcd_u(gcd_u(e[0], e[1]), e[2]);
            u64 k13 = gcd_u(e[0] / k, e[2] / k), k23 = gcd_u(e[1] / k, e[2] / k);
            u64 f3 = e[2] / (k * k13 * k23);
            Rational inner(0);
            auto f3_primes = factorize(f3);
            std::size_t m = f3_primes.factors.size();
            for (u64 sub = 0; sub < (u64{1} << m); ++sub) {
                u64 ell = 1;
                for (std::size_t i = 0; i < m; ++i)
                    if (sub >> i & 1) ell *= f3_primes.factors[i].prime;
                u64 rest = f3 / ell;
                inner += Rational(1, static_cast<i64>(ell)) * phi_star(rest) / phi_star(gcd_u(rest, q));
            }
            int sign = mobius(e[0]) * mobius(e[1]) * mobius(e[2]);
            sum += Rational(static_cast<i128>(sign) * static_cast<i128>(k), static_cast<i128>(e[0]) * e[1] * e[2]) * inner;
        }
        std::size_t i = 0;
        while (i < n && mask[i] == 7) mask[i++] = 1;
        if (i == n) break;
        ++mask[i];
    }
    return Rational(mobius(fd) * static_cast<i64>(d)) * sum;
}

struct RhoOracle {
    Rational brute;    // #{(a1, a2) in F_p^2 : p | a1 a2 (a2 - a1^2)} / p^2
    Rational formula;  // rho(p) / p
};

inline RhoOracle rho_oracle_prime(u64 p, u64 q) {
    require(is_prime(p) && is_prime(q), "rho oracle: p and q must be prime");
    require(p != 2, "rho oracle: p = 2 is excluded");
    require(p != q, "rho oracle: requires p != q");
    u64 hits = 0;
    for (u64 a1 = 0; a1 < p; ++a1)
        for (u64 a2 = 0; a2 < p; ++a2) {
            u64 a3 = (a2 + p - a1 * a1 % p) % p;  // q a3 = a2 - a1^2 with q invertible mod p
            if (a1 == 0 || a2 == 0 || a3 == 0) ++hits;
        }
    return {Rational(static_cast<i64>(hits), static_cast<i64>(p * p)), rho(p, q) / Rational(static_cast<i64>(p))};
}

struct DivisorSum {
    u64 exact = 0;
    double predicted = 0;
    double remainder = 0;
};

/// sum_{d | n} a_n against rho(d)/d X.
inline DivisorSum sum_over_d(const SieveSequence& seq, u64 d) {
    require(d >= 1 && factorize(d).square_free(), "sum_over_d: d must be square-free");
    DivisorSum r;
    for (const auto& [n, c] : seq.a)
        if (n % d == 0) r.exact += c;
    r.predicted = (rho(d, seq.q) / Rational(static_cast<i64>(d)) * seq.X_approx).to_double();
    r.remainder = static_cast<double>(r.exact) - r.predicted;
    return r;
}

/// mu - 1 + (mu - kappa)(1 - 1/beta) + (kappa + 1) log beta.
inline double sieve_threshold(double mu, double kappa, double beta) {
    return mu - 1 + (mu - kappa) * (1 - 1 / beta) + (kappa + 1) * std::log(beta);
}

struct W1Row {
    u64 w = 0;
    u64 z = 0;
    double product = 0;  // prod_{w <= p <= z} (1 - rho(p)/p)^{-1}
    double power = 0;    // (log z / log w)^kappa
    double c1 = 0;       // smallest c1 with product <= power (1 + c1/log w)
};

struct SieveReport {
    u64 B = 0;
    u64 q = 0;
    double tau = 0;
    double c2 = 1;
    double c3 = 2;
    double X = 0;
    double level = 0;  // X^tau / log^{c2} X
    double W2_sum = 0;
    double W2_bound = 0;  // c3 X / log^{kappa+1} X
    bool W2_holds = false;
    std::vector<u64> W0_violations;  // primes p <= z_max with rho(p) >= p
    std::vector<W1Row> W1;
    double c1_min = 0;
    double kappa = 3;
    double mu = 4;
    double beta = kBeta3;
    double threshold = 0;
    int t_min = 0;  // smallest integer t above the threshold
    bool t12_qualifies = false;
};

struct SieveOptions {
    double tau = 0.4;
    double c2 = 1;
    double c3 = 2;
    double mu = 4;
    u64 z_max = 10000;
};

inline SieveReport sieve_condition_report(u64 B, u64 q, const SieveOptions& opt = {}) {
    require(opt.tau > 0 && opt.tau < 1, "sieve report: tau must lie in (0, 1)");
    require(opt.z_max >= 3, "sieve report: z_max must be at least 3");
    auto seq = build_sieve_sequence(B, q);
    SieveReport r;
    r.B = B;
    r.q = q;
    r.tau = opt.tau;
    r.c2 = opt.c2;
    r.c3 = opt.c3;
    r.mu = opt.mu;
    r.X = seq.X_approx.to_double();
    double logX = std::log(r.X);
    r.level = logX > 0 ? std::pow(r.X, r.tau) / std::pow(logX, r.c2) : 0;
    for (u64 d = 1; static_cast<double>(d) <= r.level; ++d) {
        auto fd = factorize(d);
        if (!fd.square_free()) continue;
        r.W2_sum += std::pow(4.0, little_omega(fd)) * std::abs(sum_over_d(seq, d).remainder);
    }
    r.W2_bound = logX > 0 ? r.c3 * r.X / std::pow(logX, r.kappa + 1) : 0;
    r.W2_holds = r.W2_sum <= r.W2_bound;

    auto primes = primes_in(2, opt.z_max);
    std::vector<double> factor;
    for (u64 p : primes) {
        Rational rp = rho(p, q);
        if (rp >= Rational(static_cast<i64>(p))) r.W0_violations.push_back(p);
        factor.push_back(1.0 / (1.0 - rp.to_double() / static_cast<double>(p)));
    }
    // the grid starts at w = 3: rho(2) = 2 makes the factor at p = 2 infinite
    std::vector<u64> grid;
    for (u64 w : {3u, 5u, 7u, 11u, 20u, 50u, 100u, 300u, 1000u, 3000u, 10000u})
        if (w <= opt.z_max) grid.push_back(w);
    for (u64 w : grid)
        for (u64 z : grid) {
            if (z < w) continue;
            W1Row row{w, z, 1.0, 0, 0};
            for (std::size_t i = 0; i < primes.size(); ++i)
                if (primes[i] >= w && primes[i] <= z) row.product *= factor[i];
            double lw = std::log(static_cast<double>(w));
            row.power = std::pow(std::log(static_cast<double>(z)) / lw, r.kappa);
            row.c1 = std::max(0.0, lw * (row.product / row.power - 1));
            r.c1_min = std::max(r.c1_min, row.c1);
            r.W1.push_back(row);
        }
    r.threshold = sieve_threshold(r.mu, r.kappa, r.beta);
    r.t_min = static_cast<int>(std::floor(r.threshold)) + 1;
    r.t12_qualifies = 12 > r.threshold;
    return r;
}

struct GrowthRow {
    u64 B = 0;
    int t = 0;
    u64 count = 0;
    double normalized = 0;  // count log^5 B / B
};

inline std::vector<GrowthRow> m_t_growth(const std::vector<u64>& budgets, int t, unsigned threads = 1) {
    for (std::size_t i = 1; i < budgets.size(); ++i) require(budgets[i - 1] < budgets[i], "growth: budgets must ascend");
    std::vector<GrowthRow> rows;
    for (u64 B : budgets) {
        GrowthRow row{B, t, enumerate_lower_bound_points(B, t, {threads, false}).count, 0};
        double lb = std::log(static_cast<double>(B));
        row.normalized = static_cast<double>(row.count) * std::pow(lb, 5) / static_cast<double>(B);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace congruence_lab
