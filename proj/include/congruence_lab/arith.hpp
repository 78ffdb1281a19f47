#pragma once

/// Integer and multiplicative-function primitives.
///
/// Everything here is a pure function of its arguments. Inputs outside an
/// operation's domain raise precondition_error (a std::invalid_argument), so
/// callers such as the CLI can tell validation failures apart from bugs.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "congruence_lab/rational.hpp"

namespace congruence_lab {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

struct precondition_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raised by mod_inv when gcd(a, q) > 1.
struct not_invertible : precondition_error {
    using precondition_error::precondition_error;
};

inline void require(bool ok, const std::string& what) {
    if (!ok) throw precondition_error(what);
}

// ---------------------------------------------------------------------------
// modular helpers
// ---------------------------------------------------------------------------

inline u64 mul_mod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 pow_mod(u64 base, u64 exp, u64 m) {
    if (m == 1) return 0;
    u64 result = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

/// Least non-negative residue of a mod m, m >= 1.
inline u64 residue(i64 a, u64 m) {
    if (a >= 0) return static_cast<u64>(a) % m;
    u64 r = static_cast<u64>(-(a + 1)) % m;  // avoids negating INT64_MIN
    return m - 1 - r;
}

inline u64 gcd_u(u64 a, u64 b) { return std::gcd(a, b); }

inline u64 abs_u(i64 a) { return a < 0 ? static_cast<u64>(-(a + 1)) + 1 : static_cast<u64>(a); }

/// Inverse of a modulo q in [0, q). mod_inv(a, 1) = 0.
inline u64 mod_inv(i64 a, u64 q) {
    require(q >= 1, "mod_inv: modulus must be positive");
    if (q == 1) return 0;
    i128 r0 = static_cast<i128>(q), r1 = static_cast<i128>(residue(a, q));
    i128 s0 = 0, s1 = 1;
    while (r1 != 0) {
        i128 quot = r0 / r1;
        i128 tmp = r0 - quot * r1;
        r0 = r1;
        r1 = tmp;
        tmp = s0 - quot * s1;
        s0 = s1;
        s1 = tmp;
    }
    if (r0 != 1) throw not_invertible("mod_inv: gcd(a, q) > 1");
    i128 inv = s0 % static_cast<i128>(q);
    if (inv < 0) inv += q;
    return static_cast<u64>(inv);
}

// ---------------------------------------------------------------------------
// primality and factorization
// ---------------------------------------------------------------------------

/// Deterministic Miller-Rabin; the first twelve primes are witnesses for all n < 2^64.
inline bool is_prime(u64 n) {
    if (n < 2) return false;
    constexpr u64 small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (u64 p : small) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (u64 a : small) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

struct PrimePower {
    u64 prime = 0;
    int exponent = 0;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
    u64 n = 1;
    std::vector<PrimePower> factors;  // strictly increasing primes

    u64 product() const {
        u64 p = 1;
        for (auto [prime, e] : factors)
            for (int i = 0; i < e; ++i) p *= prime;
        return p;
    }
    bool square_free() const {
        return std::all_of(factors.begin(), factors.end(), [](const PrimePower& f) { return f.exponent == 1; });
    }
};

namespace detail {

inline constexpr u64 kTrialLimit = 1'000'000;

/// Brent's variant of Pollard rho. n must be odd, composite and not a prime power of a small prime.
inline u64 pollard_brent(u64 n) {
    for (u64 c = 1;; ++c) {
        auto f = [&](u64 x) { return (mul_mod(x, x, n) + c) % n; };
        u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
        u64 r = 1;
        constexpr u64 m = 128;
        do {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            u64 k = 0;
            do {
                ys = y;
                for (u64 i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mul_mod(q, x > y ? x - y : y - x, n);
                }
                g = gcd_u(q, n);
                k += m;
            } while (k < r && g == 1);
            r <<= 1;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = gcd_u(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

inline void split(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    u64 d = pollard_brent(n);
    split(d, out);
    split(n / d, out);
}

}  // namespace detail

/// Trial division up to 10^6, then Pollard rho on the cofactor.
inline Factorization factorize(u64 n) {
    require(n >= 1, "factorize: n must be positive");
    Factorization result{n, {}};
    u64 m = n;
    auto take = [&](u64 p) {
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        if (e > 0) result.factors.push_back({p, e});
    };
    take(2);
    for (u64 p = 3; p <= detail::kTrialLimit && p * p <= m; p += 2) take(p);
    if (m > 1) {
        if (m <= detail::kTrialLimit * detail::kTrialLimit || is_prime(m)) {
            // no factor below 10^6 and m < 10^12 (or prime): m is prime
            result.factors.push_back({m, 1});
        } else {
            std::vector<u64> primes;
            detail::split(m, primes);
            std::sort(primes.begin(), primes.end());
            for (u64 p : primes) {
                if (!result.factors.empty() && result.factors.back().prime == p)
                    ++result.factors.back().exponent;
                else
                    result.factors.push_back({p, 1});
            }
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// multiplicative functions
// ---------------------------------------------------------------------------

inline i64 tau(const Factorization& f) {
    i64 t = 1;
    for (auto pe : f.factors) t *= pe.exponent + 1;
    return t;
}

inline u64 euler_phi(const Factorization& f) {
    u64 r = f.n;
    for (auto pe : f.factors) r = r / pe.prime * (pe.prime - 1);
    return r;
}

/// phi(n)/n, exact.
inline Rational phi_star(const Factorization& f) {
    Rational r(1);
    for (auto pe : f.factors)
        r *= Rational(static_cast<i64>(pe.prime - 1), static_cast<i64>(pe.prime));
    return r;
}

inline int mobius(const Factorization& f) {
    if (!f.square_free()) return 0;
    return f.factors.size() % 2 == 0 ? 1 : -1;
}

inline int big_omega(const Factorization& f) {
    int s = 0;
    for (auto pe : f.factors) s += pe.exponent;
    return s;
}

inline int little_omega(const Factorization& f) { return static_cast<int>(f.factors.size()); }

/// sigma_{-1/2}(n) = sum over d | n of d^{-1/2}.
inline double sigma_half_inv(const Factorization& f) {
    double s = 1.0;
    for (auto pe : f.factors) {
        double step = 1.0 / std::sqrt(static_cast<double>(pe.prime));
        double term = 1.0, local = 1.0;
        for (int i = 0; i < pe.exponent; ++i) {
            term *= step;
            local += term;
        }
        s *= local;
    }
    return s;
}

/// L(n) = log(n + 1).
inline double log_plus_one(double n) { return std::log1p(n); }

inline i64 tau(u64 n) { return tau(factorize(n)); }
inline u64 euler_phi(u64 n) { return euler_phi(factorize(n)); }
inline Rational phi_star(u64 n) { return phi_star(factorize(n)); }
inline int mobius(u64 n) { return mobius(factorize(n)); }
inline int big_omega(u64 n) { return big_omega(factorize(n)); }
inline int little_omega(u64 n) { return little_omega(factorize(n)); }
inline double sigma_half_inv(u64 n) { return sigma_half_inv(factorize(n)); }

enum class ArithKind { tau, sigma_half_inv, phi, phi_star, mobius, big_omega, little_omega, L };

using ArithValue = std::variant<i64, Rational, double>;

inline ArithValue arith_function(ArithKind kind, u64 n) {
    Factorization f = factorize(n);
    switch (kind) {
        case ArithKind::tau: return tau(f);
        case ArithKind::sigma_half_inv: return sigma_half_inv(f);
        case ArithKind::phi: return static_cast<i64>(euler_phi(f));
        case ArithKind::phi_star: return phi_star(f);
        case ArithKind::mobius: return static_cast<i64>(mobius(f));
        case ArithKind::big_omega: return static_cast<i64>(big_omega(f));
        case ArithKind::little_omega: return static_cast<i64>(little_omega(f));
        case ArithKind::L: return log_plus_one(static_cast<double>(n));
    }
    throw std::logic_error("arith_function: unknown kind");
}

// ---------------------------------------------------------------------------
// characters and unit symbols
// ---------------------------------------------------------------------------

/// Jacobi symbol (n/m) for odd m >= 1.
inline int jacobi(i64 n, i64 m) {
    require(m >= 1 && (m & 1) == 1, "jacobi: modulus must be odd and positive");
    u64 a = residue(n, static_cast<u64>(m));
    u64 b = static_cast<u64>(m);
    int sign = 1;
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            u64 r = b & 7;
            if (r == 3 || r == 5) sign = -sign;
        }
        std::swap(a, b);
        if ((a & 3) == 3 && (b & 3) == 3) sign = -sign;
        a %= b;
    }
    return b == 1 ? sign : 0;
}

/// delta_n: 0 for even n, 1 for odd n.
inline int delta(i64 n) { return (n & 1) == 0 ? 0 : 1; }

/// epsilon_n as a power of i: 0 when n = 1 mod 4, 1 when n = 3 mod 4.
inline int epsilon_power(i64 n) {
    require((n & 1) == 1, "epsilon: n must be odd");
    return residue(n, 4) == 1 ? 0 : 1;
}

inline std::complex<double> epsilon(i64 n) {
    return epsilon_power(n) == 0 ? std::complex<double>(1.0, 0.0) : std::complex<double>(0.0, 1.0);
}

struct UnitSymbols {
    int delta;
    std::complex<double> epsilon;
};

inline UnitSymbols unit_symbols(i64 n) { return {delta(n), epsilon(n)}; }

// ---------------------------------------------------------------------------
// small helpers shared by the counting modules
// ---------------------------------------------------------------------------

/// Primes in [lo, hi] by a segmented-free plain sieve; hi is expected to be modest.
inline std::vector<u64> primes_in(u64 lo, u64 hi) {
    std::vector<u64> out;
    if (hi < 2 || lo > hi) return out;
    std::vector<bool> composite(hi + 1, false);
    for (u64 p = 2; p * p <= hi; ++p)
        if (!composite[p])
            for (u64 k = p * p; k <= hi; k += p) composite[k] = true;
    for (u64 n = std::max<u64>(lo, 2); n <= hi; ++n)
        if (!composite[n]) out.push_back(n);
    return out;
}

}  // namespace congruence_lab
