#pragma once

/// Reduced fractions over 64-bit integers with 128-bit intermediates.
///
/// Every constructor and operator leaves the value in lowest terms with a
/// positive denominator. Results that do not fit back into 64 bits throw
/// std::overflow_error instead of wrapping.

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace congruence_lab {

using i128 = __int128;

namespace detail {

inline i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i128 r = a % b;
        a = b;
        b = r;
    }
    return a;
}

inline std::int64_t narrow(i128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("rational: 64-bit overflow");
    return static_cast<std::int64_t>(v);
}

/// Floor division for a positive divisor.
inline i128 floor_div(i128 a, i128 b) {
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace detail

class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t n) : num_(n) {}  // NOLINT: implicit from integers is intended
    template <class N, class D>
        requires(std::is_integral_v<N> || std::is_same_v<N, i128>) && (std::is_integral_v<D> || std::is_same_v<D, i128>)
    Rational(N n, D d) {
        assign(static_cast<i128>(n), static_cast<i128>(d));
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    /// Greatest integer <= value.
    std::int64_t floor() const { return detail::narrow(detail::floor_div(num_, den_)); }

    /// The representative of value mod 1 in [0, 1).
    Rational frac() const { return Rational(static_cast<i128>(num_) - detail::floor_div(num_, den_) * den_, den_); }

    bool is_integer() const { return den_ == 1; }

    Rational operator-() const { return Rational(-static_cast<i128>(num_), static_cast<i128>(den_)); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        i128 g = std::gcd(a.den_, b.den_);
        i128 d = static_cast<i128>(a.den_ / g) * b.den_;
        i128 n = static_cast<i128>(a.num_) * (b.den_ / g) + static_cast<i128>(b.num_) * (a.den_ / g);
        return Rational(n, d);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        // cross-cancel first so the 128-bit product stays small
        i128 g1 = detail::gcd128(a.num_, b.den_);
        i128 g2 = detail::gcd128(b.num_, a.den_);
        if (g1 == 0) g1 = 1;
        if (g2 == 0) g2 = 1;
        i128 n = (static_cast<i128>(a.num_) / g1) * (static_cast<i128>(b.num_) / g2);
        i128 d = (static_cast<i128>(a.den_) / g2) * (static_cast<i128>(b.den_) / g1);
        return Rational(n, d);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("rational: division by zero");
        return a * Rational(static_cast<i128>(b.den_), static_cast<i128>(b.num_));
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        return static_cast<i128>(a.num_) * b.den_ <=> static_cast<i128>(b.num_) * a.den_;
    }

    std::string str() const {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }
    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    void assign(i128 n, i128 d) {
        if (d == 0) throw std::domain_error("rational: zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        i128 g = detail::gcd128(n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        num_ = detail::narrow(n);
        den_ = detail::narrow(d);
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace congruence_lab
