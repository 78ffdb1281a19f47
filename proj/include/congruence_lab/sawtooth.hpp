#pragma once

/// The saw-tooth function psi(x) = {x} - 1/2 and Vaaler's trigonometric
/// approximation of it.
///
/// Coefficients:
///
///   a_h = -phi(h/(H+1)) / (2 pi i h),
///   phi(t) = pi t (1 - |t|) cot(pi t) + |t|,  0 < |t| < 1,
///
/// for which |psi(x) - sum_{1<=|h|<=H} a_h e(hx)| is bounded by the Fejer
/// majorant (1/(H+1)) sum_{|h|<=H} (1 - |h|/(H+1)) e(hx). The construction
/// actually meets half of that bound.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "congruence_lab/arith.hpp"

namespace congruence_lab {

/// Slack allowed on top of the Fejer majorant when checking the approximation.
inline constexpr double kVaalerSlack = 1e-9;

inline double psi(double x) {
    double f = x - std::floor(x);
    if (f >= 1.0) f = 0.0;  // x just below an integer can round up
    return f - 0.5;
}

namespace detail {

inline double vaaler_weight(double t) {
    double pt = std::numbers::pi * t;
    return pt * (1.0 - t) / std::tan(pt) + t;
}

}  // namespace detail

/// Trigonometric polynomial sum_{1<=|h|<=H} a_h e(hx) with a_{-h} = conj(a_h).
class VaalerPolynomial {
public:
    explicit VaalerPolynomial(int H) : H_(H), positive_(static_cast<std::size_t>(H)) {
        require(H >= 1, "vaaler_coeffs: H must be at least 1");
        for (int h = 1; h <= H; ++h) {
            double weight = detail::vaaler_weight(static_cast<double>(h) / (H + 1));
            positive_[h - 1] = std::complex<double>(0.0, weight / (2.0 * std::numbers::pi * h));
        }
    }

    int H() const { return H_; }

    /// a_h for 1 <= |h| <= H.
    std::complex<double> coefficient(int h) const {
        require(h != 0 && std::abs(h) <= H_, "VaalerPolynomial: index out of range");
        return h > 0 ? positive_[h - 1] : std::conj(positive_[-h - 1]);
    }

    /// Real value of the polynomial at x.
    double evaluate(double x) const {
        double s = 0.0;
        for (int h = 1; h <= H_; ++h) {
            // a_h e(hx) + conj(a_h e(hx)) = 2 Re(a_h e(hx))
            double angle = 2.0 * std::numbers::pi * h * x;
            const auto& a = positive_[h - 1];
            s += 2.0 * (a.real() * std::cos(angle) - a.imag() * std::sin(angle));
        }
        return s;
    }

private:
    int H_;
    std::vector<std::complex<double>> positive_;
};

inline VaalerPolynomial vaaler_coeffs(int H) { return VaalerPolynomial(H); }

/// (1/(H+1)) sum_{|h|<=H} (1 - |h|/(H+1)) e(hx); the Fejer kernel over H+1.
inline double fejer_majorant(double x, int H) {
    require(H >= 1, "fejer_majorant: H must be at least 1");
    double n = H + 1.0;
    double denom = std::sin(std::numbers::pi * x);
    if (std::abs(denom) > 1e-6) {
        double r = std::sin(std::numbers::pi * n * x) / denom;
        return r * r / (n * n);
    }
    double s = 1.0;
    for (int h = 1; h <= H; ++h) s += 2.0 * (1.0 - h / n) * std::cos(2.0 * std::numbers::pi * h * x);
    return std::max(0.0, s / n);
}

struct VaalerCheck {
    bool holds = false;
    double error = 0;     // |psi(x) - P(x)|
    double majorant = 0;  // fejer_majorant(x, H)
};

inline VaalerCheck vaaler_residual(const VaalerPolynomial& poly, double x) {
    VaalerCheck c;
    c.error = std::abs(psi(x) - poly.evaluate(x));
    c.majorant = fejer_majorant(x, poly.H());
    c.holds = c.error <= c.majorant + kVaalerSlack;
    return c;
}

inline bool vaaler_check(const VaalerPolynomial& poly, double x) { return vaaler_residual(poly, x).holds; }
inline bool vaaler_check(double x, int H) { return vaaler_check(VaalerPolynomial(H), x); }

}  // namespace congruence_lab
