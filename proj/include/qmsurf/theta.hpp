#pragma once

#include "qmsurf/errors.hpp"
#include "qmsurf/period.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace qmsurf {

using ComplexVector2 = std::array<Complex, 2>;

/// Half-integral characteristic [a; b] with a = alpha/2, b = beta/2, alpha, beta in {0,1}^2.
struct ThetaCharacteristic {
    std::array<int, 2> alpha{0, 0};
    std::array<int, 2> beta{0, 0};

    double a(std::size_t k) const { return 0.5 * alpha[k]; }
    double b(std::size_t k) const { return 0.5 * beta[k]; }
    /// 4 a^T b mod 2
    int parity() const { return (alpha[0] * beta[0] + alpha[1] * beta[1]) % 2; }
    bool is_even() const { return parity() == 0; }

    bool operator==(const ThetaCharacteristic&) const = default;

    std::string label() const {
        return "[" + std::to_string(alpha[0]) + std::to_string(alpha[1]) + ";" + std::to_string(beta[0]) +
               std::to_string(beta[1]) + "]";
    }
};

inline std::vector<ThetaCharacteristic> all_characteristics() {
    std::vector<ThetaCharacteristic> out;
    for (int m = 0; m < 16; ++m)
        out.push_back({{(m >> 3) & 1, (m >> 2) & 1}, {(m >> 1) & 1, m & 1}});
    return out;
}

inline std::vector<ThetaCharacteristic> even_characteristics() {
    std::vector<ThetaCharacteristic> out;
    for (const auto& c : all_characteristics())
        if (c.is_even()) out.push_back(c);
    return out;
}

namespace detail {

struct ImaginaryData {
    double y00, y01, y11;  // symmetric part of Im Omega
    double lambda_min;
};

inline ImaginaryData imaginary_part(const ComplexMatrix& omega) {
    require(omega.rows() == 2 && omega.cols() == 2, ErrorCode::PreconditionViolation, "Omega must be 2x2");
    ImaginaryData d{omega(0, 0).imag(), 0.5 * (omega(0, 1).imag() + omega(1, 0).imag()), omega(1, 1).imag(), 0};
    d.lambda_min = symmetric_eigenvalues(d.y00, d.y01, d.y11)[0];
    require(d.lambda_min > 0, ErrorCode::NotSiegel, "Im Omega is not positive definite");
    return d;
}

/// Y^{-1} Im z
inline std::array<double, 2> centre(const ImaginaryData& y, const ComplexVector2& z) {
    const double det = y.y00 * y.y11 - y.y01 * y.y01;
    return {(y.y11 * z[0].imag() - y.y01 * z[1].imag()) / det, (-y.y01 * z[0].imag() + y.y00 * z[1].imag()) / det};
}

/// Calls f(v, term) for every lattice point of the truncated sum, with v = n + a.
template <class F>
void for_each_term(const ComplexVector2& z, const ThetaCharacteristic& ch, const ComplexMatrix& omega, double eps,
                   F&& f);

}  // namespace detail

/// R = ceil(sqrt(log(1/eps) / (pi lambda_min(Im Omega))) + |Y^{-1} Im z| + 2).
inline int truncation_radius(const ComplexMatrix& omega, const ComplexVector2& z, double eps) {
    require(eps > 0 && eps < 1, ErrorCode::PreconditionViolation, "eps must lie in (0, 1)");
    const auto y = detail::imaginary_part(omega);
    const auto c = detail::centre(y, z);
    const double r = std::sqrt(std::log(1.0 / eps) / (std::numbers::pi * y.lambda_min)) + std::hypot(c[0], c[1]) + 2.0;
    return static_cast<int>(std::ceil(r));
}

template <class F>
void detail::for_each_term(const ComplexVector2& z, const ThetaCharacteristic& ch, const ComplexMatrix& omega,
                           double eps, F&& f) {
    const int radius = truncation_radius(omega, z, eps);
    const Complex two_pi_i(0.0, 2.0 * std::numbers::pi);
    const Complex pi_i(0.0, std::numbers::pi);
    const Complex w0 = z[0] + ch.b(0);
    const Complex w1 = z[1] + ch.b(1);
    const Complex o01 = omega(0, 1) + omega(1, 0);
    for (int n0 = -radius; n0 <= radius; ++n0)
        for (int n1 = -radius; n1 <= radius; ++n1) {
            if (n0 * n0 + n1 * n1 > radius * radius) continue;
            const double v0 = n0 + ch.a(0);
            const double v1 = n1 + ch.a(1);
            const Complex quad = v0 * v0 * omega(0, 0) + v0 * v1 * o01 + v1 * v1 * omega(1, 1);
            f(v0, v1, std::exp(pi_i * quad + two_pi_i * (v0 * w0 + v1 * w1)));
        }
}

/// theta[a; b](z, Omega) = sum_n exp(pi i (n+a)^T Omega (n+a) + 2 pi i (n+a)^T (z+b)).
inline Complex theta(const ComplexVector2& z, const ThetaCharacteristic& ch, const ComplexMatrix& omega,
                     double eps = 1e-14) {
    Complex sum = 0;
    detail::for_each_term(z, ch, omega, eps, [&](double, double, const Complex& t) { sum += t; });
    return sum;
}

inline Complex theta(const ComplexVector2& z, const ThetaCharacteristic& ch, const SiegelPoint& point,
                     double eps = 1e-14) {
    return theta(z, ch, point.omega, eps);
}

/// Term-wise derivative in z.
inline ComplexVector2 theta_gradient(const ComplexVector2& z, const ThetaCharacteristic& ch,
                                     const ComplexMatrix& omega, double eps = 1e-14) {
    const Complex two_pi_i(0.0, 2.0 * std::numbers::pi);
    ComplexVector2 grad{0.0, 0.0};
    detail::for_each_term(z, ch, omega, eps, [&](double v0, double v1, const Complex& t) {
        grad[0] += v0 * t;
        grad[1] += v1 * t;
    });
    grad[0] *= two_pi_i;
    grad[1] *= two_pi_i;
    return grad;
}

enum class FiberLabel { SmoothGenusTwo, TwoEllipticCurves };

inline std::string_view label_name(FiberLabel label) {
    return label == FiberLabel::SmoothGenusTwo ? "SmoothGenusTwo" : "TwoEllipticCurves";
}

struct FiberClass {
    FiberLabel label = FiberLabel::SmoothGenusTwo;
    std::optional<ThetaCharacteristic> witness;
    double min_even_null = 0;  // min |theta[m](0)| / max |theta[m](0)| over even m
    double max_even_null = 0;  // absolute
    std::vector<double> even_nulls;
};

inline constexpr double kDefaultNullThreshold = 1e-8;

/// A principally polarized abelian surface is a product of elliptic curves
/// exactly when one of its ten even theta nulls vanishes.
inline FiberClass classify_fiber(const ComplexMatrix& omega, double threshold = kDefaultNullThreshold,
                                 double eps = 1e-14) {
    FiberClass out;
    const ComplexVector2 origin{0.0, 0.0};
    const auto evens = even_characteristics();
    for (const auto& ch : evens) out.even_nulls.push_back(std::abs(theta(origin, ch, omega, eps)));
    std::size_t argmin = 0;
    for (std::size_t k = 0; k < evens.size(); ++k) {
        out.max_even_null = std::max(out.max_even_null, out.even_nulls[k]);
        if (out.even_nulls[k] < out.even_nulls[argmin]) argmin = k;
    }
    out.min_even_null = out.even_nulls[argmin] / out.max_even_null;
    if (out.min_even_null < threshold) {
        out.label = FiberLabel::TwoEllipticCurves;
        out.witness = evens[argmin];
    }
    return out;
}

inline FiberClass classify_fiber(const SiegelPoint& point, double threshold = kDefaultNullThreshold,
                                 double eps = 1e-14) {
    return classify_fiber(point.omega, threshold, eps);
}

struct TwoTorsionPoint {
    std::array<int, 2> m;  // z = (Omega m + n) / 2
    std::array<int, 2> n;
    ComplexVector2 z;
    double value;          // normalized |theta(z)|
    double gradient_norm;  // normalized |grad theta(z)|
};

/// Two-torsion points where theta and its gradient vanish. Magnitudes are
/// normalized by exp(-pi Im z^T Y^{-1} Im z), which makes them comparable
/// across the sixteen points.
inline std::vector<TwoTorsionPoint> singular_points(const ComplexMatrix& omega, double eps = kDefaultNullThreshold,
                                                    double theta_eps = 1e-14) {
    const auto y = detail::imaginary_part(omega);
    const ThetaCharacteristic zero{};
    std::vector<TwoTorsionPoint> points;
    double scale = 0;
    for (int bits = 0; bits < 16; ++bits) {
        TwoTorsionPoint p{{(bits >> 3) & 1, (bits >> 2) & 1}, {(bits >> 1) & 1, bits & 1}, {}, 0, 0};
        for (std::size_t r = 0; r < 2; ++r)
            p.z[r] = 0.5 * (omega(r, 0) * double(p.m[0]) + omega(r, 1) * double(p.m[1]) + double(p.n[r]));
        const auto c = detail::centre(y, p.z);
        const double weight =
            std::exp(-std::numbers::pi * (c[0] * p.z[0].imag() + c[1] * p.z[1].imag()));
        p.value = std::abs(theta(p.z, zero, omega, theta_eps)) * weight;
        const auto g = theta_gradient(p.z, zero, omega, theta_eps);
        p.gradient_norm = std::hypot(std::abs(g[0]), std::abs(g[1])) * weight;
        scale = std::max(scale, p.value);
        points.push_back(p);
    }
    std::vector<TwoTorsionPoint> singular;
    for (const auto& p : points)
        if (p.value < eps * scale && p.gradient_norm < eps * scale) singular.push_back(p);
    return singular;
}

inline std::vector<TwoTorsionPoint> singular_points(const SiegelPoint& point, double eps = kDefaultNullThreshold) {
    return singular_points(point.omega, eps);
}

}  // namespace qmsurf
