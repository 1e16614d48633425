#pragma once

#include "qmsurf/errors.hpp"
#include "qmsurf/matrix.hpp"
#include "qmsurf/order.hpp"
#include "qmsurf/symplectic.hpp"

#include <cmath>
#include <complex>
#include <string>
#include <type_traits>

namespace qmsurf {

using Complex = std::complex<double>;
using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<Complex>;

inline double frobenius_norm(const RealMatrix& m) {
    double s = 0;
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) s += m(r, c) * m(r, c);
    return std::sqrt(s);
}

inline double frobenius_norm(const ComplexMatrix& m) {
    double s = 0;
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) s += std::norm(m(r, c));
    return std::sqrt(s);
}

/// Eigenvalues (ascending) of a real symmetric 2x2 matrix.
inline std::array<double, 2> symmetric_eigenvalues(double a, double b, double d) {
    const double mean = 0.5 * (a + d);
    const double radius = std::hypot(0.5 * (a - d), b);
    return {mean - radius, mean + radius};
}

/// Largest singular value of a 2x2 complex matrix.
inline double largest_singular_value(const ComplexMatrix& m) {
    // eigenvalues of the Hermitian matrix m^* m
    const Complex p = std::conj(m(0, 0)) * m(0, 1) + std::conj(m(1, 0)) * m(1, 1);
    const double a = std::norm(m(0, 0)) + std::norm(m(1, 0));
    const double d = std::norm(m(0, 1)) + std::norm(m(1, 1));
    const double mean = 0.5 * (a + d);
    const double radius = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(p));
    return std::sqrt(mean + radius);
}

inline double largest_singular_value(Complex z) { return std::abs(z); }

/// Real matrices eta(i), eta(j) realizing B (x) R = M2(R).
struct SplittingMap {
    RealMatrix i_image;
    RealMatrix j_image;

    RealMatrix operator()(const QuaternionElement& x) const {
        RealMatrix ij = i_image * j_image;
        RealMatrix out(2, 2);
        const double c[4] = {static_cast<double>(x[0]), static_cast<double>(x[1]), static_cast<double>(x[2]),
                             static_cast<double>(x[3])};
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t s = 0; s < 2; ++s)
                out(r, s) = (r == s ? c[0] : 0.0) + c[1] * i_image(r, s) + c[2] * j_image(r, s) + c[3] * ij(r, s);
        return out;
    }
};

struct SplittingResiduals {
    double i_square;
    double j_square;
    double anticommutator;
};

inline SplittingResiduals splitting_residuals(const SplittingMap& eta, double a, double b) {
    RealMatrix id = RealMatrix::identity(2);
    RealMatrix ai = id, bi = id;
    ai(0, 0) = ai(1, 1) = a;
    bi(0, 0) = bi(1, 1) = b;
    return {frobenius_norm(eta.i_image * eta.i_image - ai), frobenius_norm(eta.j_image * eta.j_image - bi),
            frobenius_norm(eta.i_image * eta.j_image + eta.j_image * eta.i_image)};
}

/// Branch on the sign of a: the generator with positive square is diagonal.
inline SplittingMap build_splitting(const QuaternionAlgebra& alg) {
    const double a = static_cast<double>(alg.a);
    const double b = static_cast<double>(alg.b);
    require(a > 0 || b > 0, ErrorCode::DefiniteAlgebra, "B (x) R is Hamilton's quaternions");
    SplittingMap eta{RealMatrix(2, 2), RealMatrix(2, 2)};
    if (a > 0) {
        eta.i_image = RealMatrix{{std::sqrt(a), 0.0}, {0.0, -std::sqrt(a)}};
        eta.j_image = RealMatrix{{0.0, b}, {1.0, 0.0}};
    } else {
        eta.j_image = RealMatrix{{std::sqrt(b), 0.0}, {0.0, -std::sqrt(b)}};
        eta.i_image = RealMatrix{{0.0, a}, {1.0, 0.0}};
    }
    SplittingResiduals res = splitting_residuals(eta, a, b);
    const double scale = 1.0 + std::abs(a) + std::abs(b);
    require(res.i_square <= 1e-12 * (1 + std::abs(a)) && res.j_square <= 1e-12 * (1 + std::abs(b)) &&
                res.anticommutator <= 1e-12 * scale,
            ErrorCode::PreconditionViolation, "splitting relations fail numerically");
    return eta;
}

struct UpperHalfPoint {
    Complex tau;

    explicit UpperHalfPoint(Complex t) : tau(t) {
        require(t.imag() > 0 && std::isfinite(t.real()) && std::isfinite(t.imag()),
                ErrorCode::PreconditionViolation, "tau must lie in the upper half plane");
    }
};

/// A point of the Siegel upper half space together with the audit data of
/// how it was obtained.
struct SiegelPoint {
    ComplexMatrix omega;
    double tolerance = 1e-9;
    double symmetry_residual = 0;  // |Omega - Omega^T| / max(1, |Omega|)
    double min_imag_eigenvalue = 0;
    bool pair_swapped = false;
};

struct RiemannAudit {
    double symmetry_residual;
    double min_imag_eigenvalue;
    double max_imag_eigenvalue;
};

inline RiemannAudit riemann_audit(const ComplexMatrix& omega) {
    const double sym = frobenius_norm(omega - omega.transpose()) / std::max(1.0, frobenius_norm(omega));
    const double off = 0.5 * (omega(0, 1).imag() + omega(1, 0).imag());
    auto ev = symmetric_eigenvalues(omega(0, 0).imag(), off, omega(1, 1).imag());
    return {sym, ev[0], ev[1]};
}

inline SiegelPoint make_siegel_point(ComplexMatrix omega, double tolerance = 1e-9) {
    require(omega.rows() == 2 && omega.cols() == 2, ErrorCode::PreconditionViolation, "Omega must be 2x2");
    RiemannAudit audit = riemann_audit(omega);
    require(audit.symmetry_residual <= tolerance, ErrorCode::NotSiegel, "Omega is not symmetric");
    require(audit.min_imag_eigenvalue > 0, ErrorCode::NotSiegel, "Im Omega is not positive definite");
    return {std::move(omega), tolerance, audit.symmetry_residual, audit.min_imag_eigenvalue, false};
}

/// Lattice vectors eta(conj(f_k)) * (tau, 1)^T for the symplectic basis f_k.
/// The conjugate identification makes the left-invariant form E a Riemann form
/// for the complex structure of C^2; the lattice itself is eta(O) * (tau, 1)^T.
inline ComplexMatrix period_vectors(Complex tau, const std::array<QuaternionElement, 4>& elems,
                                    const SplittingMap& eta) {
    ComplexMatrix pi(2, 4);
    for (std::size_t k = 0; k < 4; ++k) {
        RealMatrix x = eta(conjugate(elems[k]));
        pi(0, k) = x(0, 0) * tau + x(0, 1);
        pi(1, k) = x(1, 0) * tau + x(1, 1);
    }
    return pi;
}

inline SiegelPoint period_matrix(const UpperHalfPoint& point, const OrderBasis& order, const SymplecticBasis& basis,
                                 const SplittingMap& eta, double tolerance = 1e-9) {
    const ComplexMatrix pi = period_vectors(point.tau, symplectic_elements(order, basis), eta);
    ComplexMatrix first(2, 2), second(2, 2);
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c) {
            first(r, c) = pi(r, c);
            second(r, c) = pi(r, c + 2);
        }
    const double scale = std::max(frobenius_norm(first), frobenius_norm(second));
    auto normalized = [&](const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
        require(std::abs(determinant(lhs)) >= 1e-12 * scale * scale, ErrorCode::DegeneratePeriods,
                "period block is singular");
        return *inverse(lhs) * rhs;
    };

    SiegelPoint out;
    out.tolerance = tolerance;
    out.omega = normalized(second, first);
    RiemannAudit audit = riemann_audit(out.omega);
    if (audit.max_imag_eigenvalue < 0) {
        out.omega = normalized(first, second);
        out.pair_swapped = true;
        audit = riemann_audit(out.omega);
    }
    require(audit.symmetry_residual <= tolerance, ErrorCode::RiemannRelationViolation,
            "Omega is not symmetric (residual " + std::to_string(audit.symmetry_residual) + ")");
    require(audit.min_imag_eigenvalue > 0, ErrorCode::RiemannRelationViolation,
            "Im Omega is not definite (eigenvalue " + std::to_string(audit.min_imag_eigenvalue) + ")");
    out.symmetry_residual = audit.symmetry_residual;
    out.min_imag_eigenvalue = audit.min_imag_eigenvalue;
    return out;
}

/// Period ratio of Gamma_tau = Z + Z tau in the basis (tau, 1).
inline Complex elliptic_period_ratio(const UpperHalfPoint& point) { return point.tau / Complex(1.0, 0.0); }

/// Largest singular value of the central difference (f(tau+h) - f(tau-h)) / 2h.
/// h is rounded down to a power of two so that tau +- h is exact whenever Re tau
/// stays inside one binade.
template <class PeriodFn>
double period_derivative_norm(PeriodFn&& period, Complex tau, double h) {
    require(h >= 1e-8, ErrorCode::StepTooSmall, "finite-difference step below 1e-8");
    require(h <= 1e-4, ErrorCode::StepTooLarge, "finite-difference step above 1e-4");
    const double step = std::ldexp(1.0, static_cast<int>(std::floor(std::log2(h))));
    auto plus = period(UpperHalfPoint(tau + step));
    auto minus = period(UpperHalfPoint(tau - step));
    if constexpr (std::is_same_v<decltype(plus), Complex>) {
        return largest_singular_value((plus - minus) / (2 * step));
    } else {
        ComplexMatrix diff = plus.omega - minus.omega;
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t c = 0; c < 2; ++c) diff(r, c) /= 2 * step;
        return largest_singular_value(diff);
    }
}

inline constexpr double kKodairaSpencerThreshold = 1e-6;

inline double kodaira_spencer_rank(Complex tau, const OrderBasis& order, const SymplecticBasis& basis,
                                   const SplittingMap& eta, double h = 1e-5) {
    return period_derivative_norm(
        [&](const UpperHalfPoint& p) { return period_matrix(p, order, basis, eta); }, tau, h);
}

inline double elliptic_kodaira_spencer_rank(Complex tau, double h = 1e-5) {
    return period_derivative_norm([](const UpperHalfPoint& p) { return elliptic_period_ratio(p); }, tau, h);
}

struct HodgeComparison {
    RealMatrix lattice_structure;   // J_tau on M2(R), entries flattened row-major
    RealMatrix elliptic_structure;  // J_ell (+) J_ell in the same coordinates
    double residual = 0;
    double square_residual = 0;  // |J_tau^2 + I|
};

namespace detail {
inline RealMatrix multiplication_by_i(std::size_t copies) {
    RealMatrix m(2 * copies, 2 * copies);
    for (std::size_t k = 0; k < copies; ++k) {
        m(2 * k, 2 * k + 1) = -1.0;
        m(2 * k + 1, 2 * k) = 1.0;
    }
    return m;
}
}  // namespace detail

/// Compares the complex structure of Lambda_tau (x) R with that of two copies of
/// Gamma_tau (x) R, both identified with M2(R): row r of X in M2(R) is the
/// coordinate vector, along (tau, 1), of the r-th copy.
inline HodgeComparison complex_structure_comparison(const UpperHalfPoint& point, const OrderBasis& order,
                                                    const SymplecticBasis& basis, const SplittingMap& eta) {
    const Complex tau = point.tau;
    const auto elems = symplectic_elements(order, basis);
    const ComplexMatrix pi = period_vectors(tau, elems, eta);

    RealMatrix to_c2(4, 4), to_m2(4, 4);
    for (std::size_t k = 0; k < 4; ++k) {
        to_c2(0, k) = pi(0, k).real();
        to_c2(1, k) = pi(0, k).imag();
        to_c2(2, k) = pi(1, k).real();
        to_c2(3, k) = pi(1, k).imag();
        RealMatrix x = eta(conjugate(elems[k]));
        to_m2(0, k) = x(0, 0);
        to_m2(1, k) = x(0, 1);
        to_m2(2, k) = x(1, 0);
        to_m2(3, k) = x(1, 1);
    }
    const RealMatrix lattice_j = *inverse(to_c2) * detail::multiplication_by_i(2) * to_c2;

    HodgeComparison out;
    out.lattice_structure = to_m2 * lattice_j * *inverse(to_m2);

    RealMatrix elliptic_basis{{tau.real(), 1.0}, {tau.imag(), 0.0}};
    const RealMatrix j_ell = *inverse(elliptic_basis) * detail::multiplication_by_i(1) * elliptic_basis;
    out.elliptic_structure = RealMatrix(4, 4);
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c) {
            out.elliptic_structure(r, c) = j_ell(r, c);
            out.elliptic_structure(r + 2, c + 2) = j_ell(r, c);
        }
    out.residual = frobenius_norm(out.lattice_structure - out.elliptic_structure);
    out.square_residual =
        frobenius_norm(out.lattice_structure * out.lattice_structure + RealMatrix::identity(4));
    return out;
}

inline constexpr double kHodgeComparisonTolerance = 1e-9;

}  // namespace qmsurf
