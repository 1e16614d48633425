#pragma once

#include "qmsurf/errors.hpp"
#include "qmsurf/matrix.hpp"
#include "qmsurf/quaternion.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qmsurf {

using Coordinates = std::array<Rational, 4>;
using IntCoordinates = std::array<Integer, 4>;

/// A certified order: four elements spanning a rank-4 subring of B.
struct OrderBasis {
    std::array<QuaternionElement, 4> basis;
    Integer reduced_discriminant;
    bool maximal = false;
    RatMatrix to_standard;    // row k = coordinates of basis[k] in 1, i, j, ij
    RatMatrix from_standard;  // inverse of to_standard

    const QuaternionElement& operator[](std::size_t k) const { return basis[k]; }
};

inline RatMatrix standard_coordinates(std::span<const QuaternionElement> elems) {
    RatMatrix m(elems.size(), 4);
    for (std::size_t r = 0; r < elems.size(); ++r)
        for (std::size_t c = 0; c < 4; ++c) m(r, c) = elems[r][c];
    return m;
}

/// Coordinates of x in the order basis (always defined; may be fractional).
inline Coordinates order_coordinates(const QuaternionElement& x, const OrderBasis& order) {
    Coordinates out{};
    for (std::size_t k = 0; k < 4; ++k)
        for (std::size_t m = 0; m < 4; ++m) out[k] += x[m] * order.from_standard(m, k);
    return out;
}

inline std::optional<IntCoordinates> integral_coordinates(const QuaternionElement& x,
                                                          const OrderBasis& order) {
    Coordinates c = order_coordinates(x, order);
    IntCoordinates out;
    for (std::size_t k = 0; k < 4; ++k) {
        if (!is_integer(c[k])) return std::nullopt;
        out[k] = num(c[k]);
    }
    return out;
}

inline bool contains(const OrderBasis& order, const QuaternionElement& x) {
    return integral_coordinates(x, order).has_value();
}

template <class Coeff>
QuaternionElement combine(const OrderBasis& order, const std::array<Coeff, 4>& coeffs) {
    QuaternionElement x;
    for (std::size_t k = 0; k < 4; ++k) x += Rational(coeffs[k]) * order.basis[k];
    return x;
}

/// Gram matrix of the trace pairing trd(e_i * conj(e_j)).
inline RatMatrix trace_pairing(std::span<const QuaternionElement> basis, const QuaternionAlgebra& alg) {
    RatMatrix t(basis.size(), basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < basis.size(); ++j)
            t(i, j) = reduced_trace(multiply(basis[i], conjugate(basis[j]), alg));
    return t;
}

/// Certifies that `basis` spans an order and computes its reduced discriminant.
inline OrderBasis verify_order(std::span<const QuaternionElement> basis, const QuaternionAlgebra& alg) {
    require(basis.size() == 4, ErrorCode::RankDeficient, "an order basis needs exactly four elements");
    OrderBasis order;
    std::copy(basis.begin(), basis.end(), order.basis.begin());
    order.to_standard = standard_coordinates(basis);
    auto inv = inverse(order.to_standard);
    require(inv.has_value(), ErrorCode::RankDeficient, "basis elements are linearly dependent");
    order.from_standard = *inv;

    for (const auto& e : order.basis) {
        require(is_integer(reduced_trace(e)) && is_integer(reduced_norm(e, alg)), ErrorCode::NotIntegral,
                "basis element " + to_string(e) + " has non-integral trace or norm");
    }
    require(contains(order, QuaternionElement::scalar(1)), ErrorCode::NotClosed, "1 is not in the lattice");
    for (const auto& x : order.basis)
        for (const auto& y : order.basis) {
            QuaternionElement xy = multiply(x, y, alg);
            require(contains(order, xy), ErrorCode::NotClosed,
                    "product (" + to_string(x) + ")(" + to_string(y) + ") = " + to_string(xy) +
                        " leaves the lattice");
        }

    Rational det = determinant(trace_pairing(basis, alg));
    if (det < 0) det = -det;
    require(is_integer(det) && is_square(num(det)), ErrorCode::NotIntegral,
            "trace-pairing determinant " + to_string(det) + " is not a square integer");
    order.reduced_discriminant = isqrt(num(det));
    order.maximal = order.reduced_discriminant == alg.discriminant;
    return order;
}

inline OrderBasis verify_order(const std::array<QuaternionElement, 4>& basis, const QuaternionAlgebra& alg) {
    return verify_order(std::span<const QuaternionElement>(basis), alg);
}

inline std::array<QuaternionElement, 4> standard_basis() {
    return {QuaternionElement{1, 0, 0, 0}, QuaternionElement{0, 1, 0, 0}, QuaternionElement{0, 0, 1, 0},
            QuaternionElement{0, 0, 0, 1}};
}

/// Z-basis (Hermite normal form) of the lattice generated by `gens`; nullopt
/// if the generators do not span a rank-4 lattice.
inline std::optional<std::array<QuaternionElement, 4>> lattice_basis(std::span<const QuaternionElement> gens) {
    Integer common = 1;
    for (const auto& g : gens)
        for (const auto& x : g.c) common = lcm(common, den(x));
    IntMatrix m(gens.size(), 4);
    for (std::size_t r = 0; r < gens.size(); ++r)
        for (std::size_t c = 0; c < 4; ++c) m(r, c) = num(gens[r][c] * common);
    IntMatrix h = hermite_normal_form(std::move(m));
    if (h.rows() != 4) return std::nullopt;
    std::array<QuaternionElement, 4> out;
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) out[r][c] = Rational(h(r, c), common);
    return out;
}

namespace detail {

/// Smallest ring containing `gens`, provided every lattice met on the way has
/// an integral trace form; nullopt otherwise.
inline std::optional<std::array<QuaternionElement, 4>> ring_closure(std::vector<QuaternionElement> gens,
                                                                    const QuaternionAlgebra& alg) {
    auto current = lattice_basis(gens);
    if (!current) return std::nullopt;
    for (int iteration = 0; iteration < 64; ++iteration) {
        for (const auto& x : *current) {
            if (!is_integer(reduced_norm(x, alg))) return std::nullopt;
            for (const auto& y : *current)
                if (!is_integer(reduced_trace(multiply(x, y, alg)))) return std::nullopt;
        }
        std::vector<QuaternionElement> next(current->begin(), current->end());
        for (const auto& x : *current)
            for (const auto& y : *current) next.push_back(multiply(x, y, alg));
        auto grown = lattice_basis(next);
        if (!grown) return std::nullopt;
        if (*grown == *current) return current;
        current = grown;
    }
    return std::nullopt;
}

}  // namespace detail

struct SaturationResult {
    OrderBasis order;
    int rounds = 0;
};

/// Enlarges an order one prime at a time until its reduced discriminant equals D.
inline SaturationResult saturate_order(const OrderBasis& start, const QuaternionAlgebra& alg, int max_rounds = 64) {
    SaturationResult result{start, 0};
    while (result.order.reduced_discriminant != alg.discriminant) {
        const OrderBasis& order = result.order;
        require(result.rounds < max_rounds, ErrorCode::SaturationStuck,
                "round limit " + std::to_string(max_rounds) + " reached");
        require(order.reduced_discriminant % alg.discriminant == 0, ErrorCode::SaturationStuck,
                "reduced discriminant " + order.reduced_discriminant.str() + " is not a multiple of D = " +
                    alg.discriminant.str());
        const Integer excess = order.reduced_discriminant / alg.discriminant;

        std::optional<OrderBasis> enlarged;
        for (const Integer& p : prime_divisors(excess)) {
            const int pi = static_cast<int>(p);
            std::array<int, 4> c{0, 0, 0, 0};
            for (;;) {
                // next vector in {0..p-1}^4, lexicographic, skipping zero
                int k = 3;
                while (k >= 0 && c[k] == pi - 1) c[k--] = 0;
                if (k < 0) break;
                ++c[k];
                QuaternionElement x = Rational(1, p) * combine(order, c);
                if (!is_integer(reduced_trace(x)) || !is_integer(reduced_norm(x, alg))) continue;
                std::vector<QuaternionElement> gens(order.basis.begin(), order.basis.end());
                gens.push_back(x);
                auto closed = detail::ring_closure(std::move(gens), alg);
                if (!closed) continue;
                OrderBasis candidate = verify_order(*closed, alg);
                if (candidate.reduced_discriminant < order.reduced_discriminant) {
                    enlarged = std::move(candidate);
                    break;
                }
            }
            if (enlarged) break;
        }
        require(enlarged.has_value(), ErrorCode::SaturationStuck,
                "no enlarging element found for reduced discriminant " + order.reduced_discriminant.str());
        result.order = std::move(*enlarged);
        ++result.rounds;
    }
    return result;
}

/// Searches the order for a pure quaternion mu with mu^2 = -D. Boxes of growing
/// sup-norm radius in order coordinates; within the first nonempty shell the
/// lexicographically smallest coordinate vector wins.
inline QuaternionElement find_mu(const OrderBasis& order, const QuaternionAlgebra& alg, int radius = 10) {
    require(alg.indefinite, ErrorCode::PreconditionViolation, "find_mu needs an indefinite algebra");
    require(radius >= 1, ErrorCode::PreconditionViolation, "search radius must be at least 1");
    const Rational target = Rational(alg.discriminant);

    Integer common = 1;
    for (const auto& e : order.basis)
        for (const auto& x : e.c) common = lcm(common, den(x));
    std::array<IntCoordinates, 4> scaled;
    for (std::size_t k = 0; k < 4; ++k)
        for (std::size_t m = 0; m < 4; ++m) scaled[k][m] = num(order.basis[k][m] * common);

    for (int r = 1; r <= radius; ++r) {
        std::array<int, 4> c{-r, -r, -r, -r};
        for (;;) {
            const bool on_shell = std::any_of(c.begin(), c.end(), [r](int v) { return v == r || v == -r; });
            if (on_shell) {
                Integer scalar_part = 0;
                for (std::size_t k = 0; k < 4; ++k) scalar_part += c[k] * scaled[k][0];
                if (scalar_part == 0) {
                    QuaternionElement mu = combine(order, c);
                    if (reduced_norm(mu, alg) == target) return mu;
                }
            }
            int k = 3;
            while (k >= 0 && c[k] == r) c[k--] = -r;
            if (k < 0) break;
            ++c[k];
        }
    }
    throw Error(ErrorCode::SearchExhausted, "no pure mu with mu^2 = -" + alg.discriminant.str() +
                                                " within coordinate radius " + std::to_string(radius));
}

/// E(x, y) = trd(mu * conj(x) * y) / D, invariant under left multiplication by norm-1 units.
inline Rational polarization_form(const QuaternionElement& x, const QuaternionElement& y,
                                  const QuaternionElement& mu, const QuaternionAlgebra& alg) {
    return reduced_trace(multiply(multiply(mu, conjugate(x), alg), y, alg)) / Rational(alg.discriminant);
}

/// The companion expression -trd(mu * x * conj(y)) / D. It equals
/// polarization_form(conj(y), conj(x)), not polarization_form(x, y).
inline Rational polarization_form_conjugate_slot(const QuaternionElement& x, const QuaternionElement& y,
                                                 const QuaternionElement& mu, const QuaternionAlgebra& alg) {
    return -reduced_trace(multiply(multiply(mu, x, alg), conjugate(y), alg)) / Rational(alg.discriminant);
}

struct PolarizationData {
    QuaternionElement mu;
    IntMatrix gram;
    std::vector<Integer> elementary_divisors;
};

inline void require_valid_mu(const QuaternionElement& mu, const QuaternionAlgebra& alg) {
    require(reduced_trace(mu) == 0, ErrorCode::PreconditionViolation, "mu = " + to_string(mu) + " is not pure");
    require(multiply(mu, mu, alg) == QuaternionElement::scalar(-Rational(alg.discriminant)),
            ErrorCode::PreconditionViolation, "mu^2 != -D for mu = " + to_string(mu));
}

inline PolarizationData polarization_gram(const OrderBasis& order, const QuaternionElement& mu,
                                          const QuaternionAlgebra& alg) {
    require_valid_mu(mu, alg);
    RatMatrix g(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            const auto& x = order.basis[i];
            const auto& y = order.basis[j];
            g(i, j) = polarization_form(x, y, mu, alg);
            require(polarization_form_conjugate_slot(x, y, mu, alg) ==
                        polarization_form(conjugate(y), conjugate(x), mu, alg),
                    ErrorCode::PreconditionViolation, "trace identity failed");
        }
    require(g.transpose() == -g, ErrorCode::NotUnimodular, "form is not alternating");
    auto integral = to_integer(g);
    require(integral.has_value(), ErrorCode::NotUnimodular, "form takes non-integral values on the order");
    PolarizationData data{mu, *integral, elementary_divisors(*integral)};
    for (const auto& d : data.elementary_divisors)
        require(d == 1, ErrorCode::NotUnimodular, "elementary divisor " + d.str() + " != 1");
    return data;
}

/// Matrix of x -> u * x in order coordinates (column k holds u * e_k).
inline RatMatrix left_multiplication(const QuaternionElement& u, const OrderBasis& order,
                                     const QuaternionAlgebra& alg) {
    RatMatrix m(4, 4);
    for (std::size_t k = 0; k < 4; ++k) {
        Coordinates c = order_coordinates(multiply(u, order.basis[k], alg), order);
        for (std::size_t r = 0; r < 4; ++r) m(r, k) = c[r];
    }
    return m;
}

inline bool unit_invariance_check(const OrderBasis& order, const IntMatrix& gram,
                                  std::span<const QuaternionElement> units, const QuaternionAlgebra& alg) {
    const RatMatrix g = to_rational(gram);
    for (const auto& u : units) {
        require(reduced_norm(u, alg) == 1, ErrorCode::PreconditionViolation,
                to_string(u) + " does not have reduced norm 1");
        RatMatrix l = left_multiplication(u, order, alg);
        if (l.transpose() * g * l != g) return false;
    }
    return true;
}

}  // namespace qmsurf
