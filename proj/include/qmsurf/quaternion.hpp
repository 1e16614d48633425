#pragma once

#include "qmsurf/errors.hpp"
#include "qmsurf/rational.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <vector>

namespace qmsurf {

/// The algebra (a, b | Q) with basis 1, i, j, ij and its local invariants.
struct QuaternionAlgebra {
    Rational a;
    Rational b;
    std::vector<Integer> ramified_primes;  // finite places only, ascending
    Integer discriminant = 1;
    bool indefinite = true;

    bool is_division() const { return discriminant != 1 || !indefinite; }
};

/// Exact element x0 + x1 i + x2 j + x3 ij.
struct QuaternionElement {
    std::array<Rational, 4> c{};

    QuaternionElement() = default;
    QuaternionElement(Rational x0, Rational x1, Rational x2, Rational x3)
        : c{std::move(x0), std::move(x1), std::move(x2), std::move(x3)} {}
    static QuaternionElement scalar(const Rational& x) { return {x, 0, 0, 0}; }

    const Rational& operator[](std::size_t k) const { return c[k]; }
    Rational& operator[](std::size_t k) { return c[k]; }

    bool operator==(const QuaternionElement&) const = default;

    bool is_zero() const {
        return std::all_of(c.begin(), c.end(), [](const Rational& x) { return x == 0; });
    }
    bool is_pure() const { return c[0] == 0; }

    QuaternionElement& operator+=(const QuaternionElement& y) {
        for (std::size_t k = 0; k < 4; ++k) c[k] += y.c[k];
        return *this;
    }
    QuaternionElement& operator-=(const QuaternionElement& y) {
        for (std::size_t k = 0; k < 4; ++k) c[k] -= y.c[k];
        return *this;
    }
    QuaternionElement& operator*=(const Rational& s) {
        for (auto& x : c) x *= s;
        return *this;
    }
    friend QuaternionElement operator+(QuaternionElement x, const QuaternionElement& y) { return x += y; }
    friend QuaternionElement operator-(QuaternionElement x, const QuaternionElement& y) { return x -= y; }
    friend QuaternionElement operator*(const Rational& s, QuaternionElement x) { return x *= s; }
    QuaternionElement operator-() const { return {-c[0], -c[1], -c[2], -c[3]}; }
};

inline QuaternionElement multiply(const QuaternionElement& x, const QuaternionElement& y,
                                  const QuaternionAlgebra& alg) {
    const Rational& a = alg.a;
    const Rational& b = alg.b;
    const Rational ab = a * b;
    // k = ij: k^2 = -ab, ik = aj, ki = -aj, jk = -bi, kj = bi.
    return {x[0] * y[0] + a * x[1] * y[1] + b * x[2] * y[2] - ab * x[3] * y[3],
            x[0] * y[1] + x[1] * y[0] - b * x[2] * y[3] + b * x[3] * y[2],
            x[0] * y[2] + x[2] * y[0] + a * x[1] * y[3] - a * x[3] * y[1],
            x[0] * y[3] + x[3] * y[0] + x[1] * y[2] - x[2] * y[1]};
}

inline QuaternionElement conjugate(const QuaternionElement& x) { return {x[0], -x[1], -x[2], -x[3]}; }

inline Rational reduced_trace(const QuaternionElement& x) { return 2 * x[0]; }

inline Rational reduced_norm(const QuaternionElement& x, const QuaternionAlgebra& alg) {
    return x[0] * x[0] - alg.a * x[1] * x[1] - alg.b * x[2] * x[2] + alg.a * alg.b * x[3] * x[3];
}

/// Human-readable form, e.g. "2+j", "3i-ij", "1/2+(1/2)i".
inline std::string to_string(const QuaternionElement& x) {
    static const char* labels[4] = {"", "i", "j", "ij"};
    std::string out;
    for (std::size_t k = 0; k < 4; ++k) {
        const Rational& v = x[k];
        if (v == 0) continue;
        const bool negative = v < 0;
        const Rational m = negative ? Rational(-v) : v;
        if (!out.empty() || negative) out += negative ? "-" : "+";
        if (k == 0) {
            out += to_string(m);
        } else if (m != 1) {
            out += is_integer(m) ? to_string(m) : "(" + to_string(m) + ")";
        }
        out += labels[k];
    }
    if (out.empty()) return "0";
    if (out.front() == '+') out.erase(out.begin());
    return out;
}

/// A place of Q: a finite prime, or the real place.
struct Place {
    Integer prime;  // 0 encodes the real place
    static Place real() { return Place{0}; }
    static Place at(Integer p) { return Place{std::move(p)}; }
    bool is_real() const { return prime == 0; }
};

namespace detail {

/// Integer in the same square class as q (q * den^2 = num * den).
inline Integer square_class_integer(const Rational& q) { return num(q) * den(q); }

inline int legendre(const Integer& u, const Integer& p) {
    Integer r = mod_floor(u, p);
    if (r == 0) return 0;
    Integer e = boost::multiprecision::powm(r, (p - 1) / 2, p);
    return e == 1 ? 1 : -1;
}

inline int parity_bit(const Integer& x) { return static_cast<int>(mod_floor(x, 2)); }

}  // namespace detail

/// Local Hilbert symbol (a, b)_v for nonzero rationals a, b.
inline int hilbert_symbol(const Rational& a, const Rational& b, const Place& place) {
    require(a != 0 && b != 0, ErrorCode::PreconditionViolation, "hilbert_symbol needs nonzero a, b");
    if (place.is_real()) return (a < 0 && b < 0) ? -1 : 1;
    const Integer& p = place.prime;
    require(is_prime(p), ErrorCode::PreconditionViolation, "place " + p.str() + " is not prime");

    Integer x = detail::square_class_integer(a);
    Integer y = detail::square_class_integer(b);
    const int alpha = valuation(x, p);
    const int beta = valuation(y, p);
    Integer u = x, v = y;
    for (int k = 0; k < alpha; ++k) u /= p;
    for (int k = 0; k < beta; ++k) v /= p;

    if (p == 2) {
        auto eps = [](const Integer& w) { return detail::parity_bit((w - 1) / 2); };
        auto omega = [](const Integer& w) { return detail::parity_bit((w * w - 1) / 8); };
        int e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
        return (e % 2 == 0) ? 1 : -1;
    }
    int sign = 1;
    if ((alpha * beta) % 2 != 0 && detail::parity_bit((p - 1) / 2) == 1) sign = -sign;
    if (beta % 2 != 0) sign *= detail::legendre(u, p);
    if (alpha % 2 != 0) sign *= detail::legendre(v, p);
    return sign;
}

/// Primes where (a, b)_p can be -1: 2 and the primes dividing numerators and
/// denominators of a and b.
inline std::vector<Integer> candidate_primes(const Rational& a, const Rational& b) {
    std::vector<Integer> out{2};
    for (const Integer& n : {num(a), den(a), num(b), den(b)})
        for (const Integer& p : prime_divisors(n)) out.push_back(p);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Local invariants without any hypothesis gate.
inline QuaternionAlgebra local_invariants(const Rational& a, const Rational& b) {
    require(a != 0 && b != 0, ErrorCode::PreconditionViolation, "a and b must be nonzero");
    QuaternionAlgebra alg{a, b, {}, 1, hilbert_symbol(a, b, Place::real()) == 1};
    for (const Integer& p : candidate_primes(a, b)) {
        if (hilbert_symbol(a, b, Place::at(p)) == -1) {
            alg.ramified_primes.push_back(p);
            alg.discriminant *= p;
        }
    }
    return alg;
}

/// Local invariants of (a, b | Q), rejecting algebras that are not indefinite
/// division algebras.
inline QuaternionAlgebra compute_invariants(const Rational& a, const Rational& b) {
    QuaternionAlgebra alg = local_invariants(a, b);
    require(alg.indefinite, ErrorCode::DefiniteAlgebra,
            "(" + to_string(a) + ", " + to_string(b) + ") is ramified at the real place");
    require(alg.discriminant != 1, ErrorCode::SplitAlgebra,
            "(" + to_string(a) + ", " + to_string(b) + ") is isomorphic to M2(Q)");
    return alg;
}

}  // namespace qmsurf
