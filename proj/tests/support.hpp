#pragma once

#include "qmsurf/order.hpp"
#include "qmsurf/quaternion.hpp"

#include <random>

namespace qmsurf::testing {

inline std::mt19937_64& rng() {
    static std::mt19937_64 engine(20240611);
    return engine;
}

inline int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

inline double uniform_real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline Rational random_rational(int span = 9, int max_den = 4) {
    return Rational(uniform_int(-span, span), uniform_int(1, max_den));
}

inline Rational random_nonzero_rational(int span = 9, int max_den = 4) {
    for (;;)
        if (Rational q = random_rational(span, max_den); q != 0) return q;
}

inline QuaternionElement random_element(int span = 9, int max_den = 4) {
    return {random_rational(span, max_den), random_rational(span, max_den), random_rational(span, max_den),
            random_rational(span, max_den)};
}

/// Random element of an order with integer coordinates in [-span, span].
inline QuaternionElement random_order_element(const OrderBasis& order, int span = 6) {
    std::array<int, 4> c{uniform_int(-span, span), uniform_int(-span, span), uniform_int(-span, span),
                         uniform_int(-span, span)};
    return combine(order, c);
}

inline QuaternionAlgebra algebra_m1_3() { return compute_invariants(-1, 3); }

inline std::array<QuaternionElement, 4> maximal_basis_m1_3() {
    const Rational h(1, 2);
    return {QuaternionElement{1, 0, 0, 0}, QuaternionElement{0, 1, 0, 0}, QuaternionElement{0, 0, 1, 0},
            QuaternionElement{h, h, h, h}};
}

}  // namespace qmsurf::testing
