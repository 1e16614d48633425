#include "qmsurf/order.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

using namespace qmsurf;
using namespace qmsurf::testing;

namespace {

const QuaternionElement one{1, 0, 0, 0}, i_{0, 1, 0, 0}, j_{0, 0, 1, 0}, ij_{0, 0, 0, 1};

/// Oracle: determinant of trd(e_r e_s) by Leibniz expansion. This pairing
/// differs from the library's trd(e_r conj(e_s)) by the conjugation, which has
/// determinant -1 on an order, so the absolute values agree.
Rational leibniz_trace_determinant(const std::array<QuaternionElement, 4>& basis, const QuaternionAlgebra& alg) {
    std::array<int, 4> perm{0, 1, 2, 3};
    Rational det = 0;
    do {
        int inversions = 0;
        for (int x = 0; x < 4; ++x)
            for (int y = x + 1; y < 4; ++y) inversions += perm[x] > perm[y];
        Rational term = inversions % 2 ? -1 : 1;
        for (int r = 0; r < 4; ++r) term *= reduced_trace(multiply(basis[r], basis[perm[r]], alg));
        det += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det < 0 ? Rational(-det) : det;
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::PreconditionViolation;
}

}  // namespace

TEST(VerifyOrder, MaximalAndStandard) {
    const auto alg = algebra_m1_3();
    const auto max_basis = maximal_basis_m1_3();
    EXPECT_EQ(leibniz_trace_determinant(max_basis, alg), 36);
    EXPECT_EQ(leibniz_trace_determinant(standard_basis(), alg), 144);

    auto maximal = verify_order(max_basis, alg);
    EXPECT_EQ(maximal.reduced_discriminant, 6);
    EXPECT_TRUE(maximal.maximal);

    auto standard = verify_order(standard_basis(), alg);
    EXPECT_EQ(standard.reduced_discriminant, 12);
    EXPECT_FALSE(standard.maximal);
}

TEST(VerifyOrder, RebasisOfClosedLattice) {
    const auto alg = algebra_m1_3();
    std::array<QuaternionElement, 4> basis{one, one + i_, j_, ij_};
    auto order = verify_order(basis, alg);
    EXPECT_EQ(order.reduced_discriminant, 12);
}

TEST(VerifyOrder, Errors) {
    const auto alg = algebra_m1_3();
    EXPECT_EQ(code_of([&] { verify_order(std::array{one, i_, j_, i_ + j_}, alg); }), ErrorCode::RankDeficient);
    EXPECT_EQ(code_of([&] { verify_order(std::array{one, i_, j_, Rational(1, 2) * ij_}, alg); }),
              ErrorCode::NotIntegral);
    // i * ij = -j is not in Z + Zi + 2Zj + Zij
    EXPECT_EQ(code_of([&] { verify_order(std::array{one, i_, 2 * j_, ij_}, alg); }), ErrorCode::NotClosed);
    // 1 missing
    EXPECT_EQ(code_of([&] { verify_order(std::array{2 * one, i_, j_, ij_}, alg); }), ErrorCode::NotClosed);
}

TEST(SaturateOrder, FromStandardBasis) {
    const auto alg = algebra_m1_3();
    auto result = saturate_order(verify_order(standard_basis(), alg), alg);
    EXPECT_EQ(result.order.reduced_discriminant, 6);
    EXPECT_TRUE(result.order.maximal);
    EXPECT_EQ(verify_order(result.order.basis, alg).reduced_discriminant, 6);
    EXPECT_EQ(result.rounds, 1);
    for (const auto& e : standard_basis()) EXPECT_TRUE(contains(result.order, e));
}

TEST(SaturateOrder, MaximalIsFixedPoint) {
    const auto alg = algebra_m1_3();
    auto start = verify_order(maximal_basis_m1_3(), alg);
    auto result = saturate_order(start, alg);
    EXPECT_EQ(result.rounds, 0);
    EXPECT_EQ(result.order.basis, start.basis);
}

TEST(SaturateOrder, IndexFourSublattice) {
    const auto alg = algebra_m1_3();
    const auto max_basis = maximal_basis_m1_3();
    // Z[i] + 2 O
    std::array<QuaternionElement, 4> sub{one, i_, 2 * j_, 2 * max_basis[3]};
    auto order = verify_order(sub, alg);
    ASSERT_EQ(order.reduced_discriminant, 24);
    auto result = saturate_order(order, alg);
    EXPECT_EQ(result.order.reduced_discriminant, 6);
    EXPECT_LE(result.rounds, 2);
}

TEST(SaturateOrder, OtherAlgebras) {
    for (auto [a, b] : std::vector<std::pair<int, int>>{{-1, 7}, {-2, 5}, {3, -5}, {-1, 11}, {-3, 10}, {5, -2}}) {
        auto alg = local_invariants(a, b);
        if (!alg.indefinite || alg.discriminant == 1) continue;
        auto result = saturate_order(verify_order(standard_basis(), alg), alg);
        EXPECT_EQ(result.order.reduced_discriminant, alg.discriminant) << a << "," << b;
        EXPECT_TRUE(result.order.maximal);
    }
}

TEST(FindMu, MatchesExhaustiveOracle) {
    const auto alg = algebra_m1_3();
    auto order = verify_order(maximal_basis_m1_3(), alg);
    // Oracle: all order coordinates in [-4, 4]^4, sorted by (sup-norm, lexicographic).
    std::vector<std::pair<int, std::array<int, 4>>> solutions;
    for (int c0 = -4; c0 <= 4; ++c0)
        for (int c1 = -4; c1 <= 4; ++c1)
            for (int c2 = -4; c2 <= 4; ++c2)
                for (int c3 = -4; c3 <= 4; ++c3) {
                    std::array<int, 4> c{c0, c1, c2, c3};
                    auto x = combine(order, c);
                    if (x.is_pure() && multiply(x, x, alg) == QuaternionElement::scalar(-6)) {
                        int sup = 0;
                        for (int v : c) sup = std::max(sup, std::abs(v));
                        solutions.emplace_back(sup, c);
                    }
                }
    std::sort(solutions.begin(), solutions.end());
    ASSERT_FALSE(solutions.empty());
    const auto expected = combine(order, solutions.front().second);
    EXPECT_EQ(solutions.front().second, (std::array<int, 4>{-1, 2, -1, 2}));
    EXPECT_EQ(expected, (QuaternionElement{0, 3, 0, 1}));  // 3i + ij
    EXPECT_EQ(find_mu(order, alg), expected);

    // 3i + j is also a solution, at order sup-norm 3
    const QuaternionElement three_i_plus_j{0, 3, 1, 0};
    EXPECT_TRUE(std::any_of(solutions.begin(), solutions.end(),
                            [&](const auto& s) { return combine(order, s.second) == three_i_plus_j; }));
}

TEST(FindMu, PresentationWithMinusD) {
    // (-6, 5): D = 6 and mu = i works directly.
    auto alg = compute_invariants(-6, 5);
    ASSERT_EQ(alg.discriminant, 6);
    auto order = saturate_order(verify_order(standard_basis(), alg), alg).order;
    auto pol = polarization_gram(order, i_, alg);
    EXPECT_EQ(pol.elementary_divisors, (std::vector<Integer>{1, 1, 1, 1}));
}

TEST(FindMu, Errors) {
    const auto alg = algebra_m1_3();
    auto order = verify_order(maximal_basis_m1_3(), alg);
    EXPECT_EQ(code_of([&] { find_mu(order, alg, 1); }), ErrorCode::SearchExhausted);
    auto definite = local_invariants(-1, -1);
    auto hurwitz = verify_order(std::array{one, i_, j_, QuaternionElement{Rational(1, 2), Rational(1, 2),
                                                                          Rational(1, 2), Rational(1, 2)}},
                                definite);
    EXPECT_EQ(code_of([&] { find_mu(hurwitz, definite); }), ErrorCode::PreconditionViolation);
}

TEST(PolarizationGram, PrincipalOnMaximalOrder) {
    const auto alg = algebra_m1_3();
    auto order = verify_order(maximal_basis_m1_3(), alg);
    const QuaternionElement mu{0, 3, 1, 0};
    auto pol = polarization_gram(order, mu, alg);
    EXPECT_EQ(pol.elementary_divisors, (std::vector<Integer>{1, 1, 1, 1}));
    EXPECT_EQ(pol.gram.transpose(), -pol.gram);
    const IntMatrix& g = pol.gram;
    Integer pfaffian = g(0, 1) * g(2, 3) - g(0, 2) * g(1, 3) + g(0, 3) * g(1, 2);
    EXPECT_EQ(abs_int(pfaffian), 1);
    EXPECT_EQ(Rational(pfaffian * pfaffian), determinant(to_rational(g)));
    // E(1, mu) = tr(mu^2) / D = -2
    EXPECT_EQ(polarization_form(one, mu, mu, alg), -2);
}

TEST(PolarizationGram, AlternatingAndIntegralOnRandomElements) {
    const auto alg = algebra_m1_3();
    auto order = verify_order(maximal_basis_m1_3(), alg);
    const QuaternionElement mu{0, 3, 1, 0};
    for (int trial = 0; trial < 500; ++trial) {
        auto x = random_order_element(order), y = random_order_element(order);
        ASSERT_EQ(polarization_form(x, x, mu, alg), 0);
        ASSERT_TRUE(is_integer(polarization_form(x, y, mu, alg)));
        ASSERT_EQ(polarization_form(x, y, mu, alg), -polarization_form(y, x, mu, alg));
    }
}

TEST(PolarizationGram, TwoExpressionsAgreeUpToConjugation) {
    const auto alg = algebra_m1_3();
    const QuaternionElement mu{0, 3, 1, 0};
    for (int trial = 0; trial < 1000; ++trial) {
        auto x = random_element(), y = random_element();
        ASSERT_EQ(polarization_form_conjugate_slot(x, y, mu, alg),
                  polarization_form(conjugate(y), conjugate(x), mu, alg));
    }
    // Without the conjugation the two expressions differ: (ij, j) gives -3 and 3.
    EXPECT_EQ(polarization_form_conjugate_slot(ij_, j_, mu, alg), -3);
    EXPECT_EQ(polarization_form(ij_, j_, mu, alg), 3);
}

TEST(PolarizationGram, NonMaximalOrderIsNotPrincipal) {
    const auto alg = algebra_m1_3();
    auto order = verify_order(standard_basis(), alg);
    EXPECT_EQ(code_of([&] { polarization_gram(order, QuaternionElement{0, 3, 1, 0}, alg); }),
              ErrorCode::NotUnimodular);
}

TEST(PolarizationGram, RejectsBadMu) {
    const auto alg = algebra_m1_3();
    auto order = verify_order(maximal_basis_m1_3(), alg);
    EXPECT_EQ(code_of([&] { polarization_gram(order, QuaternionElement{1, 3, 1, 0}, alg); }),
              ErrorCode::PreconditionViolation);
    EXPECT_EQ(code_of([&] { polarization_gram(order, QuaternionElement{0, 1, 1, 0}, alg); }),
              ErrorCode::PreconditionViolation);
}

TEST(UnitInvariance, CentralAndNontrivialUnits) {
    const auto alg = algebra_m1_3();
    auto order = verify_order(maximal_basis_m1_3(), alg);
    const QuaternionElement mu{0, 3, 1, 0};
    auto pol = polarization_gram(order, mu, alg);
    std::vector<QuaternionElement> central{one, -one};
    EXPECT_TRUE(unit_invariance_check(order, pol.gram, central, alg));
    const QuaternionElement u{2, 0, 1, 0};
    ASSERT_EQ(reduced_norm(u, alg), 1);
    std::vector<QuaternionElement> units{u, conjugate(u), multiply(u, u, alg)};
    EXPECT_TRUE(unit_invariance_check(order, pol.gram, units, alg));
    std::vector<QuaternionElement> bad{QuaternionElement{2, 0, 0, 0}};
    EXPECT_EQ(code_of([&] { unit_invariance_check(order, pol.gram, bad, alg); }), ErrorCode::PreconditionViolation);
}

TEST(UnitInvariance, FormValuesOnRandomPairs) {
    const auto alg = algebra_m1_3();
    auto order = verify_order(maximal_basis_m1_3(), alg);
    const QuaternionElement mu{0, 3, 1, 0};
    const QuaternionElement u{2, 0, 1, 0};
    const QuaternionElement v{2, 1, 1, 1};  // nrd = 4 + 1 - 3 - 3 = -1, so use v * v-bar-free product
    std::vector<QuaternionElement> units{u, multiply(u, QuaternionElement{2, 0, -1, 0}, alg),
                                         multiply(multiply(u, u, alg), u, alg)};
    (void)v;
    for (int trial = 0; trial < 300; ++trial) {
        auto x = random_order_element(order), y = random_order_element(order);
        for (const auto& w : units)
            ASSERT_EQ(polarization_form(multiply(w, x, alg), multiply(w, y, alg), mu, alg),
                      polarization_form(x, y, mu, alg));
    }
}
