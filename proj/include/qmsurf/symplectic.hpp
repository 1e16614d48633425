#pragma once

#include "qmsurf/errors.hpp"
#include "qmsurf/matrix.hpp"
#include "qmsurf/order.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace qmsurf {

/// J = [[0, I2], [-I2, 0]].
inline IntMatrix standard_symplectic_form() {
    IntMatrix j(4, 4);
    j(0, 2) = 1;
    j(1, 3) = 1;
    j(2, 0) = -1;
    j(3, 1) = -1;
    return j;
}

struct SymplecticBasis {
    // Columns are the new basis (e1, e2, f1, f2) in order coordinates.
    IntMatrix change_of_basis;
    IntMatrix inverse;
    IntMatrix J = standard_symplectic_form();
};

/// Integer symplectic reduction of an alternating unimodular Gram matrix.
/// Pivot: smallest nonzero |G(v_r, v_c)| over the remaining vectors, row-major.
inline SymplecticBasis symplectic_basis(const IntMatrix& gram) {
    const std::size_t n = gram.rows();
    require(n == 4 && gram.cols() == 4, ErrorCode::PreconditionViolation, "Gram matrix must be 4x4");
    require(gram.transpose() == -gram, ErrorCode::NotUnimodular, "Gram matrix is not alternating");

    std::vector<std::vector<Integer>> v(n, std::vector<Integer>(n, 0));
    for (std::size_t k = 0; k < n; ++k) v[k][k] = 1;
    auto pair = [&](const std::vector<Integer>& x, const std::vector<Integer>& y) {
        Integer s = 0;
        for (std::size_t r = 0; r < n; ++r) {
            if (x[r] == 0) continue;
            for (std::size_t c = 0; c < n; ++c) s += x[r] * gram(r, c) * y[c];
        }
        return s;
    };
    auto axpy = [&](std::vector<Integer>& x, const Integer& f, const std::vector<Integer>& y) {
        for (std::size_t k = 0; k < n; ++k) x[k] += f * y[k];
    };

    std::vector<std::size_t> remaining(n);
    for (std::size_t k = 0; k < n; ++k) remaining[k] = k;
    std::vector<std::vector<Integer>> es, fs;

    while (!remaining.empty()) {
        std::size_t row = 0, col = 0;
        Integer d;
        for (;;) {
            std::optional<Integer> best;
            for (std::size_t r : remaining)
                for (std::size_t c : remaining) {
                    if (r == c) continue;
                    Integer g = pair(v[r], v[c]);
                    if (g != 0 && (!best || abs_int(g) < *best)) {
                        best = abs_int(g);
                        row = r;
                        col = c;
                    }
                }
            require(best.has_value(), ErrorCode::NotUnimodular, "form is degenerate");
            d = pair(v[row], v[col]);
            bool reduced = true;
            for (std::size_t k : remaining) {
                if (k == row || k == col) continue;
                Integer q = floor_div(pair(v[row], v[k]), d);
                if (q != 0) axpy(v[k], -q, v[col]);
                if (pair(v[row], v[k]) != 0) reduced = false;
            }
            if (reduced) break;
        }
        require(d == 1 || d == -1, ErrorCode::NotUnimodular,
                "pivot " + d.str() + " cannot be reduced to +-1");
        if (d == -1) std::swap(row, col);
        const auto e = v[row];
        const auto f = v[col];
        for (std::size_t k : remaining) {
            if (k == row || k == col) continue;
            Integer ge = pair(v[k], e);
            Integer gf = pair(v[k], f);
            axpy(v[k], -gf, e);
            axpy(v[k], ge, f);
        }
        es.push_back(e);
        fs.push_back(f);
        std::erase_if(remaining, [&](std::size_t k) { return k == row || k == col; });
    }

    SymplecticBasis basis;
    basis.change_of_basis = IntMatrix(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        basis.change_of_basis(r, 0) = es[0][r];
        basis.change_of_basis(r, 1) = es[1][r];
        basis.change_of_basis(r, 2) = fs[0][r];
        basis.change_of_basis(r, 3) = fs[1][r];
    }
    auto inv = inverse(to_rational(basis.change_of_basis));
    require(inv.has_value(), ErrorCode::NotUnimodular, "change of basis is singular");
    auto inv_int = to_integer(*inv);
    require(inv_int.has_value(), ErrorCode::NotUnimodular, "change of basis is not unimodular");
    basis.inverse = *inv_int;
    require(basis.change_of_basis.transpose() * gram * basis.change_of_basis == basis.J,
            ErrorCode::NotUnimodular, "transported Gram is not J");
    return basis;
}

/// The symplectic basis vectors as quaternions, in the order (e1, e2, f1, f2).
inline std::array<QuaternionElement, 4> symplectic_elements(const OrderBasis& order, const SymplecticBasis& basis) {
    std::array<QuaternionElement, 4> out;
    for (std::size_t k = 0; k < 4; ++k) {
        IntCoordinates c;
        for (std::size_t r = 0; r < 4; ++r) c[r] = basis.change_of_basis(r, k);
        out[k] = combine(order, c);
    }
    return out;
}

struct UnitMatrix {
    IntMatrix matrix;
    QuaternionElement unit;
};

inline bool is_symplectic(const IntMatrix& m, const IntMatrix& j = standard_symplectic_form()) {
    return m.transpose() * j * m == j;
}

/// Left multiplication by u on the order, written in the symplectic basis.
inline UnitMatrix embed_unit(const QuaternionElement& u, const OrderBasis& order, const SymplecticBasis& basis,
                             const QuaternionAlgebra& alg) {
    require(reduced_norm(u, alg) == 1, ErrorCode::NotAUnit, to_string(u) + " has reduced norm != 1");
    require(contains(order, u), ErrorCode::NotInOrder, to_string(u) + " is not in the order");
    auto left = to_integer(left_multiplication(u, order, alg));
    require(left.has_value(), ErrorCode::NotInOrder, "left multiplication is not integral");
    UnitMatrix out{basis.inverse * *left * basis.change_of_basis, u};
    require(is_symplectic(out.matrix, basis.J), ErrorCode::NotUnimodular,
            "embedded unit " + to_string(u) + " does not preserve J");
    return out;
}

/// Norm-one elements of the order whose coordinates in 1, i, j, ij are bounded
/// by height in absolute value, sorted by sup-norm then lexicographically.
inline std::vector<QuaternionElement> enumerate_units(const OrderBasis& order, const QuaternionAlgebra& alg,
                                                      int height) {
    require(height >= 1, ErrorCode::PreconditionViolation, "unit height must be at least 1");
    Integer common = 1;
    for (const auto& e : order.basis)
        for (std::size_t k = 0; k < 4; ++k) common = lcm(common, den(e[k]));
    const int d = static_cast<int>(common);
    const int bound = height * d;
    std::vector<std::pair<std::array<int, 4>, QuaternionElement>> found;
    std::array<int, 4> c{-bound, -bound, -bound, -bound};
    for (;;) {
        QuaternionElement u{Rational(c[0], d), Rational(c[1], d), Rational(c[2], d), Rational(c[3], d)};
        if (reduced_norm(u, alg) == 1 && contains(order, u)) found.emplace_back(c, std::move(u));
        int k = 3;
        while (k >= 0 && c[k] == bound) c[k--] = -bound;
        if (k < 0) break;
        ++c[k];
    }
    auto sup = [](const std::array<int, 4>& x) {
        int s = 0;
        for (int v : x) s = std::max(s, v < 0 ? -v : v);
        return s;
    };
    std::stable_sort(found.begin(), found.end(),
                     [&](const auto& x, const auto& y) { return sup(x.first) < sup(y.first); });
    std::vector<QuaternionElement> units;
    units.reserve(found.size());
    for (auto& f : found) units.push_back(std::move(f.second));
    return units;
}

/// Entrywise reduction into [0, n).
inline IntMatrix reduce_mod_n(const UnitMatrix& m, const Integer& n) {
    require(n >= 2, ErrorCode::PreconditionViolation, "modulus must be at least 2");
    return m.matrix.map<Integer>([&](const Integer& x) { return mod_floor(x, n); });
}

inline bool is_in_Gn(const QuaternionElement& u, const OrderBasis& order, const SymplecticBasis& basis,
                     const QuaternionAlgebra& alg, const Integer& n) {
    IntMatrix reduced = reduce_mod_n(embed_unit(u, order, basis, alg), n);
    return reduced == IntMatrix::identity(4).map<Integer>([&](const Integer& x) { return mod_floor(x, n); });
}

}  // namespace qmsurf
