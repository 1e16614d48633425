#pragma once

#include "qmsurf/rational.hpp"

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <utility>
#include <vector>

namespace qmsurf {

/// Dense row-major matrix. Sizes here are tiny (at most a few dozen rows),
/// so a flat vector is all that is needed.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            assert(row.size() == cols_);
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    bool operator==(const Matrix&) const = default;

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    friend Matrix operator*(const Matrix& x, const Matrix& y) {
        assert(x.cols_ == y.rows_);
        Matrix z(x.rows_, y.cols_);
        for (std::size_t r = 0; r < x.rows_; ++r)
            for (std::size_t k = 0; k < x.cols_; ++k) {
                if (x(r, k) == T(0)) continue;
                for (std::size_t c = 0; c < y.cols_; ++c) z(r, c) += x(r, k) * y(k, c);
            }
        return z;
    }

    friend Matrix operator+(Matrix x, const Matrix& y) {
        for (std::size_t k = 0; k < x.data_.size(); ++k) x.data_[k] += y.data_[k];
        return x;
    }

    friend Matrix operator-(Matrix x, const Matrix& y) {
        for (std::size_t k = 0; k < x.data_.size(); ++k) x.data_[k] -= y.data_[k];
        return x;
    }

    Matrix operator-() const {
        Matrix m = *this;
        for (auto& v : m.data_) v = -v;
        return m;
    }

    template <class U, class F>
    Matrix<U> map(F&& f) const {
        Matrix<U> m(rows_, cols_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) m(r, c) = f((*this)(r, c));
        return m;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;

inline RatMatrix to_rational(const IntMatrix& m) {
    return m.map<Rational>([](const Integer& x) { return Rational(x); });
}

/// Converts an integral rational matrix; nullopt if any entry is fractional.
inline std::optional<IntMatrix> to_integer(const RatMatrix& m) {
    IntMatrix out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (!is_integer(m(r, c))) return std::nullopt;
            out(r, c) = num(m(r, c));
        }
    return out;
}

namespace detail {
template <class T>
double magnitude(const T& x) {
    using std::abs;
    return static_cast<double>(abs(x));
}
inline double magnitude(const Rational& x) { return x == 0 ? 0.0 : 1.0; }
}  // namespace detail

/// Determinant over a field (Rational exact, double/complex with partial pivoting).
template <class T>
T determinant(Matrix<T> m) {
    assert(m.rows() == m.cols());
    const std::size_t n = m.rows();
    T det(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t pivot = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (detail::magnitude(m(r, c)) > detail::magnitude(m(pivot, c))) pivot = r;
        if (m(pivot, c) == T(0)) return T(0);
        if (pivot != c) {
            for (std::size_t k = 0; k < n; ++k) std::swap(m(pivot, k), m(c, k));
            det = -det;
        }
        det *= m(c, c);
        for (std::size_t r = c + 1; r < n; ++r) {
            if (m(r, c) == T(0)) continue;
            T f = m(r, c) / m(c, c);
            for (std::size_t k = c; k < n; ++k) m(r, k) -= f * m(c, k);
        }
    }
    return det;
}

/// Inverse over a field; nullopt when singular.
template <class T>
std::optional<Matrix<T>> inverse(Matrix<T> m) {
    assert(m.rows() == m.cols());
    const std::size_t n = m.rows();
    Matrix<T> inv = Matrix<T>::identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t pivot = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (detail::magnitude(m(r, c)) > detail::magnitude(m(pivot, c))) pivot = r;
        if (m(pivot, c) == T(0)) return std::nullopt;
        for (std::size_t k = 0; k < n; ++k) {
            std::swap(m(pivot, k), m(c, k));
            std::swap(inv(pivot, k), inv(c, k));
        }
        T p = m(c, c);
        for (std::size_t k = 0; k < n; ++k) {
            m(c, k) /= p;
            inv(c, k) /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || m(r, c) == T(0)) continue;
            T f = m(r, c);
            for (std::size_t k = 0; k < n; ++k) {
                m(r, k) -= f * m(c, k);
                inv(r, k) -= f * inv(c, k);
            }
        }
    }
    return inv;
}

/// Row Hermite normal form: nonzero rows only, pivots positive, entries above
/// each pivot reduced into [0, pivot).
inline IntMatrix hermite_normal_form(IntMatrix m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    auto swap_rows = [&](std::size_t x, std::size_t y) {
        for (std::size_t k = 0; k < cols; ++k) std::swap(m(x, k), m(y, k));
    };
    auto add_row = [&](std::size_t dst, std::size_t src, const Integer& f) {
        if (f == 0) return;
        for (std::size_t k = 0; k < cols; ++k) m(dst, k) += f * m(src, k);
    };
    std::size_t lead = 0;
    std::vector<std::size_t> pivot_cols;
    for (std::size_t c = 0; c < cols && lead < rows; ++c) {
        for (;;) {
            std::optional<std::size_t> best;
            for (std::size_t r = lead; r < rows; ++r)
                if (m(r, c) != 0 && (!best || abs_int(m(r, c)) < abs_int(m(*best, c)))) best = r;
            if (!best) break;
            swap_rows(lead, *best);
            bool clean = true;
            for (std::size_t r = lead + 1; r < rows; ++r) {
                if (m(r, c) == 0) continue;
                add_row(r, lead, -floor_div(m(r, c), m(lead, c)));
                if (m(r, c) != 0) clean = false;
            }
            if (clean) break;
        }
        if (m(lead, c) == 0) continue;
        if (m(lead, c) < 0)
            for (std::size_t k = 0; k < cols; ++k) m(lead, k) = -m(lead, k);
        for (std::size_t r = 0; r < lead; ++r) add_row(r, lead, -floor_div(m(r, c), m(lead, c)));
        pivot_cols.push_back(c);
        ++lead;
    }
    IntMatrix out(lead, cols);
    for (std::size_t r = 0; r < lead; ++r)
        for (std::size_t k = 0; k < cols; ++k) out(r, k) = m(r, k);
    return out;
}

/// Diagonal of the Smith normal form (d1 | d2 | ...), nonnegative; zeros for rank deficiency.
inline std::vector<Integer> elementary_divisors(IntMatrix m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    const std::size_t n = std::min(rows, cols);
    for (std::size_t t = 0; t < n; ++t) {
        for (;;) {
            std::optional<std::pair<std::size_t, std::size_t>> best;
            for (std::size_t r = t; r < rows; ++r)
                for (std::size_t c = t; c < cols; ++c)
                    if (m(r, c) != 0 &&
                        (!best || abs_int(m(r, c)) < abs_int(m(best->first, best->second))))
                        best = std::pair{r, c};
            if (!best) {
                std::vector<Integer> out;
                for (std::size_t k = 0; k < t; ++k) out.push_back(abs_int(m(k, k)));
                out.resize(n, 0);
                return out;
            }
            auto [pr, pc] = *best;
            for (std::size_t k = 0; k < cols; ++k) std::swap(m(t, k), m(pr, k));
            for (std::size_t k = 0; k < rows; ++k) std::swap(m(k, t), m(k, pc));
            const Integer p = m(t, t);
            bool done = true;
            for (std::size_t r = t + 1; r < rows; ++r) {
                Integer q = floor_div(m(r, t), p);
                for (std::size_t k = t; k < cols; ++k) m(r, k) -= q * m(t, k);
                if (m(r, t) != 0) done = false;
            }
            for (std::size_t c = t + 1; c < cols; ++c) {
                Integer q = floor_div(m(t, c), p);
                for (std::size_t k = t; k < rows; ++k) m(k, c) -= q * m(k, t);
                if (m(t, c) != 0) done = false;
            }
            if (!done) continue;
            // Divisibility: fold any entry not divisible by the pivot into row t.
            std::optional<std::size_t> offender;
            for (std::size_t r = t + 1; r < rows && !offender; ++r)
                for (std::size_t c = t + 1; c < cols; ++c)
                    if (m(r, c) % p != 0) {
                        offender = r;
                        break;
                    }
            if (!offender) break;
            for (std::size_t k = t; k < cols; ++k) m(t, k) += m(*offender, k);
        }
    }
    std::vector<Integer> out;
    for (std::size_t k = 0; k < n; ++k) out.push_back(abs_int(m(k, k)));
    return out;
}

}  // namespace qmsurf
