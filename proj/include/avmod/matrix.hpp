#pragma once

#include <cassert>
#include <optional>
#include <vector>

#include "avmod/rational.hpp"
#include "avmod/ring.hpp"

namespace avmod {

/// Dense matrix over an exact ring (Rational or RingElem). Small sizes only;
/// everything here is O(n^3) or worse and meant for representation matrices
/// and Jacobians.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, T fill) : r_(rows), c_(cols), a_(rows * cols, fill) {}

    int rows() const { return r_; }
    int cols() const { return c_; }
    T& at(int i, int j) { return a_[i * c_ + j]; }
    const T& at(int i, int j) const { return a_[i * c_ + j]; }

    bool operator==(const Matrix& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    Matrix operator+(const Matrix& o) const {
        assert(r_ == o.r_ && c_ == o.c_);
        Matrix m = *this;
        for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = m.a_[i] + o.a_[i];
        return m;
    }
    Matrix operator-(const Matrix& o) const {
        assert(r_ == o.r_ && c_ == o.c_);
        Matrix m = *this;
        for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = m.a_[i] - o.a_[i];
        return m;
    }
    Matrix operator*(const Matrix& o) const {
        assert(c_ == o.r_);
        Matrix m(r_, o.c_, zero_like());
        for (int i = 0; i < r_; ++i)
            for (int k = 0; k < c_; ++k) {
                const T& v = at(i, k);
                if (entry_is_zero(v)) continue;
                for (int j = 0; j < o.c_; ++j) m.at(i, j) = m.at(i, j) + v * o.at(k, j);
            }
        return m;
    }
    Matrix scaled(const T& s) const {
        Matrix m = *this;
        for (auto& v : m.a_) v = v * s;
        return m;
    }
    Matrix transpose() const {
        Matrix m(c_, r_, zero_like());
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) m.at(j, i) = at(i, j);
        return m;
    }

    bool is_zero() const {
        for (const auto& v : a_)
            if (!entry_is_zero(v)) return false;
        return true;
    }

    /// c * identity test; returns the scalar if so.
    std::optional<T> scalar_value() const {
        assert(r_ == c_ && r_ > 0);
        const T& d = at(0, 0);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) {
                if (i == j ? !(at(i, j) == d) : !entry_is_zero(at(i, j))) return std::nullopt;
            }
        return d;
    }

    T trace() const {
        assert(r_ == c_);
        T t = zero_like();
        for (int i = 0; i < r_; ++i) t = t + at(i, i);
        return t;
    }

    /// Kronecker product, row-major block convention: entry ((i1,i2),(j1,j2))
    /// with the second factor's index varying fastest.
    Matrix kron(const Matrix& o) const {
        Matrix m(r_ * o.r_, c_ * o.c_, zero_like());
        for (int i1 = 0; i1 < r_; ++i1)
            for (int j1 = 0; j1 < c_; ++j1) {
                if (entry_is_zero(at(i1, j1))) continue;
                for (int i2 = 0; i2 < o.r_; ++i2)
                    for (int j2 = 0; j2 < o.c_; ++j2)
                        m.at(i1 * o.r_ + i2, j1 * o.c_ + j2) = at(i1, j1) * o.at(i2, j2);
            }
        return m;
    }

    /// Laplace expansion determinant; fine for the small sizes used here.
    T det() const {
        assert(r_ == c_);
        if (r_ == 1) return at(0, 0);
        T acc = zero_like();
        for (int j = 0; j < c_; ++j) {
            if (entry_is_zero(at(0, j))) continue;
            T term = at(0, j) * minor_at(0, j).det();
            acc = (j % 2 == 0) ? acc + term : acc - term;
        }
        return acc;
    }

    Matrix minor_at(int row, int col) const {
        Matrix m(r_ - 1, c_ - 1, zero_like());
        for (int i = 0, mi = 0; i < r_; ++i) {
            if (i == row) continue;
            for (int j = 0, mj = 0; j < c_; ++j) {
                if (j == col) continue;
                m.at(mi, mj) = at(i, j);
                ++mj;
            }
            ++mi;
        }
        return m;
    }

private:
    int r_ = 0, c_ = 0;
    std::vector<T> a_;

    T zero_like() const;
    static bool entry_is_zero(const T& v);
};

template <>
inline Rational Matrix<Rational>::zero_like() const {
    return Rational(0);
}
template <>
inline bool Matrix<Rational>::entry_is_zero(const Rational& v) {
    return v.is_zero();
}
template <>
inline RingElem Matrix<RingElem>::zero_like() const {
    assert(!a_.empty());
    return RingElem::zero(a_[0].spec());
}
template <>
inline bool Matrix<RingElem>::entry_is_zero(const RingElem& v) {
    return v.is_zero();
}

using QMatrix = Matrix<Rational>;
using RMatrix = Matrix<RingElem>;

inline QMatrix q_identity(int n) {
    QMatrix m(n, n, Rational(0));
    for (int i = 0; i < n; ++i) m.at(i, i) = Rational(1);
    return m;
}

inline QMatrix q_unit(int n, int i, int j) {
    QMatrix m(n, n, Rational(0));
    m.at(i, j) = Rational(1);
    return m;
}

/// Exact inverse over the rationals; nullopt when singular.
std::optional<QMatrix> q_inverse(const QMatrix& m);

/// Inverse over a ring via the adjugate; requires det to be an invertible
/// monomial (which is exactly the case for the Jacobians this library meets).
RMatrix r_inverse(const RMatrix& m);

RMatrix r_identity(const RingSpecPtr& spec, int n);

/// Row echelon basis of the span of the given rows; rows are reduced, pivots
/// are 1, result rows are linearly independent.
std::vector<std::vector<Rational>> row_space_basis(std::vector<std::vector<Rational>> rows);

/// Coordinates of v in the span of basis rows (as produced by
/// row_space_basis); nullopt if v is outside the span.
std::optional<std::vector<Rational>> in_span(const std::vector<std::vector<Rational>>& basis,
                                             std::vector<Rational> v);

}  // namespace avmod
