#include "avmod/matrix.hpp"

#include <algorithm>

#include "avmod/errors.hpp"

namespace avmod {

std::optional<QMatrix> q_inverse(const QMatrix& m) {
    int n = m.rows();
    QMatrix a = m;
    QMatrix inv = q_identity(n);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (!a.at(r, col).is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0) return std::nullopt;
        if (piv != col)
            for (int j = 0; j < n; ++j) {
                std::swap(a.at(piv, j), a.at(col, j));
                std::swap(inv.at(piv, j), inv.at(col, j));
            }
        Rational d = a.at(col, col);
        for (int j = 0; j < n; ++j) {
            a.at(col, j) /= d;
            inv.at(col, j) /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || a.at(r, col).is_zero()) continue;
            Rational f = a.at(r, col);
            for (int j = 0; j < n; ++j) {
                a.at(r, j) -= f * a.at(col, j);
                inv.at(r, j) -= f * inv.at(col, j);
            }
        }
    }
    return inv;
}

RMatrix r_identity(const RingSpecPtr& spec, int n) {
    RMatrix m(n, n, RingElem::zero(spec));
    for (int i = 0; i < n; ++i) m.at(i, i) = RingElem::one(spec);
    return m;
}

RMatrix r_inverse(const RMatrix& m) {
    int n = m.rows();
    RingElem d = m.det();
    auto dinv = d.try_invert();
    if (!dinv) throw AvError("matrix inverse: determinant " + d.str() + " is not a unit monomial");
    RMatrix adj(n, n, RingElem::zero(d.spec()));
    if (n == 1) {
        adj.at(0, 0) = *dinv;
        return adj;
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            RingElem c = m.minor_at(i, j).det();
            if ((i + j) % 2 == 1) c = -c;
            adj.at(j, i) = c * *dinv;  // transpose of cofactors
        }
    return adj;
}

std::vector<std::vector<Rational>> row_space_basis(std::vector<std::vector<Rational>> rows) {
    std::vector<std::vector<Rational>> basis;
    std::vector<int> pivots;
    for (auto& v : rows) {
        // Reduce against current basis.
        for (size_t b = 0; b < basis.size(); ++b) {
            const Rational& f = v[pivots[b]];
            if (f.is_zero()) continue;
            Rational ff = f;
            for (size_t j = 0; j < v.size(); ++j) v[j] -= ff * basis[b][j];
        }
        int p = -1;
        for (size_t j = 0; j < v.size(); ++j)
            if (!v[j].is_zero()) {
                p = static_cast<int>(j);
                break;
            }
        if (p < 0) continue;
        Rational lead = v[p];
        for (auto& x : v) x /= lead;
        // Back-substitute into earlier rows so coordinates are unique.
        for (size_t b = 0; b < basis.size(); ++b) {
            Rational f = basis[b][p];
            if (f.is_zero()) continue;
            for (size_t j = 0; j < v.size(); ++j) basis[b][j] -= f * v[j];
        }
        basis.push_back(std::move(v));
        pivots.push_back(p);
    }
    // Keep a deterministic pivot-sorted order.
    std::vector<size_t> idx(basis.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return pivots[a] < pivots[b]; });
    std::vector<std::vector<Rational>> out;
    for (size_t i : idx) out.push_back(std::move(basis[i]));
    return out;
}

std::optional<std::vector<Rational>> in_span(const std::vector<std::vector<Rational>>& basis,
                                             std::vector<Rational> v) {
    std::vector<Rational> coords;
    for (const auto& b : basis) {
        int p = -1;
        for (size_t j = 0; j < b.size(); ++j)
            if (!b[j].is_zero()) {
                p = static_cast<int>(j);
                break;
            }
        Rational f = v[p];
        coords.push_back(f);
        if (f.is_zero()) continue;
        for (size_t j = 0; j < v.size(); ++j) v[j] -= f * b[j];
    }
    for (const auto& x : v)
        if (!x.is_zero()) return std::nullopt;
    return coords;
}

}  // namespace avmod
