#include "avmod/rep.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "avmod/chart.hpp"
#include "avmod/errors.hpp"

namespace avmod {

static RepExprPtr mk(RepExpr e) { return std::make_shared<const RepExpr>(std::move(e)); }

RepExprPtr RepExpr::natural(int n) {
    RepExpr e;
    e.kind = Kind::Natural;
    e.n = n;
    return mk(std::move(e));
}

RepExprPtr RepExpr::dual(RepExprPtr a) {
    RepExpr e;
    e.kind = Kind::Dual;
    e.n = a->n;
    e.args = {std::move(a)};
    return mk(std::move(e));
}

RepExprPtr RepExpr::ext(int k, int n) {
    RepExpr e;
    e.kind = Kind::Ext;
    e.k = k;
    e.n = n;
    return mk(std::move(e));
}

RepExprPtr RepExpr::sym(int k, int n) {
    RepExpr e;
    e.kind = Kind::Sym;
    e.k = k;
    e.n = n;
    return mk(std::move(e));
}

RepExprPtr RepExpr::tensor(RepExprPtr a, RepExprPtr b) {
    if (a->n != b->n) throw SpecMismatch("tensor: factors over different gl_n");
    RepExpr e;
    e.kind = Kind::Tensor;
    e.n = a->n;
    e.args = {std::move(a), std::move(b)};
    return mk(std::move(e));
}

RepExprPtr RepExpr::det_power(int n, const Rational& lambda) {
    RepExpr e;
    e.kind = Kind::DetPower;
    e.n = n;
    e.lambda = lambda;
    return mk(std::move(e));
}

RepExprPtr RepExpr::hwc(RepExprPtr a, std::vector<Rational> weight) {
    RepExpr e;
    e.kind = Kind::Hwc;
    e.n = a->n;
    e.weight = std::move(weight);
    e.args = {std::move(a)};
    return mk(std::move(e));
}

RepExprPtr RepExpr::oplus(RepExprPtr a, RepExprPtr b) {
    if (a->n != b->n) throw SpecMismatch("oplus: summands over different gl_n");
    RepExpr e;
    e.kind = Kind::Oplus;
    e.n = a->n;
    e.args = {std::move(a), std::move(b)};
    return mk(std::move(e));
}

std::string RepExpr::str() const {
    switch (kind) {
        case Kind::Natural: return "natural(" + std::to_string(n) + ")";
        case Kind::Dual: return "dual(" + args[0]->str() + ")";
        case Kind::Ext: return "ext(" + std::to_string(k) + "," + std::to_string(n) + ")";
        case Kind::Sym: return "sym(" + std::to_string(k) + "," + std::to_string(n) + ")";
        case Kind::Tensor: return "tensor(" + args[0]->str() + "," + args[1]->str() + ")";
        case Kind::DetPower: return "det(" + lambda.str() + ")";
        case Kind::Hwc: {
            std::string w;
            for (const auto& x : weight) {
                if (!w.empty()) w += ",";
                w += x.str();
            }
            return "hwc(" + args[0]->str() + ",[" + w + "])";
        }
        case Kind::Oplus: return "oplus(" + args[0]->str() + "," + args[1]->str() + ")";
    }
    return "?";
}

Rep Rep::unchecked(int n, std::vector<QMatrix> mats, RepExprPtr expr) {
    Rep r;
    r.n = n;
    r.dim = mats.empty() ? 0 : mats[0].rows();
    r.expr = std::move(expr);
    r.mats_ = std::move(mats);
    for (int i = 0; i < r.dim; ++i) r.labels.push_back("w" + std::to_string(i + 1));
    return r;
}

std::optional<std::string> rep_check_relations(const Rep& r) {
    int n = r.n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    QMatrix lhs = r.E(i, j) * r.E(k, l) - r.E(k, l) * r.E(i, j);
                    QMatrix rhs(r.dim, r.dim, Rational(0));
                    if (j == k) rhs = rhs + r.E(i, l);
                    if (l == i) rhs = rhs - r.E(k, j);
                    if (lhs != rhs) {
                        std::ostringstream os;
                        os << "[E" << i + 1 << j + 1 << ", E" << k + 1 << l + 1
                           << "] differs from delta-contraction";
                        return os.str();
                    }
                }
    return std::nullopt;
}

std::vector<std::vector<int>> ext_basis_subsets(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int v = start; v < n; ++v) {
            cur.push_back(v);
            rec(v + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

namespace {

std::vector<std::vector<int>> subsets(int n, int k) { return ext_basis_subsets(n, k); }

std::string subset_label(const std::vector<int>& s) {
    if (s.empty()) return "e0";
    std::string l = "e";
    for (int v : s) l += std::to_string(v + 1);
    return l;
}

Rep build_natural(int n) {
    Rep r;
    r.n = n;
    r.dim = n;
    std::vector<QMatrix> mats;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) mats.push_back(q_unit(n, i, j));
    r = Rep::unchecked(n, std::move(mats), RepExpr::natural(n));
    r.labels.clear();
    for (int i = 0; i < n; ++i) r.labels.push_back("e" + std::to_string(i + 1));
    std::vector<Rational> hw(n, Rational(0));
    hw[0] = Rational(1);
    r.highest_weight = hw;
    return r;
}

Rep build_dual(const Rep& a) {
    std::vector<QMatrix> mats;
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) mats.push_back(a.E(i, j).transpose().scaled(Rational(-1)));
    Rep r = Rep::unchecked(a.n, std::move(mats), RepExpr::dual(a.expr));
    r.labels.clear();
    for (const auto& l : a.labels) r.labels.push_back(l + "*");
    if (a.highest_weight) {
        std::vector<Rational> hw(a.highest_weight->rbegin(), a.highest_weight->rend());
        for (auto& x : hw) x = -x;
        r.highest_weight = hw;
    }
    r.integrable = a.integrable;
    return r;
}

Rep build_ext(int k, int n) {
    auto basis = subsets(n, k);
    int dim = static_cast<int>(basis.size());
    std::map<std::vector<int>, int> index;
    for (int b = 0; b < dim; ++b) index[basis[b]] = b;
    std::vector<QMatrix> mats;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            QMatrix m(dim, dim, Rational(0));
            for (int b = 0; b < dim; ++b) {
                const auto& S = basis[b];
                if (!std::binary_search(S.begin(), S.end(), j)) continue;
                if (i != j && std::binary_search(S.begin(), S.end(), i)) continue;
                if (i == j) {
                    m.at(b, b) += Rational(1);
                    continue;
                }
                // Replace j by i; the sign counts basis vectors passed while
                // moving i into sorted position.
                std::vector<int> T;
                int between = 0;
                for (int v : S) {
                    if (v == j) continue;
                    if (v > std::min(i, j) && v < std::max(i, j)) ++between;
                    T.push_back(v);
                }
                T.push_back(i);
                std::sort(T.begin(), T.end());
                Rational sign = (between % 2 == 0) ? Rational(1) : Rational(-1);
                m.at(index.at(T), b) += sign;
            }
            mats.push_back(std::move(m));
        }
    Rep r = Rep::unchecked(n, std::move(mats), RepExpr::ext(k, n));
    r.dim = dim;
    r.labels.clear();
    for (const auto& S : basis) r.labels.push_back(subset_label(S));
    std::vector<Rational> hw(n, Rational(0));
    for (int i = 0; i < k; ++i) hw[i] = Rational(1);
    r.highest_weight = hw;
    return r;
}

Rep build_sym(int k, int n) {
    auto basis = multi_indices(n, k, k);
    int dim = static_cast<int>(basis.size());
    std::map<Expo, int> index;
    for (int b = 0; b < dim; ++b) index[basis[b]] = b;
    std::vector<QMatrix> mats;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            QMatrix m(dim, dim, Rational(0));
            // E_ij acts as x_i d/dx_j on degree-k monomials.
            for (int b = 0; b < dim; ++b) {
                const Expo& e = basis[b];
                if (e[j] == 0) continue;
                Expo t = e;
                t[j] -= 1;
                t[i] += 1;
                m.at(index.at(t), b) += Rational(e[j]);
            }
            mats.push_back(std::move(m));
        }
    Rep r = Rep::unchecked(n, std::move(mats), RepExpr::sym(k, n));
    r.dim = dim;
    r.labels.clear();
    auto names = default_var_names(n);
    for (const Expo& e : basis) r.labels.push_back(expo_str(e, names));
    std::vector<Rational> hw(n, Rational(0));
    hw[0] = Rational(k);
    r.highest_weight = hw;
    return r;
}

Rep build_det(int n, const Rational& lambda) {
    std::vector<QMatrix> mats;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            QMatrix m(1, 1, Rational(0));
            if (i == j) m.at(0, 0) = lambda;
            mats.push_back(std::move(m));
        }
    Rep r = Rep::unchecked(n, std::move(mats), RepExpr::det_power(n, lambda));
    r.labels = {"v"};
    r.highest_weight = std::vector<Rational>(n, lambda);
    r.integrable = lambda.is_integer();
    return r;
}

Rep build_tensor(const Rep& a, const Rep& b) {
    std::vector<QMatrix> mats;
    QMatrix ia = q_identity(a.dim), ib = q_identity(b.dim);
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) mats.push_back(a.E(i, j).kron(ib) + ia.kron(b.E(i, j)));
    Rep r = Rep::unchecked(a.n, std::move(mats), RepExpr::tensor(a.expr, b.expr));
    r.labels.clear();
    for (const auto& la : a.labels)
        for (const auto& lb : b.labels) r.labels.push_back(la + "(x)" + lb);
    r.integrable = a.integrable && b.integrable;
    // One-dimensional factors just shift every weight, so irreducibility is
    // preserved and the top weight is the sum.
    if (a.highest_weight && b.highest_weight && (a.dim == 1 || b.dim == 1)) {
        std::vector<Rational> hw = *a.highest_weight;
        for (int i = 0; i < a.n; ++i) hw[i] += (*b.highest_weight)[i];
        r.highest_weight = hw;
    }
    return r;
}

Rep build_oplus(const Rep& a, const Rep& b) {
    std::vector<QMatrix> mats;
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) {
            QMatrix m(a.dim + b.dim, a.dim + b.dim, Rational(0));
            for (int p = 0; p < a.dim; ++p)
                for (int q = 0; q < a.dim; ++q) m.at(p, q) = a.E(i, j).at(p, q);
            for (int p = 0; p < b.dim; ++p)
                for (int q = 0; q < b.dim; ++q) m.at(a.dim + p, a.dim + q) = b.E(i, j).at(p, q);
            mats.push_back(std::move(m));
        }
    Rep r = Rep::unchecked(a.n, std::move(mats), RepExpr::oplus(a.expr, b.expr));
    r.labels.clear();
    for (const auto& l : a.labels) r.labels.push_back(l + "'");
    for (const auto& l : b.labels) r.labels.push_back(l + "''");
    r.integrable = a.integrable && b.integrable;
    return r;
}

std::vector<std::vector<Rational>> null_space(const std::vector<std::vector<Rational>>& rows,
                                              int ncols) {
    // Reduced row echelon, then read off free-column kernel vectors.
    std::vector<std::vector<Rational>> rr = row_space_basis(rows);
    std::vector<int> pivot_of_col(ncols, -1);
    for (size_t r = 0; r < rr.size(); ++r)
        for (int c = 0; c < ncols; ++c)
            if (!rr[r][c].is_zero()) {
                pivot_of_col[c] = static_cast<int>(r);
                break;
            }
    std::vector<std::vector<Rational>> kernel;
    for (int free = 0; free < ncols; ++free) {
        if (pivot_of_col[free] >= 0) continue;
        std::vector<Rational> v(ncols, Rational(0));
        v[free] = Rational(1);
        for (int c = 0; c < ncols; ++c) {
            int pr = pivot_of_col[c];
            if (pr >= 0) v[c] = -rr[pr][free];
        }
        kernel.push_back(std::move(v));
    }
    return kernel;
}

Rep build_hwc(const Rep& parent, const std::vector<Rational>& mu) {
    int n = parent.n;
    if (static_cast<int>(mu.size()) != n)
        throw InvalidWeight("hwc: weight has length " + std::to_string(mu.size()) + ", need " +
                            std::to_string(n));
    for (int i = 0; i + 1 < n; ++i) {
        Rational d = mu[i] - mu[i + 1];
        if (!d.is_integer() || d.sign() < 0)
            throw InvalidWeight("hwc: weight is not dominant with integral steps");
    }
    // Stack (E_ii - mu_i) and the simple raising operators; kernel vectors
    // are singular vectors of weight mu.
    std::vector<std::vector<Rational>> rows;
    auto push_matrix = [&](QMatrix m) {
        for (int r = 0; r < m.rows(); ++r) {
            std::vector<Rational> row(parent.dim);
            for (int c = 0; c < parent.dim; ++c) row[c] = m.at(r, c);
            rows.push_back(std::move(row));
        }
    };
    for (int i = 0; i < n; ++i) {
        QMatrix m = parent.E(i, i);
        for (int d = 0; d < parent.dim; ++d) m.at(d, d) -= mu[i];
        push_matrix(std::move(m));
    }
    for (int i = 0; i + 1 < n; ++i) push_matrix(parent.E(i, i + 1));
    auto kernel = null_space(rows, parent.dim);
    if (kernel.empty()) throw InvalidWeight("hwc: no singular vector of the requested weight");
    // Close the first singular vector under the whole algebra.
    std::vector<std::vector<Rational>> span = row_space_basis({kernel.front()});
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::vector<Rational>> images;
        for (const auto& v : span)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    std::vector<Rational> w(parent.dim, Rational(0));
                    for (int r = 0; r < parent.dim; ++r)
                        for (int c = 0; c < parent.dim; ++c) {
                            if (parent.E(i, j).at(r, c).is_zero()) continue;
                            w[r] += parent.E(i, j).at(r, c) * v[c];
                        }
                    images.push_back(std::move(w));
                }
        size_t before = span.size();
        std::vector<std::vector<Rational>> all = span;
        all.insert(all.end(), images.begin(), images.end());
        span = row_space_basis(all);
        grew = span.size() > before;
    }
    int dim = static_cast<int>(span.size());
    std::vector<QMatrix> mats;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            QMatrix m(dim, dim, Rational(0));
            for (int b = 0; b < dim; ++b) {
                std::vector<Rational> w(parent.dim, Rational(0));
                for (int r = 0; r < parent.dim; ++r)
                    for (int c = 0; c < parent.dim; ++c) {
                        if (parent.E(i, j).at(r, c).is_zero()) continue;
                        w[r] += parent.E(i, j).at(r, c) * span[b][c];
                    }
                auto coords = in_span(span, std::move(w));
                if (!coords) throw AvError("hwc: submodule closure failed");
                for (int a = 0; a < dim; ++a) m.at(a, b) = (*coords)[a];
            }
            mats.push_back(std::move(m));
        }
    Rep r = Rep::unchecked(n, std::move(mats), RepExpr::hwc(parent.expr, mu));
    r.dim = dim;
    r.highest_weight = mu;
    r.integrable = parent.integrable;
    r.hwc_parent = std::make_shared<const Rep>(parent);
    r.hwc_basis = span;
    return r;
}

}  // namespace

Rep rep_build(const RepExprPtr& e) {
    Rep r;
    switch (e->kind) {
        case RepExpr::Kind::Natural: r = build_natural(e->n); break;
        case RepExpr::Kind::Dual: r = build_dual(rep_build(e->args[0])); break;
        case RepExpr::Kind::Ext:
            if (e->k < 0 || e->k > e->n) throw InvalidWeight("ext: need 0 <= k <= n");
            r = build_ext(e->k, e->n);
            break;
        case RepExpr::Kind::Sym:
            if (e->k < 0) throw InvalidWeight("sym: need k >= 0");
            r = build_sym(e->k, e->n);
            break;
        case RepExpr::Kind::Tensor:
            r = build_tensor(rep_build(e->args[0]), rep_build(e->args[1]));
            break;
        case RepExpr::Kind::DetPower: r = build_det(e->n, e->lambda); break;
        case RepExpr::Kind::Hwc: r = build_hwc(rep_build(e->args[0]), e->weight); break;
        case RepExpr::Kind::Oplus:
            r = build_oplus(rep_build(e->args[0]), rep_build(e->args[1]));
            break;
    }
    if (auto bad = rep_check_relations(r))
        throw AvError("representation " + e->str() + " failed validation: " + *bad);
    return r;
}

QMatrix casimir(const Rep& r, int k) {
    if (k < 0) throw std::invalid_argument("casimir: negative degree");
    if (k == 0) return q_identity(r.dim);
    // Block matrix C[(i,a),(j,b)] = E(i,j)[a,b]; the block trace of C^k is
    // exactly the cyclic-word sum.
    int N = r.n * r.dim;
    QMatrix C(N, N, Rational(0));
    for (int i = 0; i < r.n; ++i)
        for (int j = 0; j < r.n; ++j)
            for (int a = 0; a < r.dim; ++a)
                for (int b = 0; b < r.dim; ++b)
                    C.at(i * r.dim + a, j * r.dim + b) = r.E(i, j).at(a, b);
    QMatrix P = C;
    for (int rep = 1; rep < k; ++rep) P = P * C;
    QMatrix out(r.dim, r.dim, Rational(0));
    for (int i = 0; i < r.n; ++i)
        for (int a = 0; a < r.dim; ++a)
            for (int b = 0; b < r.dim; ++b) out.at(a, b) += P.at(i * r.dim + a, i * r.dim + b);
    return out;
}

std::vector<Rational> central_character(const Rep& r, int kmax) {
    std::vector<Rational> out;
    for (int k = 1; k <= kmax; ++k) {
        auto s = casimir(r, k).scalar_value();
        if (!s)
            throw NotScalar("Casimir " + std::to_string(k) + " is not scalar on " +
                            (r.expr ? r.expr->str() : "rep"));
        out.push_back(*s);
    }
    return out;
}

std::optional<std::vector<Rational>> try_central_character(const Rep& r, int kmax) {
    try {
        return central_character(r, kmax);
    } catch (const NotScalar&) {
        return std::nullopt;
    }
}

QMatrix obstruction_op(const Rep& r, int i, int j, int l) {
    QMatrix m = (r.E(l, i) * r.E(l, j)).scaled(Rational(-1));
    if (i == l) m = m + r.E(l, j);
    return m;
}

std::optional<int> exterior_power_type(const Rep& r) {
    // Candidate degree from the first Casimir, which counts boxes.
    auto s = casimir(r, 1).scalar_value();
    if (!s || !s->is_integer()) return std::nullopt;
    long k = 0;
    try {
        k = s->to_long();
    } catch (...) {
        return std::nullopt;
    }
    if (k < 0 || k > r.n) return std::nullopt;
    Rational bin = rat_binomial(r.n, k);
    if (Rational(r.dim) != bin) return std::nullopt;
    for (int i = 0; i < r.n; ++i)
        for (int j = 0; j < r.n; ++j)
            for (int l = 0; l < r.n; ++l)
                if (!obstruction_op(r, i, j, l).is_zero()) return std::nullopt;
    Rep model = rep_build(RepExpr::ext(static_cast<int>(k), r.n));
    auto want = try_central_character(model, r.n);
    auto have = try_central_character(r, r.n);
    if (!want || !have || *want != *have) return std::nullopt;
    return static_cast<int>(k);
}

const QMatrix& JetRep::at(const JetGen& g) const {
    auto it = action.find(g);
    if (it == action.end())
        throw DegreeError("jet representation has no matrix for " + g.str());
    return it->second;
}

JetRep jet_rep_from_gl(const Rep& r, int s) {
    JetRep w;
    w.n = r.n;
    w.s = s;
    w.dim = r.dim;
    w.labels = r.labels;
    for (const JetGen& g : jet_gens_up_to(r.n, s)) {
        if (g.degree() == 0) {
            auto [j, i] = gl_embed(g);
            w.action.emplace(g, r.E(j, i));
        } else {
            w.action.emplace(g, QMatrix(r.dim, r.dim, Rational(0)));
        }
    }
    return w;
}

std::optional<std::string> jet_rep_check(const JetRep& w) {
    auto gens = jet_gens_up_to(w.n, w.s);
    for (const auto& a : gens)
        for (const auto& b : gens) {
            QMatrix lhs = w.at(a) * w.at(b) - w.at(b) * w.at(a);
            QMatrix rhs(w.dim, w.dim, Rational(0));
            for (const auto& [g, c] : jet_bracket(a, b, w.s)) rhs = rhs + w.at(g).scaled(c);
            if (lhs != rhs)
                return "bracket mismatch on [" + a.str() + ", " + b.str() + "]";
        }
    return std::nullopt;
}

}  // namespace avmod
