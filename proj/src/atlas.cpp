#include "avmod/atlas.hpp"

#include <algorithm>

#include "avmod/avmodule.hpp"
#include "avmod/errors.hpp"

namespace avmod {

const Transition& Atlas::transition(int a, int b) const {
    auto it = transitions.find({a, b});
    if (it == transitions.end())
        throw NoOverlap("atlas '" + name + "' has no overlap " + std::to_string(a) + " -> " +
                        std::to_string(b));
    return it->second;
}

namespace {

/// Substitution where every variable maps to an invertible monomial, e.g. the
/// coordinate inversions of the one-dimensional atlases.
std::function<RingElem(const RingElem&)> subst_map(const RingSpecPtr& target,
                                                   std::vector<RingElem> images) {
    return [target, images = std::move(images)](const RingElem& f) {
        return substitute(f, images, target);
    };
}

std::function<RingElem(const RingElem&)> retag_map(const RingSpecPtr& target) {
    return [target](const RingElem& f) { return f.in_spec(target); };
}

}  // namespace

Atlas atlas_p1() {
    Atlas at;
    at.name = "p1";
    at.charts = {chart_affine({"x"}), chart_affine({"y"})};
    ChartPtr ox = chart_laurent1("x");
    ChartPtr oy = chart_laurent1("y");
    RingElem yi = RingElem::monomial(oy->ring, {-1}, Rational(1));
    RingElem xi = RingElem::monomial(ox->ring, {-1}, Rational(1));
    at.transitions[{0, 1}] = Transition{ox, oy, subst_map(oy->ring, {yi}), {yi}};
    at.transitions[{1, 0}] = Transition{oy, ox, subst_map(ox->ring, {xi}), {xi}};
    return at;
}

Atlas atlas_gm() {
    Atlas at;
    at.name = "gm";
    at.charts = {chart_laurent1("t"), chart_laurent1("s")};
    const ChartPtr& ot = at.charts[0];
    const ChartPtr& os = at.charts[1];
    RingElem si = RingElem::monomial(os->ring, {-1}, Rational(1));
    RingElem ti = RingElem::monomial(ot->ring, {-1}, Rational(1));
    at.transitions[{0, 1}] = Transition{ot, os, subst_map(os->ring, {si}), {si}};
    at.transitions[{1, 0}] = Transition{os, ot, subst_map(ot->ring, {ti}), {ti}};
    return at;
}

Atlas atlas_circle() {
    Atlas at;
    at.name = "circle";
    at.charts = {chart_circle_x(), chart_circle_y()};
    ChartPtr ox = chart_circle_xy_from_x();
    ChartPtr oy = chart_circle_xy_from_y();
    // Same ring, different coordinate presentation: transporting elements is a
    // re-tag; the coordinate images are the variables themselves.
    at.transitions[{0, 1}] =
        Transition{ox, oy, retag_map(oy->ring), {RingElem::variable(oy->ring, 0)}};
    at.transitions[{1, 0}] =
        Transition{oy, ox, retag_map(ox->ring), {RingElem::variable(ox->ring, 1)}};
    return at;
}

Atlas atlas_cubic() {
    Atlas at;
    at.name = "cubic";
    at.charts = {chart_cubic_curve()};
    return at;
}

Atlas atlas_shear() {
    Atlas at;
    at.name = "shear";
    ChartPtr cx = chart_affine({"x", "y"});
    ChartPtr cu = chart_affine({"u", "v"});
    at.charts = {cx, cu};
    // u = x, v = y + x^2; inverse x = u, y = v - u^2.
    RingElem u = RingElem::variable(cu->ring, 0);
    RingElem v = RingElem::variable(cu->ring, 1);
    RingElem x = RingElem::variable(cx->ring, 0);
    RingElem y = RingElem::variable(cx->ring, 1);
    std::vector<RingElem> xy_to_uv = {u, v - u * u};
    std::vector<RingElem> uv_to_xy = {x, y + x * x};
    at.transitions[{0, 1}] = Transition{cx, cu, subst_map(cu->ring, xy_to_uv), xy_to_uv};
    at.transitions[{1, 0}] = Transition{cu, cx, subst_map(cx->ring, uv_to_xy), uv_to_xy};
    return at;
}

RMatrix jacobian(const Atlas& at, int a, int b) {
    const Transition& tr = at.transition(a, b);
    int n = tr.to_overlap->dim;
    RMatrix j(n, n, RingElem::zero(tr.to_overlap->ring));
    for (int i = 0; i < n; ++i)
        for (int q = 0; q < n; ++q) j.at(i, q) = chart_derive(tr.to_overlap, q, tr.coord_images[i]);
    return j;
}

namespace {

RMatrix lift_built(const Rep& r, const RMatrix& jac);

RMatrix lift_ext(int n, int k, const RMatrix& jac) {
    auto basis = ext_basis_subsets(n, k);
    int dim = static_cast<int>(basis.size());
    RingElem zero = RingElem::zero(jac.at(0, 0).spec());
    RMatrix m(dim, dim, zero);
    for (int ti = 0; ti < dim; ++ti)
        for (int si = 0; si < dim; ++si) {
            RMatrix sub(k, k, zero);
            for (int p = 0; p < k; ++p)
                for (int q = 0; q < k; ++q) sub.at(p, q) = jac.at(basis[ti][p], basis[si][q]);
            m.at(ti, si) = sub.det();
        }
    return m;
}

RMatrix lift_sym(int n, int k, const RMatrix& jac) {
    auto basis = multi_indices(n, k, k);
    std::map<Expo, int> index;
    for (size_t b = 0; b < basis.size(); ++b) index[basis[b]] = static_cast<int>(b);
    int dim = static_cast<int>(basis.size());
    RingElem zero = RingElem::zero(jac.at(0, 0).spec());
    RMatrix m(dim, dim, zero);
    for (int col = 0; col < dim; ++col) {
        // Substitute e_i -> sum_a jac(a, i)-weighted formal basis vectors and
        // expand the monomial.
        std::map<Expo, RingElem> poly{{Expo(n, 0), RingElem::one(zero.spec())}};
        for (int i = 0; i < n; ++i)
            for (int rep = 0; rep < basis[col][i]; ++rep) {
                std::map<Expo, RingElem> next;
                for (const auto& [e, c] : poly)
                    for (int a = 0; a < n; ++a) {
                        if (jac.at(a, i).is_zero()) continue;
                        Expo f = e;
                        f[a] += 1;
                        auto it = next.find(f);
                        if (it == next.end())
                            next.emplace(f, c * jac.at(a, i));
                        else
                            it->second += c * jac.at(a, i);
                    }
                poly = std::move(next);
            }
        for (const auto& [e, c] : poly) m.at(index.at(e), col) = c;
    }
    return m;
}

RMatrix lift_hwc(const Rep& r, const RMatrix& jac) {
    if (!r.hwc_parent) throw AvError("restriction lift: missing parent data");
    RMatrix big = lift_built(*r.hwc_parent, jac);
    const auto& basis = r.hwc_basis;  // echelon rows over the rationals
    int dim = static_cast<int>(basis.size());
    int pdim = r.hwc_parent->dim;
    std::vector<int> pivot(dim, -1);
    for (int b = 0; b < dim; ++b)
        for (int c = 0; c < pdim; ++c)
            if (!basis[b][c].is_zero()) {
                pivot[b] = c;
                break;
            }
    RingElem zero = RingElem::zero(jac.at(0, 0).spec());
    RMatrix m(dim, dim, zero);
    std::vector<std::vector<RingElem>> images(dim, std::vector<RingElem>(pdim, zero));
    for (int b = 0; b < dim; ++b) {
        for (int rr = 0; rr < pdim; ++rr) {
            RingElem acc = zero;
            for (int cc = 0; cc < pdim; ++cc) {
                if (big.at(rr, cc).is_zero() || basis[b][cc].is_zero()) continue;
                acc += big.at(rr, cc) * basis[b][cc];
            }
            images[b][rr] = acc;
        }
        for (int c = 0; c < dim; ++c) m.at(c, b) = images[b][pivot[c]];
    }
    // The restricted span must actually be preserved by the lifted matrix.
    for (int b = 0; b < dim; ++b)
        for (int rr = 0; rr < pdim; ++rr) {
            RingElem acc = images[b][rr];
            for (int c = 0; c < dim; ++c) acc -= m.at(c, b) * basis[c][rr];
            if (!acc.is_zero())
                throw AvError("restriction lift: span not preserved by the transition");
        }
    return m;
}

RMatrix lift_built(const Rep& r, const RMatrix& jac) {
    using K = RepExpr::Kind;
    const RingSpecPtr& spec = jac.at(0, 0).spec();
    switch (r.expr->kind) {
        case K::Natural:
            return jac;
        case K::Dual:
            return r_inverse(lift_built(rep_build(r.expr->args[0]), jac)).transpose();
        case K::Ext:
            return lift_ext(r.expr->n, r.expr->k, jac);
        case K::Sym:
            return lift_sym(r.expr->n, r.expr->k, jac);
        case K::Tensor:
            return lift_built(rep_build(r.expr->args[0]), jac)
                .kron(lift_built(rep_build(r.expr->args[1]), jac));
        case K::DetPower: {
            if (!r.expr->lambda.is_integer())
                throw NotIntegrable("determinant power " + r.expr->lambda.str() +
                                    " does not act on transitions");
            RMatrix m(1, 1, jac.det().pow(r.expr->lambda.to_long()));
            return m;
        }
        case K::Hwc:
            return lift_hwc(r, jac);
        case K::Oplus: {
            RMatrix a = lift_built(rep_build(r.expr->args[0]), jac);
            RMatrix b = lift_built(rep_build(r.expr->args[1]), jac);
            RMatrix m(a.rows() + b.rows(), a.cols() + b.cols(), RingElem::zero(spec));
            for (int i = 0; i < a.rows(); ++i)
                for (int j = 0; j < a.cols(); ++j) m.at(i, j) = a.at(i, j);
            for (int i = 0; i < b.rows(); ++i)
                for (int j = 0; j < b.cols(); ++j) m.at(a.rows() + i, a.cols() + j) = b.at(i, j);
            return m;
        }
    }
    throw AvError("transition lift: unknown construction");
}

}  // namespace

RMatrix rep_lift(const Rep& r, const RMatrix& jac) {
    if (!r.expr) throw AvError("transition lift: representation has no construction tree");
    return lift_built(r, jac);
}

std::vector<RingElem> transform_section(const Atlas& at, int a, int b, const Rep& r,
                                        const std::vector<RingElem>& comps) {
    if (!r.integrable)
        throw NotIntegrable("representation " + (r.expr ? r.expr->str() : "?") +
                            " has a fractional determinant twist");
    const Transition& tr = at.transition(a, b);
    if (static_cast<int>(comps.size()) != r.dim)
        throw SpecMismatch("transform_section: component count mismatch");
    std::vector<RingElem> mapped;
    mapped.reserve(comps.size());
    for (const RingElem& c : comps) mapped.push_back(tr.map(c.in_spec(tr.from_overlap->ring)));
    // The gl cocycle for section transport is the transposed jacobian: with
    // A(a->c) = A(b->c) * map(A(a->b)) this is the composition order the
    // left-multiplication below needs, and its derivative along a flow matches
    // the first-order jet action on tensor carriers.
    RMatrix L = rep_lift(r, jacobian(at, a, b).transpose());
    std::vector<RingElem> out(r.dim, RingElem::zero(tr.to_overlap->ring));
    for (int i = 0; i < r.dim; ++i)
        for (int j = 0; j < r.dim; ++j) {
            if (L.at(i, j).is_zero() || mapped[j].is_zero()) continue;
            out[i] += L.at(i, j) * mapped[j];
        }
    return out;
}

DiffOp transform_op_charged(const Atlas& at, int a, int b, const Rational& lambda,
                            const VecField& v) {
    const Transition& ab = at.transition(a, b);
    const Transition& ba = at.transition(b, a);
    const ChartPtr& to = ab.to_overlap;
    const ChartPtr& from = ab.from_overlap;
    int n = to->dim;
    RMatrix jac = jacobian(at, a, b);  // d x_i / d y_q
    // d y_q / d x_i and the second derivatives, computed on the a side and
    // rewritten on the b side.
    std::vector<std::vector<RingElem>> C(n, std::vector<RingElem>(n, RingElem::zero(to->ring)));
    std::vector<std::vector<std::vector<RingElem>>> D(
        n, std::vector<std::vector<RingElem>>(n, C[0]));
    for (int q = 0; q < n; ++q) {
        RingElem h = ba.coord_images[q].in_spec(from->ring);
        for (int i = 0; i < n; ++i) {
            RingElem di = chart_derive(from, i, h);
            C[q][i] = ab.map(di);
            for (int k = 0; k < n; ++k) D[q][k][i] = ab.map(chart_derive(from, k, di));
        }
    }
    DiffOp out = DiffOp::zero(to);
    for (int i = 0; i < static_cast<int>(v.comps.size()); ++i) {
        if (v.comps[i].is_zero()) continue;
        RingElem f = ab.map(v.comps[i].in_spec(from->ring));
        for (int q = 0; q < n; ++q) {
            if (C[q][i].is_zero()) continue;
            Expo e(to->dim, 0);
            e[q] = 1;
            out = out + DiffOp::term(to, e, f * C[q][i]);
        }
        RingElem corr = RingElem::zero(to->ring);
        for (int q = 0; q < n; ++q)
            for (int k = 0; k < n; ++k) {
                if (D[q][k][i].is_zero() || jac.at(k, q).is_zero()) continue;
                corr += D[q][k][i] * jac.at(k, q);
            }
        if (!corr.is_zero()) out = out + DiffOp::mult(f * corr * lambda, to);
    }
    return out;
}

JetSection transform_jet(const Atlas& at, int a, int b, const RingElem& coeff, const Expo& m,
                         int p, int trunc) {
    const Transition& ab = at.transition(a, b);
    const Transition& ba = at.transition(b, a);
    const ChartPtr& to = ab.to_overlap;
    const ChartPtr& from = ab.from_overlap;
    int n = to->dim;
    if (static_cast<int>(m.size()) != n || p < 0 || p >= n)
        throw SpecMismatch("transform_jet: bad source indices");
    const int cap = trunc + 1;  // jet degree = |expo| - 1
    using YPoly = std::map<Expo, RingElem>;
    auto mul = [&](const YPoly& f, const YPoly& g) {
        YPoly out;
        for (const auto& [e1, c1] : f)
            for (const auto& [e2, c2] : g) {
                Expo e = expo_add(e1, e2);
                if (expo_total(e) > cap) continue;
                RingElem prod = c1 * c2;
                if (prod.is_zero()) continue;
                auto it = out.find(e);
                if (it == out.end())
                    out.emplace(e, std::move(prod));
                else
                    it->second += prod;
            }
        return out;
    };
    // Displacement of the a-side coordinates: x_i(y + Y) - x_i(y).
    std::vector<YPoly> disp(n);
    for (int i = 0; i < n; ++i) {
        for (auto& [k, c] : taylor_coeffs(to, ab.coord_images[i], cap)) {
            if (expo_total(k) == 0) continue;
            disp[i].emplace(k, c);
        }
    }
    YPoly acc{{Expo(n, 0), ab.map(coeff.in_spec(from->ring))}};
    for (int i = 0; i < n; ++i)
        for (int rep = 0; rep < m[i]; ++rep) acc = mul(acc, disp[i]);
    // Direction: d_{X_p} = sum_q (d y_q / d x_p)(x + X) d_{Y_q}.
    JetSection out;
    out.const_part.assign(n, RingElem::zero(to->ring));
    for (int q = 0; q < n; ++q) {
        RingElem base = ab.map(chart_derive(from, p, ba.coord_images[q].in_spec(from->ring)));
        YPoly dir;
        for (auto& [k, c] : taylor_coeffs(to, base, cap)) dir.emplace(k, c);
        YPoly total = mul(acc, dir);
        for (auto& [k, c] : total) {
            if (c.is_zero()) continue;
            if (expo_total(k) == 0)
                out.const_part[q] = c;
            else
                out.jets[JetGen{k, q}] = c;
        }
    }
    return out;
}

bool casimir_invariant(const Atlas& at, int a, int b, int k, bool sabotage) {
    const Transition& tr = at.transition(a, b);
    const ChartPtr& to = tr.to_overlap;
    const ChartPtr& from = tr.from_overlap;
    int n = to->dim;
    RMatrix jac = jacobian(at, a, b);
    RMatrix C(n, n, RingElem::zero(to->ring));  // d y_q / d x_i
    const Transition& ba = at.transition(b, a);
    for (int q = 0; q < n; ++q) {
        RingElem h = ba.coord_images[q].in_spec(from->ring);
        for (int i = 0; i < n; ++i) C.at(q, i) = tr.map(chart_derive(from, i, h));
    }
    using Word = std::vector<std::pair<int, int>>;
    std::map<Word, RingElem> ident, image;
    auto add = [&](std::map<Word, RingElem>& m, const Word& w, const RingElem& c) {
        auto it = m.find(w);
        if (it == m.end())
            m.emplace(w, c);
        else {
            it->second += c;
            if (it->second.is_zero()) m.erase(it);
        }
    };
    // All cyclic index tuples u_1, ..., u_k.
    std::vector<int> u(k, 0);
    while (true) {
        Word w;
        for (int t = 0; t < k; ++t) w.push_back({u[t], u[(t + 1) % k]});
        add(ident, w, RingElem::one(to->ring));
        // Image of the word: each letter E_{ij} becomes
        // sum_{c,d} jac(i,c) C(d,j) E_{cd}; with sabotage the C factor is
        // dropped (d = j), which is not a valid law.
        std::map<Word, RingElem> partial{{Word{}, RingElem::one(to->ring)}};
        for (int t = 0; t < k; ++t) {
            int i = u[t], j = u[(t + 1) % k];
            std::map<Word, RingElem> next;
            for (const auto& [pw, pc] : partial)
                for (int c = 0; c < n; ++c) {
                    if (jac.at(i, c).is_zero()) continue;
                    if (sabotage) {
                        Word nw = pw;
                        nw.push_back({c, j});
                        add(next, nw, pc * jac.at(i, c));
                        continue;
                    }
                    for (int d = 0; d < n; ++d) {
                        if (C.at(d, j).is_zero()) continue;
                        Word nw = pw;
                        nw.push_back({c, d});
                        add(next, nw, pc * jac.at(i, c) * C.at(d, j));
                    }
                }
            partial = std::move(next);
        }
        for (const auto& [pw, pc] : partial) add(image, pw, pc);
        int pos = k - 1;
        while (pos >= 0 && u[pos] == n - 1) u[pos--] = 0;
        if (pos < 0) break;
        ++u[pos];
    }
    return ident == image;
}

std::optional<int> charged_intertwiner_power(const Rational& lambda, int cmax, int kmax,
                                             int lmax) {
    Atlas gm = atlas_gm();
    const ChartPtr& ct = gm.charts[0];
    const ChartPtr& cs = gm.charts[1];
    const Transition& to_s = gm.transition(0, 1);
    AVModulePtr mt = charged_module(ring_module(ct), lambda);
    AVModulePtr ms = charged_module(ring_module(cs), lambda);
    auto act = [](const AVModulePtr& m, const VecField& eta, const RingElem& g) {
        ModElem me;
        me.comps = {CarrierElem{g}};
        return std::get<RingElem>(m->act_field(eta, me).comps[0]);
    };
    auto shift = [&](int c, const RingElem& f) {
        RingElem out = RingElem::zero(cs->ring);
        for (const auto& [e, q] : f.terms()) out += RingElem::monomial(cs->ring, {e[0] + c}, q);
        return out;
    };
    // Candidate intertwiners send the second chart's generator to x^c times the
    // first chart's generator; the fields act on the second-chart side directly
    // and on the first-chart side through the coordinate change.
    for (int c = -cmax; c <= cmax; ++c) {
        bool ok = true;
        for (int k = -kmax; k <= kmax && ok; ++k) {
            VecField eta_s = VecField::basis(cs, 0, RingElem::monomial(cs->ring, {k}, Rational(1)));
            DiffOp pushed = transform_op_charged(gm, 1, 0, Rational(0), eta_s);
            VecField eta_t = VecField::zero(ct);
            for (const auto& [e, f] : pushed.terms()) {
                if (expo_total(e) != 1) throw SpecMismatch("pushforward left a non-field term");
                for (int q = 0; q < ct->dim; ++q)
                    if (e[q] == 1) eta_t.comps[q] += f;
            }
            for (int l = -lmax; l <= lmax && ok; ++l) {
                RingElem x_s = RingElem::monomial(cs->ring, {l}, Rational(1));
                RingElem lhs = shift(c, act(ms, eta_s, x_s));
                RingElem image_t = RingElem::monomial(ct->ring, {-(l + c)}, Rational(1));
                RingElem rhs = to_s.map(act(mt, eta_t, image_t));
                if (lhs != rhs) ok = false;
            }
        }
        if (ok) return c;
    }
    return std::nullopt;
}

std::string TransitionRule::str() const {
    switch (kind) {
        case Kind::Section: return "section";
        case Kind::Rep: return "rep:" + (rep ? rep->str() : "?");
        case Kind::DetPower: return "det:" + lambda.str();
        case Kind::Charged: return "charged:" + lambda.str();
        case Kind::Jet: return "jet:" + std::to_string(s);
    }
    return "?";
}

namespace {

/// Splits a first-order operator into its vector-field and multiplication
/// parts; anything of higher order is rejected.
void split_first_order(const DiffOp& op, VecField& field, RingElem& mult) {
    const ChartPtr& c = op.chart();
    field = VecField::zero(c);
    mult = RingElem::zero(c->ring);
    for (const auto& [e, f] : op.terms()) {
        int total = expo_total(e);
        if (total == 0) {
            mult += f;
        } else if (total == 1) {
            for (int q = 0; q < c->dim; ++q)
                if (e[q] == 1) field.comps[q] += f;
        } else {
            throw SpecMismatch("glue check: operator of order > 1 in a charged round trip");
        }
    }
}

void jet_section_add(JetSection& acc, const JetSection& inc) {
    for (size_t q = 0; q < acc.const_part.size(); ++q) acc.const_part[q] += inc.const_part[q];
    for (const auto& [g, c] : inc.jets) {
        auto it = acc.jets.find(g);
        if (it == acc.jets.end())
            acc.jets.emplace(g, c);
        else {
            it->second += c;
            if (it->second.is_zero()) acc.jets.erase(it);
        }
    }
}

bool jet_section_equal(const JetSection& a, const JetSection& b) {
    if (a.const_part != b.const_part) return false;
    auto clean = [](const JetSection& s) {
        std::map<JetGen, RingElem> m;
        for (const auto& [g, c] : s.jets)
            if (!c.is_zero()) m.emplace(g, c);
        return m;
    };
    return clean(a) == clean(b);
}

std::vector<RingElem> elem_ring_comps(const ModElem& m) {
    std::vector<RingElem> out;
    out.reserve(m.comps.size());
    for (const CarrierElem& c : m.comps) out.push_back(std::get<RingElem>(c));
    return out;
}

}  // namespace

CheckReport glue_check(const Atlas& at, const TransitionRule& rule, int degree) {
    CheckReport report;
    for (const auto& [pair, tr] : at.transitions) {
        const int a = pair.first, b = pair.second;
        const ChartPtr& from = tr.from_overlap;
        const int n = from->dim;
        const std::string where =
            at.name + " " + std::to_string(a) + "->" + std::to_string(b) + ": ";
        std::vector<RingElem> monos = ring_monomials(from->ring, degree);

        auto check_round_trip_rep = [&](const Rep& r) {
            try {
                for (const RingElem& f : monos)
                    for (int j = 0; j < r.dim; ++j) {
                        std::vector<RingElem> comps(r.dim, RingElem::zero(from->ring));
                        comps[j] = f;
                        auto once = transform_section(at, a, b, r, comps);
                        auto back = transform_section(at, b, a, r, once);
                        ++report.checks;
                        bool ok = true;
                        for (int i = 0; i < r.dim; ++i)
                            if (back[i] != comps[i].in_spec(back[i].spec())) ok = false;
                        if (!ok)
                            report.fail(where + "section " + f.str() + " e_" +
                                        std::to_string(j + 1) + " does not round trip");
                    }
            } catch (const NotIntegrable& e) {
                ++report.checks;
                report.fail(where + e.what());
            }
        };

        switch (rule.kind) {
            case TransitionRule::Kind::Section: {
                const Transition& back_tr = at.transition(b, a);
                for (const RingElem& f : monos) {
                    RingElem rt = back_tr.map(tr.map(f));
                    ++report.checks;
                    if (rt != f.in_spec(rt.spec()))
                        report.fail(where + "section " + f.str() + " returns as " + rt.str());
                }
                break;
            }
            case TransitionRule::Kind::DetPower: {
                check_round_trip_rep(rep_build(RepExpr::det_power(n, rule.lambda)));
                break;
            }
            case TransitionRule::Kind::Rep: {
                Rep r = rep_build(rule.rep);
                if (r.n != n) {
                    ++report.checks;
                    report.fail(where + "rank-" + std::to_string(r.n) +
                                " representation on a dim-" + std::to_string(n) + " chart");
                    break;
                }
                check_round_trip_rep(r);
                if (!r.integrable) break;
                // Transporting then acting must equal acting then transporting.
                AVModulePtr ma = tensor_module(ring_module(from), jet_rep_from_gl(r, 0));
                AVModulePtr mb = tensor_module(ring_module(tr.to_overlap), jet_rep_from_gl(r, 0));
                std::vector<RingElem> small = ring_monomials(from->ring, std::min(degree, 2));
                auto transport = [&](const ModElem& m) {
                    ModElem out;
                    for (RingElem& c : transform_section(at, a, b, r, elem_ring_comps(m)))
                        out.comps.push_back(CarrierElem{std::move(c)});
                    return out;
                };
                for (const RingElem& f : small)
                    for (int i = 0; i < n; ++i) {
                        VecField eta = VecField::basis(from, i, f);
                        VecField etab = VecField::zero(tr.to_overlap);
                        RingElem stray = RingElem::zero(tr.to_overlap->ring);
                        split_first_order(transform_op_charged(at, a, b, Rational(0), eta),
                                          etab, stray);
                        for (const RingElem& g : small)
                            for (int j = 0; j < r.dim; ++j) {
                                ModElem m = ma->zero_elem();
                                m.comps[j] = CarrierElem{g};
                                ++report.checks;
                                if (transport(ma->act_field(eta, m)) !=
                                    mb->act_field(etab, transport(m)))
                                    report.fail(where + "action of " + eta.str() + " on " +
                                                g.str() + " e_" + std::to_string(j + 1) +
                                                " does not commute with transport");
                            }
                    }
                break;
            }
            case TransitionRule::Kind::Charged: {
                const Transition& back_tr = at.transition(b, a);
                std::vector<VecField> fields;
                for (const RingElem& f : monos)
                    for (int i = 0; i < n; ++i) fields.push_back(VecField::basis(from, i, f));
                for (const VecField& eta : fields) {
                    DiffOp once = transform_op_charged(at, a, b, rule.lambda, eta);
                    VecField vf = VecField::zero(tr.to_overlap);
                    RingElem mu = RingElem::zero(tr.to_overlap->ring);
                    split_first_order(once, vf, mu);
                    DiffOp back = transform_op_charged(at, b, a, rule.lambda, vf) +
                                  DiffOp::mult(back_tr.map(mu), from);
                    ++report.checks;
                    if (back != eta.as_op())
                        report.fail(where + "charged operator " + eta.str() +
                                    " returns as " + back.str());
                }
                // Bracket preservation on a deterministic sample of pairs.
                size_t count = std::min<size_t>(fields.size(), 6);
                for (size_t u = 0; u < count; ++u)
                    for (size_t v = u + 1; v < count; ++v) {
                        DiffOp lhs =
                            transform_op_charged(at, a, b, rule.lambda,
                                                 vf_bracket(fields[u], fields[v]));
                        DiffOp rhs =
                            commutator(transform_op_charged(at, a, b, rule.lambda, fields[u]),
                                       transform_op_charged(at, a, b, rule.lambda, fields[v]));
                        ++report.checks;
                        if (lhs != rhs)
                            report.fail(where + "bracket of " + fields[u].str() + ", " +
                                        fields[v].str() + " not preserved");
                    }
                break;
            }
            case TransitionRule::Kind::Jet: {
                std::vector<RingElem> coeffs = ring_monomials(from->ring, std::min(degree, 2));
                for (const RingElem& f : coeffs)
                    for (const Expo& m : multi_indices(n, 0, rule.s + 1))
                        for (int p = 0; p < n; ++p) {
                            JetSection once = transform_jet(at, a, b, f, m, p, rule.s);
                            JetSection back;
                            back.const_part.assign(n, RingElem::zero(from->ring));
                            for (int q = 0; q < n; ++q) {
                                if (once.const_part[q].is_zero()) continue;
                                jet_section_add(back, transform_jet(at, b, a, once.const_part[q],
                                                                    Expo(n, 0), q, rule.s));
                            }
                            for (const auto& [g, c] : once.jets)
                                jet_section_add(back,
                                                transform_jet(at, b, a, c, g.expo, g.dir, rule.s));
                            JetSection expect;
                            expect.const_part.assign(n, RingElem::zero(from->ring));
                            if (expo_total(m) == 0)
                                expect.const_part[p] = f;
                            else
                                expect.jets[JetGen{m, p}] = f;
                            ++report.checks;
                            if (!jet_section_equal(back, expect))
                                report.fail(where + "jet " + f.str() + " X^" +
                                            expo_str(m, from->ring->vars) + " d_" +
                                            std::to_string(p + 1) + " does not round trip");
                        }
                break;
            }
        }
    }
    return report;
}

}  // namespace avmod
