#include "avmod/local_iso.hpp"

#include <deque>

#include "avmod/chart.hpp"
#include "avmod/errors.hpp"

namespace avmod {

namespace {

/// Lifts a coordinate multi-index to a ring monomial via the chart's
/// coordinate-variable map.
RingElem coord_monomial(const ChartPtr& c, const Expo& k) {
    Expo e(c->ring->nvars(), 0);
    for (int i = 0; i < c->dim; ++i) e[c->params[i]] = k[i];
    return RingElem::monomial(c->ring, e, Rational(1));
}

}  // namespace

SmashWord SmashWord::unit(const ChartPtr& c) {
    SmashWord w;
    w.chart = c;
    w.lead = RingElem::one(c->ring);
    return w;
}

std::string SmashWord::str() const {
    std::string s = "(" + lead.str() + ")";
    for (const auto& f : factors) {
        s += " * ";
        if (std::holds_alternative<RingElem>(f))
            s += "(" + std::get<RingElem>(f).str() + ")";
        else
            s += "(" + std::get<VecField>(f).str() + ")";
    }
    return s;
}

SmashWord smash_concat(const SmashWord& a, const SmashWord& b) {
    SmashWord r = a;
    if (!(b.lead.is_constant() && b.lead.constant_value() == Rational(1)))
        r.factors.push_back(b.lead);
    r.factors.insert(r.factors.end(), b.factors.begin(), b.factors.end());
    return r;
}

SmashSum smash_normalize(const SmashWord& w) {
    SmashSum out;
    std::deque<SmashWord> work{w};
    while (!work.empty()) {
        SmashWord cur = std::move(work.front());
        work.pop_front();
        std::size_t idx = 0;
        while (idx < cur.factors.size() && !std::holds_alternative<RingElem>(cur.factors[idx]))
            ++idx;
        if (idx == cur.factors.size()) {
            out.push_back(std::move(cur));
            continue;
        }
        RingElem f = std::get<RingElem>(cur.factors[idx]);
        if (idx == 0) {
            cur.lead = cur.lead * f;
            cur.factors.erase(cur.factors.begin());
            work.push_back(std::move(cur));
            continue;
        }
        // All factors before idx are fields; swap f across the adjacent one.
        const VecField eta = std::get<VecField>(cur.factors[idx - 1]);
        SmashWord swapped = cur;
        swapped.factors[idx - 1] = f;
        swapped.factors[idx] = eta;
        SmashWord contracted = cur;
        contracted.factors[idx - 1] = eta.apply(f);
        contracted.factors.erase(contracted.factors.begin() + static_cast<long>(idx));
        work.push_back(std::move(swapped));
        work.push_back(std::move(contracted));
    }
    return out;
}

ModElem smash_eval(const AVModule& m, const SmashWord& w, const ModElem& e) {
    ModElem cur = e;
    for (auto it = w.factors.rbegin(); it != w.factors.rend(); ++it) {
        if (std::holds_alternative<RingElem>(*it))
            cur = m.act_ring(std::get<RingElem>(*it), cur);
        else
            cur = m.act_field(std::get<VecField>(*it), cur);
    }
    return m.act_ring(w.lead, cur);
}

ModElem smash_eval(const AVModule& m, const SmashSum& s, const ModElem& e) {
    ModElem acc = m.zero_elem();
    for (const SmashWord& w : s) acc = acc + smash_eval(m, w, e);
    return acc;
}

namespace {

JetPoly<DiffOp> phi_factor(const ChartPtr& chart, const SmashFactor& f, int trunc) {
    if (std::holds_alternative<RingElem>(f))
        return JetPoly<DiffOp>::unit(trunc, DiffOp::mult(std::get<RingElem>(f), chart));
    const VecField& v = std::get<VecField>(f);
    JetPoly<DiffOp> p = JetPoly<DiffOp>::unit(trunc, v.as_op());
    for (int i = 0; i < chart->dim; ++i) {
        if (v.comps[i].is_zero()) continue;
        for (const auto& [k, coeff] : taylor_coeffs(chart, v.comps[i], trunc + 1)) {
            if (expo_total(k) == 0) continue;
            p = p + JetPoly<DiffOp>::gen(trunc, JetGen{k, i}, DiffOp::mult(coeff, chart));
        }
    }
    return p;
}

}  // namespace

JetPoly<DiffOp> phi(const SmashWord& w, int trunc) {
    const ChartPtr& chart = w.chart;
    if (!chart || !chart->has_coordinates())
        throw SpecMismatch("phi: chart has no coordinates");
    JetPoly<DiffOp> p = JetPoly<DiffOp>::unit(trunc, DiffOp::mult(w.lead, chart));
    for (const auto& f : w.factors) p = p * phi_factor(chart, f, trunc);
    return p;
}

JetPoly<DiffOp> phi(const SmashSum& s, int trunc) {
    if (s.empty()) throw SpecMismatch("phi: empty sum");
    JetPoly<DiffOp> p = phi(s.front(), trunc);
    for (std::size_t i = 1; i < s.size(); ++i) p = p + phi(s[i], trunc);
    return p;
}

SmashSum psi_field(const ChartPtr& chart, const RingElem& g, int dir) {
    SmashWord w;
    w.chart = chart;
    w.lead = g.in_spec(chart->ring);
    w.factors.push_back(VecField::basis(chart, dir, RingElem::one(chart->ring)));
    return {w};
}

SmashSum psi_jet(const ChartPtr& chart, const RingElem& g, const JetGen& jet) {
    if (!chart->has_coordinates()) throw SpecMismatch("psi_jet: chart has no coordinates");
    if (static_cast<int>(jet.expo.size()) != chart->dim)
        throw SpecMismatch("psi_jet: wrong arity");
    SmashSum s;
    const int total = expo_total(jet.expo);
    for (const Expo& k : multi_indices(chart->dim, 0, total)) {
        if (!expo_leq(k, jet.expo)) continue;
        Rational coeff = expo_binomial(jet.expo, k);
        if ((total - expo_total(k)) % 2 == 1) coeff = -coeff;
        SmashWord w;
        w.chart = chart;
        w.lead = g.in_spec(chart->ring) * coord_monomial(chart, expo_sub(jet.expo, k)) * coeff;
        w.factors.push_back(VecField::basis(chart, jet.dir, coord_monomial(chart, k)));
        s.push_back(std::move(w));
    }
    return s;
}

}  // namespace avmod
