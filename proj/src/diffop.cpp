#include "avmod/diffop.hpp"

#include <sstream>

namespace avmod {

static void check_chart(const ChartPtr& a, const ChartPtr& b, const char* what) {
    if (a == b) return;
    if (!a || !b || !a->same_structure(*b)) throw SpecMismatch(std::string(what) + ": chart mismatch");
}

DiffOp DiffOp::mult(const RingElem& f, ChartPtr chart) {
    Expo b(chart->dim, 0);
    return term(std::move(chart), b, f);
}

DiffOp DiffOp::partial(ChartPtr chart, int i) {
    Expo b(chart->dim, 0);
    b[i] = 1;
    return term(chart, b, RingElem::one(chart->ring));
}

DiffOp DiffOp::term(ChartPtr chart, const Expo& b, const RingElem& coeff) {
    DiffOp op(std::move(chart));
    if (!coeff.is_zero()) op.terms_.emplace(b, coeff);
    return op;
}

int DiffOp::order() const {
    int d = -1;
    for (const auto& [b, f] : terms_) d = std::max(d, expo_total(b));
    return d;
}

void DiffOp::add_term(const Expo& b, const RingElem& f) {
    if (f.is_zero()) return;
    auto it = terms_.find(b);
    if (it == terms_.end()) {
        terms_.emplace(b, f);
        return;
    }
    it->second += f;
    if (it->second.is_zero()) terms_.erase(it);
}

DiffOp DiffOp::operator+(const DiffOp& o) const {
    check_chart(chart_, o.chart_, "DiffOp+");
    DiffOp r = *this;
    for (const auto& [b, f] : o.terms_) r.add_term(b, f);
    return r;
}

DiffOp DiffOp::operator-() const {
    DiffOp r = *this;
    for (auto& [b, f] : r.terms_) f = -f;
    return r;
}

DiffOp DiffOp::operator-(const DiffOp& o) const { return *this + (-o); }

DiffOp DiffOp::scaled(const Rational& c) const {
    DiffOp r(chart_);
    for (const auto& [b, f] : terms_) r.add_term(b, f * c);
    return r;
}

DiffOp DiffOp::scaled(const RingElem& g) const {
    DiffOp r(chart_);
    for (const auto& [b, f] : terms_) r.add_term(b, g * f);
    return r;
}

DiffOp DiffOp::operator*(const DiffOp& o) const {
    check_chart(chart_, o.chart_, "DiffOp*");
    DiffOp r(chart_);
    for (const auto& [a, f] : terms_) {
        for (const auto& [b, g] : o.terms_) {
            // d^a (g d^b) = sum_{k <= a} binom(a,k) (d^k g) d^{a-k+b}.
            // Valid because the frame commutes.
            for (const Expo& k : multi_indices(chart_->dim, 0, expo_total(a))) {
                if (!expo_leq(k, a)) continue;
                RingElem dg = chart_derive(chart_, k, g);
                if (dg.is_zero()) continue;
                r.add_term(expo_add(expo_sub(a, k), b), f * dg * expo_binomial(a, k));
            }
        }
    }
    return r;
}

bool DiffOp::operator==(const DiffOp& o) const {
    check_chart(chart_, o.chart_, "DiffOp==");
    return terms_ == o.terms_;
}

RingElem DiffOp::apply(const RingElem& g) const {
    RingElem acc = RingElem::zero(chart_->ring);
    for (const auto& [b, f] : terms_) acc += f * chart_derive(chart_, b, g);
    return acc;
}

std::string DiffOp::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [b, f] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << f.str() << ")";
        for (int i = 0; i < chart_->dim; ++i)
            for (int rep = 0; rep < b[i]; ++rep) os << "*d" << i + 1;
    }
    return os.str();
}

DiffOp commutator(const DiffOp& a, const DiffOp& b) { return a * b - b * a; }

VecField VecField::zero(ChartPtr c) {
    VecField v;
    v.comps.assign(c->dim, RingElem::zero(c->ring));
    v.chart = std::move(c);
    return v;
}

VecField VecField::basis(ChartPtr c, int i, const RingElem& f) {
    VecField v = zero(std::move(c));
    v.comps[i] = f;
    return v;
}

RingElem VecField::apply(const RingElem& g) const {
    RingElem acc = RingElem::zero(chart->ring);
    for (int i = 0; i < chart->dim; ++i)
        if (!comps[i].is_zero()) acc += comps[i] * chart_derive(chart, i, g);
    return acc;
}

DiffOp VecField::as_op() const {
    DiffOp op = DiffOp::zero(chart);
    for (int i = 0; i < chart->dim; ++i) {
        Expo b(chart->dim, 0);
        b[i] = 1;
        op = op + DiffOp::term(chart, b, comps[i]);
    }
    return op;
}

VecField VecField::operator+(const VecField& o) const {
    check_chart(chart, o.chart, "VecField+");
    VecField r = *this;
    for (int i = 0; i < chart->dim; ++i) r.comps[i] += o.comps[i];
    return r;
}

VecField VecField::scaled(const RingElem& f) const {
    VecField r = *this;
    for (auto& c : r.comps) c *= f;
    return r;
}

bool VecField::is_zero() const {
    for (const auto& c : comps)
        if (!c.is_zero()) return false;
    return true;
}

std::string VecField::str() const {
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < chart->dim; ++i) {
        if (comps[i].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << comps[i].str() << ")*d" << i + 1;
    }
    return first ? "0" : os.str();
}

VecField vf_bracket(const VecField& a, const VecField& b) {
    check_chart(a.chart, b.chart, "vf_bracket");
    VecField r = VecField::zero(a.chart);
    for (int j = 0; j < a.chart->dim; ++j) {
        RingElem acc = RingElem::zero(a.chart->ring);
        for (int i = 0; i < a.chart->dim; ++i) {
            if (!a.comps[i].is_zero()) acc += a.comps[i] * chart_derive(a.chart, i, b.comps[j]);
            if (!b.comps[i].is_zero()) acc -= b.comps[i] * chart_derive(a.chart, i, a.comps[j]);
        }
        r.comps[j] = acc;
    }
    return r;
}

DeltaElem DeltaElem::operator+(const DeltaElem& o) const {
    if (point != o.point) throw SpecMismatch("delta elements at different points");
    DeltaElem r = *this;
    for (const auto& [b, c] : o.terms) {
        auto& slot = r.terms[b];
        slot += c;
        if (slot.is_zero()) r.terms.erase(b);
    }
    return r;
}

DeltaElem DeltaElem::scaled(const Rational& c) const {
    DeltaElem r;
    r.point = point;
    if (c.is_zero()) return r;
    for (const auto& [b, v] : terms) r.terms[b] = v * c;
    return r;
}

std::string DeltaElem::str() const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [b, c] : terms) {
        if (!first) os << " + ";
        first = false;
        os << c.str();
        for (size_t i = 0; i < b.size(); ++i)
            for (int rep = 0; rep < b[i]; ++rep) os << "*d" << i + 1;
        os << "*delta";
    }
    return os.str();
}

DeltaElem delta_at(const std::vector<Rational>& p) {
    DeltaElem m;
    m.point = p;
    m.terms[Expo(p.size(), 0)] = Rational(1);
    return m;
}

static DeltaElem delta_mul_var(int i, const DeltaElem& m) {
    DeltaElem r;
    r.point = m.point;
    for (const auto& [b, c] : m.terms) {
        if (!m.point[i].is_zero()) {
            auto& s = r.terms[b];
            s += c * m.point[i];
            if (s.is_zero()) r.terms.erase(b);
        }
        if (b[i] > 0) {
            Expo down = b;
            down[i] -= 1;
            auto& s = r.terms[down];
            s -= c * Rational(b[i]);
            if (s.is_zero()) r.terms.erase(down);
        }
    }
    return r;
}

static DeltaElem delta_apply_partial(int i, const DeltaElem& m) {
    DeltaElem r;
    r.point = m.point;
    for (const auto& [b, c] : m.terms) {
        Expo up = b;
        up[i] += 1;
        r.terms[up] = c;
    }
    return r;
}

DeltaElem delta_act(const DiffOp& op, const DeltaElem& m) {
    const ChartPtr& c = op.chart();
    if (c->ring->has_relation() || c->dim != c->ring->nvars() ||
        static_cast<int>(m.point.size()) != c->dim)
        throw SpecMismatch("delta_act: need an affine chart matching the point");
    for (bool inv : c->ring->invertible)
        if (inv) throw SpecMismatch("delta_act: affine coefficients only");
    DeltaElem out;
    out.point = m.point;
    for (const auto& [b, f] : op.terms()) {
        DeltaElem cur = m;
        for (int i = 0; i < c->dim; ++i)
            for (int rep = 0; rep < b[i]; ++rep) cur = delta_apply_partial(i, cur);
        for (const auto& [e, coeff] : f.terms()) {
            DeltaElem t = cur.scaled(coeff);
            for (int i = 0; i < c->dim; ++i)
                for (int rep = 0; rep < e[i]; ++rep) t = delta_mul_var(i, t);
            out = out + t;
        }
    }
    return out;
}

}  // namespace avmod
