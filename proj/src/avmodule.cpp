#include "avmod/avmodule.hpp"

#include <algorithm>
#include <sstream>

namespace avmod {

bool carrier_is_zero(const CarrierElem& c) {
    return std::visit([](const auto& v) { return v.is_zero(); }, c);
}

CarrierElem carrier_add(const CarrierElem& a, const CarrierElem& b) {
    if (a.index() != b.index()) throw SpecMismatch("carrier kinds differ");
    if (std::holds_alternative<RingElem>(a))
        return std::get<RingElem>(a) + std::get<RingElem>(b);
    return std::get<DeltaElem>(a) + std::get<DeltaElem>(b);
}

CarrierElem carrier_scale(const CarrierElem& a, const Rational& q) {
    if (std::holds_alternative<RingElem>(a)) return std::get<RingElem>(a) * q;
    return std::get<DeltaElem>(a).scaled(q);
}

std::string carrier_str(const CarrierElem& c) {
    return std::visit([](const auto& v) { return v.str(); }, c);
}

bool ModElem::is_zero() const {
    return std::all_of(comps.begin(), comps.end(), carrier_is_zero);
}

ModElem ModElem::operator+(const ModElem& o) const {
    if (comps.size() != o.comps.size()) throw SpecMismatch("module elements of different rank");
    ModElem r;
    for (size_t i = 0; i < comps.size(); ++i) r.comps.push_back(carrier_add(comps[i], o.comps[i]));
    return r;
}

ModElem ModElem::operator-(const ModElem& o) const { return *this + o.scaled(Rational(-1)); }

ModElem ModElem::scaled(const Rational& q) const {
    ModElem r;
    for (const auto& c : comps) r.comps.push_back(carrier_scale(c, q));
    return r;
}

ModElem AVModule::zero_elem() const {
    ModElem m;
    for (int i = 0; i < rank_; ++i) {
        if (delta_) {
            DeltaElem d;
            d.point = point_;
            m.comps.emplace_back(std::move(d));
        } else {
            m.comps.emplace_back(RingElem::zero(chart_->ring));
        }
    }
    return m;
}

ModElem AVModule::gen(int a) const {
    ModElem m = zero_elem();
    if (delta_)
        m.comps[a] = delta_at(point_);
    else
        m.comps[a] = RingElem::one(chart_->ring);
    return m;
}

std::vector<ModElem> AVModule::basis(int degree_bound) const {
    std::vector<ModElem> out;
    if (delta_) {
        for (const Expo& b : multi_indices(static_cast<int>(point_.size()), 0, degree_bound))
            for (int a = 0; a < rank_; ++a) {
                ModElem m = zero_elem();
                DeltaElem d;
                d.point = point_;
                d.terms[b] = Rational(1);
                m.comps[a] = std::move(d);
                out.push_back(std::move(m));
            }
        return out;
    }
    for (const RingElem& f : ring_monomials(chart_->ring, degree_bound))
        for (int a = 0; a < rank_; ++a) {
            ModElem m = zero_elem();
            m.comps[a] = f;
            out.push_back(std::move(m));
        }
    return out;
}

std::string AVModule::elem_str(const ModElem& m) const {
    std::ostringstream os;
    bool first = true;
    for (int a = 0; a < rank_; ++a) {
        if (carrier_is_zero(m.comps[a])) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << carrier_str(m.comps[a]) << ")";
        if (!labels_.empty()) os << "*" << labels_[a];
    }
    return first ? "0" : os.str();
}

void AVModule::check_elem(const ModElem& m) const {
    if (static_cast<int>(m.comps.size()) != rank_)
        throw SpecMismatch("module element has wrong rank");
    for (const auto& c : m.comps)
        if (std::holds_alternative<DeltaElem>(c) != delta_)
            throw SpecMismatch("module element has wrong carrier kind");
}

namespace {

ModElem wrap(CarrierElem c) {
    ModElem m;
    m.comps.push_back(std::move(c));
    return m;
}

/// The ring acting on itself.
class RingModule final : public AVModule {
public:
    explicit RingModule(ChartPtr chart) {
        chart_ = std::move(chart);
        rank_ = 1;
        labels_ = {"1"};
    }
    ModElem act_ring(const RingElem& f, const ModElem& m) const override {
        check_elem(m);
        return wrap(coerce(f) * std::get<RingElem>(m.comps[0]));
    }
    ModElem act_field(const VecField& eta, const ModElem& m) const override {
        check_elem(m);
        return wrap(eta.apply(std::get<RingElem>(m.comps[0])));
    }
    std::string describe() const override { return "functions(" + chart_->name + ")"; }
};

/// Pulses at a point of affine space.
class DeltaModule final : public AVModule {
public:
    DeltaModule(ChartPtr chart, std::vector<Rational> point) {
        if (!chart->has_coordinates() || chart->ring->has_relation() ||
            chart->dim != chart->ring->nvars())
            throw SpecMismatch("delta module needs an affine chart");
        if (static_cast<int>(point.size()) != chart->dim)
            throw SpecMismatch("delta module: point has wrong dimension");
        chart_ = std::move(chart);
        point_ = std::move(point);
        delta_ = true;
        free_ = false;
        rank_ = 1;
        labels_ = {"delta"};
    }
    ModElem act_ring(const RingElem& f, const ModElem& m) const override {
        check_elem(m);
        DiffOp op = DiffOp::mult(coerce(f), chart_);
        return wrap(delta_act(op, std::get<DeltaElem>(m.comps[0])));
    }
    ModElem act_field(const VecField& eta, const ModElem& m) const override {
        check_elem(m);
        return wrap(delta_act(eta.as_op(), std::get<DeltaElem>(m.comps[0])));
    }
    std::string describe() const override {
        std::string p;
        for (const auto& c : point_) {
            if (!p.empty()) p += ",";
            p += c.str();
        }
        return "delta(" + p + ")";
    }
};

/// Rank-one base twisted by a truncated jet representation.
class TensorModule final : public AVModule {
public:
    TensorModule(AVModulePtr base, JetRep w) : base_(std::move(base)), w_(std::move(w)) {
        if (base_->rank() != 1) throw SpecMismatch("tensor module needs a rank-one base");
        chart_ = base_->chart();
        if (w_.n != chart_->dim) throw SpecMismatch("jet representation rank != chart dimension");
        delta_ = base_->delta_carrier();
        free_ = base_->free_over_ring();
        point_ = base_->point();
        rank_ = w_.dim;
        for (const auto& l : w_.labels) labels_.push_back(l);
    }
    ModElem act_ring(const RingElem& f, const ModElem& m) const override {
        check_elem(m);
        ModElem r = zero_elem();
        for (int a = 0; a < rank_; ++a)
            r.comps[a] = base_->act_ring(f, wrap(m.comps[a])).comps[0];
        return r;
    }
    ModElem act_field(const VecField& eta, const ModElem& m) const override {
        check_elem(m);
        ModElem r = zero_elem();
        for (int i = 0; i < chart_->dim; ++i) {
            const RingElem& f = eta.comps[i];
            if (f.is_zero()) continue;
            VecField fd = VecField::basis(chart_, i, f);
            for (int a = 0; a < rank_; ++a)
                r.comps[a] = carrier_add(r.comps[a], base_->act_field(fd, wrap(m.comps[a])).comps[0]);
            // Jet corrections: (1/k!) (d^k f) p (x) (X^k d_i) w.
            for (const JetGen& g : jet_gens_up_to(w_.n, w_.s)) {
                if (g.dir != i) continue;
                RingElem df = chart_derive(chart_, g.expo, f) * (Rational(1) / expo_factorial(g.expo));
                if (df.is_zero()) continue;
                const QMatrix& mat = w_.at(g);
                for (int a = 0; a < rank_; ++a) {
                    if (carrier_is_zero(m.comps[a])) continue;
                    CarrierElem moved = base_->act_ring(df, wrap(m.comps[a])).comps[0];
                    for (int b = 0; b < rank_; ++b) {
                        const Rational& c = mat.at(b, a);
                        if (c.is_zero()) continue;
                        r.comps[b] = carrier_add(r.comps[b], carrier_scale(moved, c));
                    }
                }
            }
        }
        return r;
    }
    std::string describe() const override {
        return "tensor(" + base_->describe() + ", jets^" + std::to_string(w_.s) + " dim " +
               std::to_string(w_.dim) + ")";
    }
    const JetRep& coeff_rep() const { return w_; }
    const AVModulePtr& base() const { return base_; }

private:
    AVModulePtr base_;
    JetRep w_;
};

/// rho(f d_i) = f d_i + lambda (d_i f).
class ChargedModule final : public AVModule {
public:
    ChargedModule(AVModulePtr base, Rational lambda, bool broken = false)
        : base_(std::move(base)), lambda_(std::move(lambda)), broken_(broken) {
        chart_ = base_->chart();
        rank_ = base_->rank();
        free_ = base_->free_over_ring();
        delta_ = base_->delta_carrier();
        point_ = base_->point();
        labels_ = base_->labels();
    }
    ModElem act_ring(const RingElem& f, const ModElem& m) const override {
        return base_->act_ring(f, m);
    }
    ModElem act_field(const VecField& eta, const ModElem& m) const override {
        ModElem r = base_->act_field(eta, m);
        for (int i = 0; i < chart_->dim; ++i) {
            if (eta.comps[i].is_zero()) continue;
            RingElem div = chart_derive(chart_, i, eta.comps[i]);
            if (broken_) div = chart_derive(chart_, i, div);
            div = div * lambda_;
            if (!div.is_zero()) r = r + base_->act_ring(div, m);
        }
        return r;
    }
    std::string describe() const override {
        return std::string(broken_ ? "charged_broken(" : "charged(") + base_->describe() + ", " +
               lambda_.str() + ")";
    }

private:
    AVModulePtr base_;
    Rational lambda_;
    bool broken_;
};

/// Ideal carrier with declared gauge fields, twisted by w.
class GaugeModule final : public AVModule {
public:
    GaugeModule(GaugeData data, Rep w) : data_(std::move(data)), w_(std::move(w)) {
        chart_ = data_.chart;
        if (w_.n != chart_->dim) throw SpecMismatch("gauge module: coefficient rep rank != dim");
        free_ = false;
        rank_ = w_.dim;
        for (const auto& l : w_.labels) labels_.push_back(l);
        validate_syzygies();
    }

    ModElem act_ring(const RingElem& f, const ModElem& m) const override {
        check_elem(m);
        ModElem r;
        for (int a = 0; a < rank_; ++a) r.comps.push_back(coerce(f) * std::get<RingElem>(m.comps[a]));
        return r;
    }

    /// Derivative of one ideal element through the gauge fields; the section
    /// picks a presentation, and validate_syzygies guarantees independence.
    RingElem gauge_derive(int i, const RingElem& p) const {
        std::vector<RingElem> c = data_.section(p);
        RingElem back = RingElem::zero(chart_->ring);
        for (size_t j = 0; j < c.size(); ++j) back += c[j] * data_.embed[j];
        if (back != p) throw AvError("gauge section failed to present " + p.str());
        RingElem out = RingElem::zero(chart_->ring);
        for (size_t j = 0; j < c.size(); ++j) {
            out += derive(c[j], chart_->frame[i]) * data_.embed[j];
            for (size_t r = 0; r < c.size(); ++r)
                out += c[j] * data_.gauge[i].at(static_cast<int>(r), static_cast<int>(j)) *
                       data_.embed[r];
        }
        return out;
    }

    ModElem act_field(const VecField& eta, const ModElem& m) const override {
        check_elem(m);
        ModElem r = zero_elem();
        for (int i = 0; i < chart_->dim; ++i) {
            const RingElem& f = eta.comps[i];
            if (f.is_zero()) continue;
            for (int a = 0; a < rank_; ++a) {
                const RingElem& p = std::get<RingElem>(m.comps[a]);
                if (p.is_zero()) continue;
                r.comps[a] = carrier_add(r.comps[a], f * gauge_derive(i, p));
                // Coefficient twist: sum_j (d_j f) p (x) E_{ji} w.
                for (int j = 0; j < chart_->dim; ++j) {
                    RingElem df = chart_derive(chart_, j, f);
                    if (df.is_zero()) continue;
                    for (int b = 0; b < rank_; ++b) {
                        const Rational& c = w_.E(j, i).at(b, a);
                        if (c.is_zero()) continue;
                        r.comps[b] = carrier_add(r.comps[b], (df * p) * c);
                    }
                }
            }
        }
        return r;
    }

    std::vector<ModElem> basis(int degree_bound) const override {
        std::vector<ModElem> out;
        for (const RingElem& f : ring_monomials(chart_->ring, degree_bound)) {
            if (f.is_constant()) continue;  // the carrier is the ideal
            for (int a = 0; a < rank_; ++a) {
                ModElem m = zero_elem();
                m.comps[a] = f;
                out.push_back(std::move(m));
            }
        }
        return out;
    }

    ModElem gen(int a) const override {
        ModElem m = zero_elem();
        m.comps[a] = data_.embed[0];
        return m;
    }

    std::string describe() const override {
        return "gauge(" + chart_->name + ", dim " + std::to_string(w_.dim) + ")";
    }

private:
    GaugeData data_;
    Rep w_;

    void validate_syzygies() const {
        int ng = static_cast<int>(data_.gens.size());
        for (size_t s = 0; s < data_.syzygies.size(); ++s) {
            const auto& [lhs, rhs] = data_.syzygies[s];
            RingElem li = RingElem::zero(chart_->ring), ri = RingElem::zero(chart_->ring);
            for (int j = 0; j < ng; ++j) {
                li += lhs[j] * data_.embed[j];
                ri += rhs[j] * data_.embed[j];
            }
            if (li != ri)
                throw SyzygyViolation("relation " + std::to_string(s + 1) +
                                      " does not present equal elements: " + li.str() +
                                      " vs " + ri.str());
            for (int i = 0; i < chart_->dim; ++i) {
                auto leibniz = [&](const std::vector<RingElem>& c) {
                    RingElem out = RingElem::zero(chart_->ring);
                    for (int j = 0; j < ng; ++j) {
                        out += derive(c[j], chart_->frame[i]) * data_.embed[j];
                        for (int r = 0; r < ng; ++r)
                            out += c[j] * data_.gauge[i].at(r, j) * data_.embed[r];
                    }
                    return out;
                };
                RingElem lv = leibniz(lhs), rv = leibniz(rhs);
                if (lv != rv) {
                    std::ostringstream os;
                    os << "gauge fields are inconsistent on relation " << s + 1
                       << " under frame derivation " << i + 1 << ": left presentation gives "
                       << lv.str() << ", right gives " << rv.str();
                    throw SyzygyViolation(os.str());
                }
            }
        }
    }
};

/// Rank-two family over the cubic curve.
class CubicAlphaModule final : public AVModule {
public:
    explicit CubicAlphaModule(Rational alpha) : alpha_(std::move(alpha)) {
        chart_ = chart_cubic_curve();
        rank_ = 2;
        labels_ = {"v", "u"};
    }
    ModElem act_ring(const RingElem& f, const ModElem& m) const override {
        check_elem(m);
        ModElem r;
        for (int a = 0; a < 2; ++a) r.comps.push_back(coerce(f) * std::get<RingElem>(m.comps[a]));
        return r;
    }
    ModElem act_field(const VecField& eta, const ModElem& m) const override {
        check_elem(m);
        const RingElem& f = eta.comps[0];
        const RingElem& gv = std::get<RingElem>(m.comps[0]);
        const RingElem& gu = std::get<RingElem>(m.comps[1]);
        RingElem tf = derive(f, chart_->frame[0]);
        RingElem ttf = derive(tf, chart_->frame[0]);
        ModElem r = zero_elem();
        r.comps[0] = f * derive(gv, chart_->frame[0]) + gv * tf * alpha_;
        r.comps[1] = gv * ttf + f * derive(gu, chart_->frame[0]) +
                     gu * tf * (alpha_ + Rational(1));
        return r;
    }
    std::string describe() const override { return "cubic_alpha(" + alpha_.str() + ")"; }

private:
    Rational alpha_;
};

/// Contragredient of a free module.
class DualModule final : public AVModule {
public:
    explicit DualModule(AVModulePtr base) : base_(std::move(base)) {
        if (!base_->free_over_ring())
            throw NotFree("dual: " + base_->describe() + " is not finite free over its ring");
        chart_ = base_->chart();
        rank_ = base_->rank();
        for (const auto& l : base_->labels()) labels_.push_back(l + "*");
    }
    ModElem act_ring(const RingElem& f, const ModElem& m) const override {
        check_elem(m);
        ModElem r;
        for (int a = 0; a < rank_; ++a) r.comps.push_back(coerce(f) * std::get<RingElem>(m.comps[a]));
        return r;
    }
    ModElem act_field(const VecField& eta, const ModElem& m) const override {
        check_elem(m);
        // (eta phi)(e_a) = eta(phi_a) - phi(eta e_a).
        ModElem r = zero_elem();
        for (int a = 0; a < rank_; ++a) {
            RingElem acc = eta.apply(std::get<RingElem>(m.comps[a]));
            ModElem ha = base_->act_field(eta, base_->gen(a));
            for (int b = 0; b < rank_; ++b)
                acc -= std::get<RingElem>(ha.comps[b]) * std::get<RingElem>(m.comps[b]);
            r.comps[a] = std::move(acc);
        }
        return r;
    }
    std::string describe() const override { return "dual(" + base_->describe() + ")"; }

private:
    AVModulePtr base_;
};

/// Tensor product over the ring of two free modules, fields by Leibniz.
class MTensorModule final : public AVModule {
public:
    MTensorModule(AVModulePtr a, AVModulePtr b) : a_(std::move(a)), b_(std::move(b)) {
        if (!a_->free_over_ring() || !b_->free_over_ring())
            throw NotFree("module tensor product needs free factors");
        if (!a_->chart()->same_structure(*b_->chart()))
            throw SpecMismatch("module tensor product: different charts");
        chart_ = a_->chart();
        rank_ = a_->rank() * b_->rank();
        for (const auto& la : a_->labels())
            for (const auto& lb : b_->labels()) labels_.push_back(la + "(x)" + lb);
    }
    ModElem act_ring(const RingElem& f, const ModElem& m) const override {
        check_elem(m);
        ModElem r;
        for (int a = 0; a < rank_; ++a) r.comps.push_back(coerce(f) * std::get<RingElem>(m.comps[a]));
        return r;
    }
    ModElem act_field(const VecField& eta, const ModElem& m) const override {
        check_elem(m);
        int rb = b_->rank();
        ModElem r = zero_elem();
        // Scalar part.
        for (int s = 0; s < rank_; ++s)
            r.comps[s] = eta.apply(std::get<RingElem>(m.comps[s]));
        // Structure part of each factor.
        for (int a = 0; a < a_->rank(); ++a) {
            ModElem ha = a_->act_field(eta, a_->gen(a));
            for (int c = 0; c < a_->rank(); ++c) {
                const RingElem& h = std::get<RingElem>(ha.comps[c]);
                if (h.is_zero()) continue;
                for (int d = 0; d < rb; ++d)
                    r.comps[c * rb + d] = carrier_add(
                        r.comps[c * rb + d], std::get<RingElem>(m.comps[a * rb + d]) * h);
            }
        }
        for (int b = 0; b < rb; ++b) {
            ModElem hb = b_->act_field(eta, b_->gen(b));
            for (int d = 0; d < rb; ++d) {
                const RingElem& h = std::get<RingElem>(hb.comps[d]);
                if (h.is_zero()) continue;
                for (int c = 0; c < a_->rank(); ++c)
                    r.comps[c * rb + d] = carrier_add(
                        r.comps[c * rb + d], std::get<RingElem>(m.comps[c * rb + b]) * h);
            }
        }
        return r;
    }
    std::string describe() const override {
        return "mtensor(" + a_->describe() + ", " + b_->describe() + ")";
    }

private:
    AVModulePtr a_, b_;
};

/// Free module carried to a localized chart through the jet expansion of its
/// action.
class LocalizedModule final : public AVModule {
public:
    LocalizedModule(AVModulePtr base, ChartPtr loc, int order)
        : base_(std::move(base)), order_(order) {
        if (!base_->free_over_ring()) throw NotFree("localize: base carrier is not free");
        if (!base_->chart()->has_coordinates())
            throw SpecMismatch("localize: base chart has no coordinates");
        chart_ = std::move(loc);
        rank_ = base_->rank();
        labels_ = base_->labels();
        // Precompute the action of the frame and of the jets on generators,
        // coerced into the localized ring.
        const ChartPtr& bc = base_->chart();
        for (int a = 0; a < rank_; ++a) {
            std::vector<std::vector<RingElem>> per_dir;
            for (int i = 0; i < bc->dim; ++i) {
                ModElem im = base_->act_field(VecField::basis(bc, i, RingElem::one(bc->ring)), base_->gen(a));
                per_dir.push_back(coerce_comps(im));
            }
            frame_on_gen_.push_back(std::move(per_dir));
        }
        for (int i = 0; i < bc->dim; ++i)
            for (const Expo& p : multi_indices(bc->dim, 1, std::max(0, order_ - 1))) {
                JetGen g{p, i};
                std::vector<std::vector<RingElem>> imgs;
                for (int a = 0; a < rank_; ++a)
                    imgs.push_back(coerce_comps(jet_act(*base_, g, base_->gen(a))));
                jet_on_gen_.emplace(g, std::move(imgs));
            }
    }

    ModElem act_ring(const RingElem& f, const ModElem& m) const override {
        check_elem(m);
        ModElem r;
        for (int a = 0; a < rank_; ++a) r.comps.push_back(coerce(f) * std::get<RingElem>(m.comps[a]));
        return r;
    }

    ModElem act_field(const VecField& eta, const ModElem& m) const override {
        check_elem(m);
        ModElem r = zero_elem();
        for (int i = 0; i < chart_->dim; ++i) {
            const RingElem& h = eta.comps[i];
            if (h.is_zero()) continue;
            // h * D_i(m): derivative of coefficients plus generator images.
            for (int a = 0; a < rank_; ++a) {
                const RingElem& g = std::get<RingElem>(m.comps[a]);
                if (g.is_zero()) continue;
                r.comps[a] = carrier_add(r.comps[a], h * derive(g, chart_->frame[i]));
                for (int b = 0; b < rank_; ++b) {
                    const RingElem& img = frame_on_gen_[a][i][b];
                    if (!img.is_zero()) r.comps[b] = carrier_add(r.comps[b], h * g * img);
                }
            }
            // Jet corrections with localized coefficients.
            for (const auto& [jg, imgs] : jet_on_gen_) {
                if (jg.dir != i) continue;
                RingElem dh = chart_derive(chart_, jg.expo, h) * (Rational(1) / expo_factorial(jg.expo));
                if (dh.is_zero()) continue;
                for (int a = 0; a < rank_; ++a) {
                    const RingElem& g = std::get<RingElem>(m.comps[a]);
                    if (g.is_zero()) continue;
                    for (int b = 0; b < rank_; ++b) {
                        const RingElem& img = imgs[a][b];
                        if (!img.is_zero()) r.comps[b] = carrier_add(r.comps[b], dh * g * img);
                    }
                }
            }
        }
        return r;
    }

    std::string describe() const override {
        return "localized(" + base_->describe() + " at " + chart_->name + ", order " +
               std::to_string(order_) + ")";
    }

private:
    AVModulePtr base_;
    int order_;
    // frame_on_gen_[a][i] = components of rho(d_i) gen_a in the localized ring.
    std::vector<std::vector<std::vector<RingElem>>> frame_on_gen_;
    std::map<JetGen, std::vector<std::vector<RingElem>>> jet_on_gen_;

    std::vector<RingElem> coerce_comps(const ModElem& m) const {
        std::vector<RingElem> out;
        for (const auto& c : m.comps) out.push_back(std::get<RingElem>(c).in_spec(chart_->ring));
        return out;
    }
};

}  // namespace

AVModulePtr ring_module(ChartPtr chart) { return std::make_shared<RingModule>(std::move(chart)); }

AVModulePtr delta_module(ChartPtr chart, std::vector<Rational> point) {
    return std::make_shared<DeltaModule>(std::move(chart), std::move(point));
}

AVModulePtr tensor_module(AVModulePtr base, JetRep w) {
    return std::make_shared<TensorModule>(std::move(base), std::move(w));
}

AVModulePtr charged_module(AVModulePtr base, const Rational& lambda) {
    return std::make_shared<ChargedModule>(std::move(base), lambda);
}

AVModulePtr charged_module_broken(AVModulePtr base, const Rational& lambda) {
    return std::make_shared<ChargedModule>(std::move(base), lambda, true);
}

AVModulePtr gauge_module(GaugeData data, Rep w) {
    return std::make_shared<GaugeModule>(std::move(data), std::move(w));
}

AVModulePtr cubic_alpha_module(const Rational& alpha) {
    return std::make_shared<CubicAlphaModule>(alpha);
}

AVModulePtr rudakov_module(std::vector<Rational> point, const Rep& w) {
    int n = w.n;
    if (static_cast<int>(point.size()) != n)
        throw SpecMismatch("rudakov: point dimension != coefficient rank");
    Rep shifted = rep_build(RepExpr::tensor(w.expr, RepExpr::det_power(n, Rational(1))));
    return tensor_module(delta_module(chart_affine(n), std::move(point)),
                         jet_rep_from_gl(shifted, 0));
}

AVModulePtr av_dual(AVModulePtr m) { return std::make_shared<DualModule>(std::move(m)); }

AVModulePtr av_mtensor(AVModulePtr a, AVModulePtr b) {
    return std::make_shared<MTensorModule>(std::move(a), std::move(b));
}

AVModulePtr localize_module(AVModulePtr m, ChartPtr localized, std::optional<int> order) {
    int n = 0;
    if (order) {
        n = *order;
    } else {
        auto found = minimal_differentiability(*m, 6, 4);
        if (!found)
            throw UnknownDifferentiability("localize: no differentiability order up to 6 for " +
                                           m->describe());
        n = *found;
    }
    return std::make_shared<LocalizedModule>(std::move(m), std::move(localized), n);
}

ModElem jet_act(const AVModule& m, const JetGen& g, const ModElem& elem) {
    const ChartPtr& c = m.chart();
    if (!c->has_coordinates()) throw SpecMismatch("jet_act: chart has no coordinates");
    if (static_cast<int>(g.expo.size()) != c->dim) throw SpecMismatch("jet_act: wrong arity");
    auto mono = [&](const Expo& k) {
        Expo e(c->ring->nvars(), 0);
        for (int i = 0; i < c->dim; ++i) e[c->params[i]] = k[i];
        return RingElem::monomial(c->ring, e, Rational(1));
    };
    ModElem acc = m.zero_elem();
    for (const Expo& k : multi_indices(c->dim, 0, expo_total(g.expo))) {
        if (!expo_leq(k, g.expo)) continue;
        Rational coeff = expo_binomial(g.expo, k);
        if ((expo_total(g.expo) - expo_total(k)) % 2 == 1) coeff = -coeff;
        ModElem term = m.act_field(VecField::basis(c, g.dir, mono(k)), elem);
        term = m.act_ring(mono(expo_sub(g.expo, k)), term);
        acc = acc + term.scaled(coeff);
    }
    return acc;
}

GaugeData cubic_ideal_gauge() {
    GaugeData d;
    d.chart = chart_cubic_curve();
    const RingSpecPtr& R = d.chart->ring;
    d.gens = {"T", "Y"};
    d.embed = {RingElem::variable(R, 0), RingElem::variable(R, 1)};
    RMatrix g(2, 2, RingElem::zero(R));
    // tau(T) = (t^2 + 1) Y, tau(Y) = (t^3 + t) T.
    g.at(1, 0) = RingElem::make(R, {{{2, 0}, Rational(1)}, {{0, 0}, Rational(1)}}, 0);
    g.at(0, 1) = RingElem::make(R, {{{3, 0}, Rational(1)}, {{1, 0}, Rational(1)}}, 0);
    d.gauge = {g};
    d.section = [R](const RingElem& p) {
        std::map<Expo, Rational> ct, cy;
        if (p.den_power() != 0) throw AvError("gauge section: unexpected denominator");
        for (const auto& [e, c] : p.terms()) {
            if (e[1] >= 1) {
                cy[{e[0], e[1] - 1}] = c;
            } else if (e[0] >= 1) {
                ct[{e[0] - 1, 0}] = c;
            } else {
                throw AvError("element " + p.str() + " is not in the ideal (t, y)");
            }
        }
        return std::vector<RingElem>{RingElem::make(R, ct, 0), RingElem::make(R, cy, 0)};
    };
    // y Y = (t^2 - 1) T and t Y = y T.
    auto elem = [&](std::map<Expo, Rational> t) { return RingElem::make(R, std::move(t), 0); };
    RingElem zero = RingElem::zero(R);
    d.syzygies.push_back({{zero, elem({{{0, 1}, Rational(1)}})},
                          {elem({{{2, 0}, Rational(1)}, {{0, 0}, Rational(-1)}}), zero}});
    d.syzygies.push_back({{zero, elem({{{1, 0}, Rational(1)}})},
                          {elem({{{0, 1}, Rational(1)}}), zero}});
    return d;
}

GaugeData cubic_ideal_gauge_broken() {
    GaugeData d = cubic_ideal_gauge();
    // Corrupt tau(T): (t^2 + 1) Y becomes (t^2 + 2) Y.
    const RingSpecPtr& R = d.chart->ring;
    d.gauge[0].at(1, 0) = RingElem::make(R, {{{2, 0}, Rational(1)}, {{0, 0}, Rational(2)}}, 0);
    return d;
}

CheckReport validate_smash(const AVModule& m, int degree) {
    CheckReport rep;
    const ChartPtr& c = m.chart();
    std::vector<RingElem> monos = ring_monomials(c->ring, degree);
    std::vector<VecField> fields;
    for (const RingElem& f : monos)
        for (int i = 0; i < c->dim; ++i) fields.push_back(VecField::basis(c, i, f));
    std::vector<ModElem> elems = m.basis(degree);

    for (const RingElem& f : monos)
        for (const RingElem& g : monos)
            for (const ModElem& e : elems) {
                ++rep.checks;
                if (m.act_ring(f, m.act_ring(g, e)) != m.act_ring(f * g, e)) {
                    rep.fail("ring action not multiplicative on f=" + f.str() + ", g=" + g.str() +
                             ", m=" + m.elem_str(e));
                }
            }

    for (const VecField& eta : fields)
        for (const RingElem& f : monos)
            for (const ModElem& e : elems) {
                ++rep.checks;
                ModElem lhs = m.act_field(eta, m.act_ring(f, e)) - m.act_ring(f, m.act_field(eta, e));
                ModElem rhs = m.act_ring(eta.apply(f.in_spec(c->ring)), e);
                if (lhs != rhs) {
                    rep.fail("[rho(eta), f] != eta(f) on eta=" + eta.str() + ", f=" + f.str() +
                             ", m=" + m.elem_str(e) + "; got " + m.elem_str(lhs) + " vs " +
                             m.elem_str(rhs));
                }
            }

    for (size_t i = 0; i < fields.size(); ++i)
        for (size_t j = i + 1; j < fields.size(); ++j) {
            VecField br = vf_bracket(fields[i], fields[j]);
            for (const ModElem& e : elems) {
                ++rep.checks;
                ModElem lhs = m.act_field(br, e);
                ModElem rhs = m.act_field(fields[i], m.act_field(fields[j], e)) -
                              m.act_field(fields[j], m.act_field(fields[i], e));
                if (lhs != rhs) {
                    rep.fail("rho([eta,mu]) != [rho(eta),rho(mu)] on eta=" + fields[i].str() +
                             ", mu=" + fields[j].str() + ", m=" + m.elem_str(e));
                }
            }
        }
    return rep;
}

std::optional<int> minimal_differentiability(const AVModule& m, int n_max, int degree) {
    if (n_max < 1) throw std::invalid_argument("minimal_differentiability: n_max must be >= 1");
    const ChartPtr& c = m.chart();
    std::vector<ModElem> elems = m.basis(degree);
    if (c->has_coordinates()) {
        for (int N = 1; N <= n_max; ++N) {
            bool ok = true;
            // Orders N and N+1 together rule out the rank-one blind spot.
            for (int tot = N; tot <= N + 1 && ok; ++tot)
                for (const Expo& p : multi_indices(c->dim, tot, tot))
                    for (int i = 0; i < c->dim && ok; ++i)
                        for (const ModElem& e : elems)
                            if (!jet_act(m, JetGen{p, i}, e).is_zero()) {
                                ok = false;
                                break;
                            }
            if (ok) return N;
        }
        return std::nullopt;
    }
    // No coordinates: test the defining alternating sum on sampled functions.
    std::vector<RingElem> monos = ring_monomials(c->ring, degree);
    std::vector<RingElem> fs = monos;
    std::vector<RingElem> small = ring_monomials(c->ring, 2);
    for (size_t i = 0; i < small.size(); ++i)
        for (size_t j = i + 1; j < small.size(); ++j) fs.push_back(small[i] + small[j]);
    std::vector<VecField> fields;
    for (const RingElem& g : small)
        for (int i = 0; i < c->dim; ++i) fields.push_back(VecField::basis(c, i, g));
    for (int N = 1; N <= n_max; ++N) {
        bool ok = true;
        for (const RingElem& f : fs)
            for (const VecField& eta : fields) {
                for (const ModElem& e : elems) {
                    ModElem acc = m.zero_elem();
                    for (int k = 0; k <= N; ++k) {
                        Rational coeff = rat_binomial(N, k);
                        if ((N - k) % 2 == 1) coeff = -coeff;
                        ModElem t = m.act_field(eta.scaled(f.pow(N - k)), e);
                        t = m.act_ring(f.pow(k), t);
                        acc = acc + t.scaled(coeff);
                    }
                    if (!acc.is_zero()) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) break;
            }
        if (ok) return N;
    }
    return std::nullopt;
}

}  // namespace avmod
