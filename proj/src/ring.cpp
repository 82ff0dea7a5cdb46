#include "avmod/ring.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace avmod {

Expo expo_add(const Expo& a, const Expo& b) {
    Expo r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Expo expo_sub(const Expo& a, const Expo& b) {
    Expo r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

int expo_total(const Expo& e) {
    int t = 0;
    for (int x : e) t += x < 0 ? -x : x;
    return t;
}

bool expo_leq(const Expo& a, const Expo& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

Rational expo_factorial(const Expo& e) {
    Rational r(1);
    for (int x : e) r *= rat_factorial(x);
    return r;
}

Rational expo_binomial(const Expo& n, const Expo& k) {
    Rational r(1);
    for (size_t i = 0; i < n.size(); ++i) r *= rat_binomial(n[i], k[i]);
    return r;
}

std::string expo_str(const Expo& e, const std::vector<std::string>& vars) {
    std::string s;
    for (size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!s.empty()) s += "*";
        s += vars[i];
        if (e[i] != 1) s += "^" + std::to_string(e[i]);
    }
    return s.empty() ? "1" : s;
}

std::vector<Expo> multi_indices(int n, int lo, int hi) {
    std::vector<Expo> out;
    Expo cur(n, 0);
    // Enumerate by total degree so the order is graded.
    for (int d = lo; d <= hi; ++d) {
        std::function<void(int, int)> rec = [&](int pos, int left) {
            if (pos == n - 1) {
                cur[pos] = left;
                out.push_back(cur);
                return;
            }
            for (int v = left; v >= 0; --v) {
                cur[pos] = v;
                rec(pos + 1, left - v);
            }
        };
        if (n == 0) {
            if (d == 0) out.push_back(cur);
            continue;
        }
        rec(0, d);
    }
    return out;
}

bool RingSpec::same_structure(const RingSpec& o) const {
    return vars == o.vars && invertible == o.invertible && rel_var == o.rel_var &&
           rel_deg == o.rel_deg && rel_rhs == o.rel_rhs && rel_var_inverted == o.rel_var_inverted;
}

static std::string bracket_name(const std::vector<std::string>& vars, const std::string& deco) {
    std::string s = "k[";
    for (size_t i = 0; i < vars.size(); ++i) {
        if (i) s += ",";
        s += vars[i];
    }
    return s + "]" + deco;
}

RingSpecPtr RingSpec::poly(const std::vector<std::string>& vars) {
    auto s = std::make_shared<RingSpec>();
    s->vars = vars;
    s->invertible.assign(vars.size(), false);
    s->name = bracket_name(vars, "");
    return s;
}

RingSpecPtr RingSpec::laurent(const std::vector<std::string>& vars) {
    auto s = std::make_shared<RingSpec>();
    s->vars = vars;
    s->invertible.assign(vars.size(), true);
    s->name = bracket_name(vars, "_loc");
    return s;
}

RingSpecPtr RingSpec::mixed(const std::vector<std::string>& vars, const std::vector<bool>& invertible) {
    auto s = std::make_shared<RingSpec>();
    s->vars = vars;
    s->invertible = invertible;
    s->name = bracket_name(vars, "_mixed");
    return s;
}

RingSpecPtr RingSpec::quotient(const std::vector<std::string>& vars, const std::vector<bool>& invertible,
                               int rel_var, int rel_deg, std::map<Expo, Rational> rel_rhs,
                               bool rel_var_inverted, std::string name) {
    auto s = std::make_shared<RingSpec>();
    s->vars = vars;
    s->invertible = invertible;
    s->rel_var = rel_var;
    s->rel_deg = rel_deg;
    s->rel_rhs = std::move(rel_rhs);
    s->rel_var_inverted = rel_var_inverted;
    s->name = std::move(name);
    if (rel_var < 0 || rel_var >= s->nvars() || rel_deg < 2)
        throw std::invalid_argument("RingSpec: bad relation");
    if (s->invertible[rel_var])
        throw std::invalid_argument("RingSpec: relation variable uses rel_var_inverted, not invertible");
    for (const auto& [e, c] : s->rel_rhs)
        if (e[rel_var] != 0) throw std::invalid_argument("RingSpec: rhs must not involve the relation variable");
    return s;
}

RingElem RingElem::constant(RingSpecPtr spec, const Rational& c) {
    RingElem r(std::move(spec));
    if (!c.is_zero()) r.terms_[Expo(r.spec_->nvars(), 0)] = c;
    return r;
}

RingElem RingElem::variable(RingSpecPtr spec, int i) {
    Expo e(spec->nvars(), 0);
    e[i] = 1;
    return monomial(std::move(spec), e, Rational(1));
}

RingElem RingElem::monomial(RingSpecPtr spec, const Expo& e, const Rational& c) {
    RingElem r(std::move(spec));
    if (!c.is_zero()) r.terms_[e] = c;
    r.normalize();
    return r;
}

RingElem RingElem::make(RingSpecPtr spec, std::map<Expo, Rational> terms, int den) {
    RingElem r(std::move(spec));
    r.terms_ = std::move(terms);
    r.den_ = den;
    r.normalize();
    return r;
}

RingElem ring_make_unchecked(RingSpecPtr spec, std::map<Expo, Rational> terms, int den) {
    RingElem r(std::move(spec));
    r.terms_ = std::move(terms);
    r.den_ = den;
    return r;
}

bool RingElem::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() != 1 || den_ != 0) return false;
    return expo_total(terms_.begin()->first) == 0;
}

Rational RingElem::constant_value() const {
    if (terms_.empty()) return Rational(0);
    if (!is_constant()) throw AvError("RingElem: not a constant: " + str());
    return terms_.begin()->second;
}

int RingElem::degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, expo_total(e));
    return d;
}

static void check_same(const RingSpecPtr& a, const RingSpecPtr& b) {
    if (a == b) return;
    if (!a || !b || !a->same_structure(*b))
        throw SpecMismatch("ring operands live in different rings");
}

void RingElem::normalize() {
    if (!spec_) throw AvError("RingElem: no ring attached");
    const RingSpec& s = *spec_;

    // Validate Laurent support.
    for (const auto& [e, c] : terms_) {
        for (int i = 0; i < s.nvars(); ++i) {
            if (e[i] >= 0) continue;
            if (i == s.rel_var) {
                if (!s.rel_var_inverted)
                    throw AvError("RingElem: negative power of non-invertible variable " + s.vars[i]);
            } else if (!s.invertible[i]) {
                throw AvError("RingElem: negative power of non-invertible variable " + s.vars[i]);
            }
        }
    }

    if (s.has_relation()) {
        const int v = s.rel_var;
        const int d = s.rel_deg;
        // Rewrite until every relation-variable exponent lies in [0, d).
        bool changed = true;
        while (changed) {
            changed = false;
            std::map<Expo, Rational> next;
            int extra_den = 0;
            // Clearing negative exponents multiplies a term by rhs^{b}/rhs^{b};
            // all terms must be lifted to the same denominator, so find the max
            // lift first.
            for (const auto& [e, c] : terms_)
                if (e[v] < 0) extra_den = std::max(extra_den, -e[v]);
            for (const auto& [e, c] : terms_) {
                if (e[v] >= 0 && e[v] < d && extra_den == 0) {
                    next[e] += c;
                    continue;
                }
                changed = true;
                if (e[v] < 0) {
                    // v^{-b} = v^{(d-1)b} / rhs^{b}; pad with rhs^{extra_den-b}
                    // to share the common denominator lift.
                    int b = -e[v];
                    Expo base = e;
                    base[v] = (d - 1) * b;
                    std::map<Expo, Rational> cur{{base, c}};
                    for (int rep = 0; rep < extra_den - b; ++rep) {
                        std::map<Expo, Rational> nx;
                        for (const auto& [e1, c1] : cur)
                            for (const auto& [e2, c2] : s.rel_rhs) nx[expo_add(e1, e2)] += c1 * c2;
                        cur = std::move(nx);
                    }
                    for (const auto& [e1, c1] : cur) next[e1] += c1;
                } else {
                    Expo base = e;
                    std::map<Expo, Rational> cur{{base, c}};
                    if (e[v] >= d) {
                        base[v] = e[v] - d;
                        cur = {};
                        for (const auto& [e2, c2] : s.rel_rhs) cur[expo_add(base, e2)] += c2 * c;
                    }
                    // Common-denominator lift for the non-negative terms.
                    for (int rep = 0; rep < extra_den; ++rep) {
                        std::map<Expo, Rational> nx;
                        for (const auto& [e1, c1] : cur)
                            for (const auto& [e2, c2] : s.rel_rhs) nx[expo_add(e1, e2)] += c1 * c2;
                        cur = std::move(nx);
                    }
                    for (const auto& [e1, c1] : cur) next[e1] += c1;
                }
            }
            terms_ = std::move(next);
            den_ += extra_den;
        }
    }

    for (auto it = terms_.begin(); it != terms_.end();)
        it = it->second.is_zero() ? terms_.erase(it) : std::next(it);

    if (terms_.empty()) {
        den_ = 0;
        return;
    }

    // Reduce the denominator where the numerator is exactly divisible by rhs.
    while (den_ > 0) {
        auto q = exact_divide(terms_, spec_->rel_rhs);
        if (!q) break;
        terms_ = std::move(*q);
        --den_;
    }
}

RingElem RingElem::operator+(const RingElem& o) const {
    check_same(spec_, o.spec_);
    const RingElem *lo = this, *hi = &o;
    if (lo->den_ > hi->den_) std::swap(lo, hi);
    // Lift the smaller denominator by multiplying through with rhs.
    std::map<Expo, Rational> lifted = lo->terms_;
    for (int rep = 0; rep < hi->den_ - lo->den_; ++rep) {
        std::map<Expo, Rational> nx;
        for (const auto& [e1, c1] : lifted)
            for (const auto& [e2, c2] : spec_->rel_rhs) nx[expo_add(e1, e2)] += c1 * c2;
        lifted = std::move(nx);
    }
    for (const auto& [e, c] : hi->terms_) lifted[e] += c;
    return make(spec_, std::move(lifted), hi->den_);
}

RingElem RingElem::operator-() const {
    RingElem r(*this);
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

RingElem RingElem::operator-(const RingElem& o) const { return *this + (-o); }

RingElem RingElem::operator*(const RingElem& o) const {
    check_same(spec_, o.spec_);
    std::map<Expo, Rational> prod;
    for (const auto& [e1, c1] : terms_)
        for (const auto& [e2, c2] : o.terms_) prod[expo_add(e1, e2)] += c1 * c2;
    return make(spec_, std::move(prod), den_ + o.den_);
}

RingElem RingElem::operator*(const Rational& c) const {
    if (c.is_zero()) return zero(spec_);
    RingElem r(*this);
    for (auto& [e, v] : r.terms_) v *= c;
    return r;
}

bool RingElem::operator==(const RingElem& o) const {
    check_same(spec_, o.spec_);
    return den_ == o.den_ && terms_ == o.terms_;
}

RingElem RingElem::pow(long e) const {
    if (e == 0) return one(spec_);
    if (e < 0) {
        auto inv = try_invert();
        if (!inv) throw AvError("RingElem: negative power of non-invertible element " + str());
        return inv->pow(-e);
    }
    RingElem r = one(spec_);
    RingElem b = *this;
    while (e > 0) {
        if (e & 1) r *= b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

std::optional<RingElem> RingElem::try_invert() const {
    if (den_ == 0 && terms_.size() == 1) {
        const auto& [e, c] = *terms_.begin();
        Expo inv_e(e.size());
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) {
                inv_e[i] = 0;
                continue;
            }
            bool ok = (static_cast<int>(i) == spec_->rel_var) ? spec_->rel_var_inverted
                                                              : spec_->invertible[i];
            if (!ok) return std::nullopt;
            inv_e[i] = -e[i];
        }
        return monomial(spec_, inv_e, Rational(1) / c);
    }
    // A pure denominator power 1/rhs^k inverts to rhs^k; more general elements
    // are out of scope.
    if (den_ > 0 && terms_ == spec_->rel_rhs) {
        // terms/rhs^den = rhs^{1-den}; invertible iff it is rhs^{+-k}.
        RingElem rhs_elem = make(spec_, spec_->rel_rhs, 0);
        return rhs_elem.pow(den_ - 1);
    }
    return std::nullopt;
}

RingElem RingElem::in_spec(const RingSpecPtr& target) const {
    if (spec_ == target) return *this;
    const RingSpec& a = *spec_;
    const RingSpec& b = *target;
    bool ok = a.vars == b.vars && a.rel_var == b.rel_var && a.rel_deg == b.rel_deg &&
              a.rel_rhs == b.rel_rhs;
    if (ok)
        for (int i = 0; i < a.nvars(); ++i)
            if (a.invertible[i] && !b.invertible[i]) ok = false;
    if (ok && a.rel_var_inverted && !b.rel_var_inverted) ok = false;
    if (!ok)
        throw SpecMismatch("cannot view element of " + a.name + " inside " + b.name);
    return make(target, terms_, den_);
}

RingElem derive(const RingElem& f, const Derivation& d) {
    const RingSpecPtr& spec = f.spec();
    if (static_cast<int>(d.images.size()) != spec->nvars())
        throw SpecMismatch("derivation has wrong arity for " + spec->name);
    // Leibniz on the numerator term map.
    auto leibniz = [&](const std::map<Expo, Rational>& terms) {
        RingElem acc = RingElem::zero(spec);
        for (const auto& [e, c] : terms) {
            for (int i = 0; i < spec->nvars(); ++i) {
                if (e[i] == 0 || d.images[i].is_zero()) continue;
                Expo shifted = e;
                shifted[i] -= 1;
                acc += RingElem::make(spec, {{shifted, c * Rational(e[i])}}, 0) * d.images[i];
            }
        }
        return acc;
    };
    RingElem dn = leibniz(f.terms());
    int k = f.den_power();
    if (k == 0) return dn;
    // Quotient rule for value N / q^k with q = rhs.
    RingElem q = RingElem::make(spec, spec->rel_rhs, 0);
    RingElem n = RingElem::make(spec, f.terms(), 0);
    RingElem dq = leibniz(spec->rel_rhs);
    RingElem lhs = RingElem::make(spec, dn.terms(), dn.den_power() + k);
    RingElem rhs = RingElem::make(spec, (n * dq * Rational(k)).terms(),
                                  (n * dq).den_power() + k + 1);
    return lhs - rhs;
}

std::optional<std::map<Expo, Rational>> exact_divide(const std::map<Expo, Rational>& num,
                                                     const std::map<Expo, Rational>& div) {
    if (div.empty()) return std::nullopt;
    if (num.empty()) return std::map<Expo, Rational>{};
    // Shift both so all exponents are nonnegative, then do lex long division.
    size_t n = num.begin()->first.size();
    Expo shift(n, 0);
    auto track = [&](const std::map<Expo, Rational>& m) {
        for (const auto& [e, c] : m)
            for (size_t i = 0; i < n; ++i) shift[i] = std::min(shift[i], e[i]);
    };
    track(num);
    track(div);
    auto shifted = [&](const std::map<Expo, Rational>& m) {
        std::map<Expo, Rational> r;
        for (const auto& [e, c] : m) r[expo_sub(e, shift)] = c;
        return r;
    };
    std::map<Expo, Rational> rem = shifted(num);
    std::map<Expo, Rational> ds = shifted(div);
    const auto& [le, lc] = *ds.rbegin();  // lex-leading divisor term
    std::map<Expo, Rational> quot;
    while (!rem.empty()) {
        const auto& [re, rc] = *rem.rbegin();
        Expo qe = expo_sub(re, le);
        if (std::any_of(qe.begin(), qe.end(), [](int x) { return x < 0; })) return std::nullopt;
        Rational qc = rc / lc;
        // Both maps were shifted by the same monomial, so the quotient needs
        // no unshift.
        quot[qe] += qc;
        for (const auto& [e, c] : ds) {
            auto& slot = rem[expo_add(qe, e)];
            slot -= qc * c;
            if (slot.is_zero()) rem.erase(expo_add(qe, e));
        }
    }
    return quot;
}

RingElem substitute(const RingElem& f, const std::vector<RingElem>& images, const RingSpecPtr& target) {
    if (static_cast<int>(images.size()) != f.spec()->nvars())
        throw SpecMismatch("substitute: wrong number of images");
    RingElem acc = RingElem::zero(target);
    for (const auto& [e, c] : f.terms()) {
        RingElem term = RingElem::constant(target, c);
        for (size_t i = 0; i < images.size(); ++i)
            if (e[i] != 0) term *= images[i].pow(e[i]);
        acc += term;
    }
    if (f.den_power() > 0) {
        RingElem q = RingElem::make(f.spec(), f.spec()->rel_rhs, 0);
        RingElem qi = substitute(q, images, target);
        acc *= qi.pow(-f.den_power());
    }
    return acc;
}

std::vector<RingElem> ring_monomials(const RingSpecPtr& spec, int maxdeg) {
    std::vector<RingElem> out;
    int n = spec->nvars();
    std::vector<std::pair<int, int>> range(n);
    for (int i = 0; i < n; ++i) {
        if (i == spec->rel_var)
            range[i] = {0, std::min(maxdeg, spec->rel_deg - 1)};
        else if (spec->invertible[i])
            range[i] = {-maxdeg, maxdeg};
        else
            range[i] = {0, maxdeg};
    }
    Expo cur(n, 0);
    std::function<void(int, int)> rec = [&](int pos, int budget) {
        if (pos == n) {
            out.push_back(RingElem::monomial(spec, cur, Rational(1)));
            return;
        }
        for (int v = range[pos].first; v <= range[pos].second; ++v) {
            int cost = v < 0 ? -v : v;
            if (cost > budget) continue;
            cur[pos] = v;
            rec(pos + 1, budget - cost);
        }
        cur[pos] = 0;
    };
    rec(0, maxdeg);
    // Graded then map order, so listings are stable across runs.
    std::stable_sort(out.begin(), out.end(), [](const RingElem& a, const RingElem& b) {
        int da = a.degree(), db = b.degree();
        if (da != db) return da < db;
        return a.terms().begin()->first < b.terms().begin()->first;
    });
    return out;
}

std::string RingElem::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        Rational cc = c;
        if (first) {
            if (cc.sign() < 0) {
                os << "-";
                cc = -cc;
            }
        } else {
            os << (cc.sign() < 0 ? " - " : " + ");
            if (cc.sign() < 0) cc = -cc;
        }
        first = false;
        std::string mono = expo_str(e, spec_->vars);
        if (mono == "1")
            os << cc.str();
        else if (cc.is_one())
            os << mono;
        else
            os << cc.str() << "*" << mono;
    }
    std::string s = os.str();
    if (den_ > 0) {
        RingElem q = ring_make_unchecked(spec_, spec_->rel_rhs, 0);
        s = "(" + s + ") / (" + q.str() + ")";
        if (den_ > 1) s += "^" + std::to_string(den_);
    }
    return s;
}

}  // namespace avmod
