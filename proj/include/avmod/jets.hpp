#pragma once

#include <map>
#include <tuple>
#include <vector>

#include "avmod/diffop.hpp"
#include "avmod/errors.hpp"
#include "avmod/rational.hpp"
#include "avmod/ring.hpp"

namespace avmod {

/// Generator X^k d_{X_i} of the positive-degree truncated current algebra:
/// polynomial vector fields on the formal neighborhood with the constant
/// fields removed. Graded by |k| - 1.
struct JetGen {
    Expo expo;  // k, with |k| >= 1
    int dir;    // i

    int degree() const { return expo_total(expo) - 1; }

    friend bool operator==(const JetGen& a, const JetGen& b) {
        return a.expo == b.expo && a.dir == b.dir;
    }
    // Degree first so PBW words sort by grading, then exponent, then slot.
    friend bool operator<(const JetGen& a, const JetGen& b) {
        return std::make_tuple(a.degree(), a.expo, a.dir) <
               std::make_tuple(b.degree(), b.expo, b.dir);
    }

    std::string str(const std::vector<std::string>& vars = {}) const;
};

/// [X^a d_i, X^b d_j] = b_i X^{a+b-e_i} d_j - a_j X^{a+b-e_j} d_i, with terms
/// of degree > trunc discarded.
std::vector<std::pair<JetGen, Rational>> jet_bracket(const JetGen& a, const JetGen& b, int trunc);

/// All generators with degree <= trunc, sorted.
std::vector<JetGen> jet_gens_up_to(int n, int trunc);

/// For a degree-zero generator X_j d_i returns the matrix-unit index pair
/// (j, i); throws DegreeError otherwise.
std::pair<int, int> gl_embed(const JetGen& g);

/// Nondecreasing product of generators: a PBW monomial. Empty = identity.
using JetMono = std::vector<JetGen>;

/// Straightens an arbitrary word into a combination of PBW monomials,
/// applying jet_bracket at each inversion. Truncation drops bracket targets
/// of degree > trunc.
std::map<JetMono, Rational> pbw_straighten(const JetMono& word, int trunc);

namespace detail {
inline Rational coeff_scale(const Rational& v, const Rational& c) { return v * c; }
inline RingElem coeff_scale(const RingElem& v, const Rational& c) { return v * c; }
inline DiffOp coeff_scale(const DiffOp& v, const Rational& c) { return v.scaled(c); }
}  // namespace detail

/// Element of the enveloping algebra of the truncated jet Lie algebra with
/// coefficients in C (rationals, ring elements, or differential operators).
/// Coefficients commute past the generators, which pins down the product on
/// mixed terms.
template <class C>
class JetPoly {
public:
    explicit JetPoly(int trunc) : trunc_(trunc) {}

    static JetPoly unit(int trunc, const C& c) {
        JetPoly p(trunc);
        p.add_term({}, c);
        return p;
    }
    static JetPoly gen(int trunc, const JetGen& g, const C& c) {
        if (g.degree() > trunc) return JetPoly(trunc);
        JetPoly p(trunc);
        p.add_term({g}, c);
        return p;
    }

    int trunc() const { return trunc_; }
    const std::map<JetMono, C>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const JetMono& m, const C& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
            return;
        }
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }

    JetPoly operator+(const JetPoly& o) const {
        check(o);
        JetPoly r = *this;
        for (const auto& [m, c] : o.terms_) r.add_term(m, c);
        return r;
    }

    JetPoly operator-(const JetPoly& o) const {
        check(o);
        JetPoly r = *this;
        for (const auto& [m, c] : o.terms_) r.add_term(m, detail::coeff_scale(c, Rational(-1)));
        return r;
    }

    JetPoly operator*(const JetPoly& o) const {
        check(o);
        JetPoly r(trunc_);
        for (const auto& [m1, c1] : terms_)
            for (const auto& [m2, c2] : o.terms_) {
                C c = c1 * c2;
                if (c.is_zero()) continue;
                JetMono w = m1;
                w.insert(w.end(), m2.begin(), m2.end());
                for (const auto& [mono, q] : pbw_straighten(w, trunc_))
                    r.add_term(mono, detail::coeff_scale(c, q));
            }
        return r;
    }

    JetPoly scaled(const Rational& q) const {
        JetPoly r(trunc_);
        if (q.is_zero()) return r;
        for (const auto& [m, c] : terms_) r.add_term(m, detail::coeff_scale(c, q));
        return r;
    }

    bool operator==(const JetPoly& o) const {
        check(o);
        return terms_ == o.terms_;
    }
    bool operator!=(const JetPoly& o) const { return !(*this == o); }

    std::string str() const;

private:
    int trunc_;
    std::map<JetMono, C> terms_;

    void check(const JetPoly& o) const {
        if (trunc_ != o.trunc_)
            throw TruncationMismatch("jet polynomials truncated at different orders");
    }
};

std::string jet_mono_str(const JetMono& m);

template <class C>
std::string JetPoly<C>::str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : terms_) {
        if (!s.empty()) s += " + ";
        s += "(";
        if constexpr (requires { c.str(); })
            s += c.str();
        else
            s += "?";
        s += ")";
        if (!m.empty()) s += "*" + jet_mono_str(m);
    }
    return s;
}

}  // namespace avmod
