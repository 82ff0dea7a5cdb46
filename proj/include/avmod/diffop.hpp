#pragma once

#include <map>

#include "avmod/chart.hpp"

namespace avmod {

/// Differential operator in normal form: sum_b f_b d^b with ring coefficients
/// on the left and d the (commuting) chart frame. Exponent b has one slot per
/// frame derivation.
class DiffOp {
public:
    explicit DiffOp(ChartPtr chart) : chart_(std::move(chart)) {}
    static DiffOp zero(ChartPtr chart) { return DiffOp(std::move(chart)); }
    static DiffOp mult(const RingElem& f, ChartPtr chart);  // multiplication by f
    static DiffOp partial(ChartPtr chart, int i);
    static DiffOp term(ChartPtr chart, const Expo& b, const RingElem& coeff);

    const ChartPtr& chart() const { return chart_; }
    const std::map<Expo, RingElem>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int order() const;

    DiffOp operator+(const DiffOp& o) const;
    DiffOp operator-(const DiffOp& o) const;
    DiffOp operator-() const;
    /// Composition; normal-ordered via the Leibniz rule.
    DiffOp operator*(const DiffOp& o) const;
    DiffOp scaled(const Rational& c) const;
    DiffOp scaled(const RingElem& f) const;  // left multiplication by f
    bool operator==(const DiffOp& o) const;
    bool operator!=(const DiffOp& o) const { return !(*this == o); }

    RingElem apply(const RingElem& f) const;

    std::string str() const;

private:
    ChartPtr chart_;
    std::map<Expo, RingElem> terms_;

    void add_term(const Expo& b, const RingElem& f);
};

DiffOp commutator(const DiffOp& a, const DiffOp& b);

/// Vector field sum_i comps[i] d_i over a chart.
struct VecField {
    ChartPtr chart;
    std::vector<RingElem> comps;

    static VecField zero(ChartPtr c);
    /// f d_i.
    static VecField basis(ChartPtr c, int i, const RingElem& f);

    RingElem apply(const RingElem& g) const;
    DiffOp as_op() const;
    VecField operator+(const VecField& o) const;
    VecField scaled(const RingElem& f) const;
    bool is_zero() const;
    std::string str() const;
};

/// [a, b] computed directly on components.
VecField vf_bracket(const VecField& a, const VecField& b);

/// Finitely supported distribution at a point of affine n-space: a rational
/// combination of partial-derivative pulses sum_b c_b d^b delta_p.
struct DeltaElem {
    std::vector<Rational> point;
    std::map<Expo, Rational> terms;

    bool is_zero() const { return terms.empty(); }
    DeltaElem operator+(const DeltaElem& o) const;
    DeltaElem scaled(const Rational& c) const;
    bool operator==(const DeltaElem& o) const { return point == o.point && terms == o.terms; }
    std::string str() const;
};

/// delta itself at p.
DeltaElem delta_at(const std::vector<Rational>& p);

/// Action of an operator over affine space on pulses at p, via
///   x_i . d^b delta = p_i d^b delta - b_i d^(b - e_i) delta
///   d_i . d^b delta = d^(b + e_i) delta.
DeltaElem delta_act(const DiffOp& op, const DeltaElem& m);

}  // namespace avmod
