#pragma once

#include <variant>
#include <vector>

#include "avmod/avmodule.hpp"
#include "avmod/jets.hpp"

namespace avmod {

/// One factor of a product in the transform algebra: a multiplication or a
/// vector field.
using SmashFactor = std::variant<RingElem, VecField>;

/// lead * f_1 * f_2 * ... * f_k, composed left to right (so the rightmost
/// factor acts first on a module element).
struct SmashWord {
    ChartPtr chart;
    RingElem lead;
    std::vector<SmashFactor> factors;

    static SmashWord unit(const ChartPtr& c);

    std::string str() const;
};

using SmashSum = std::vector<SmashWord>;

/// Concatenation w1 * w2 (no reordering).
SmashWord smash_concat(const SmashWord& a, const SmashWord& b);

/// Rewrites a word as a sum of words whose factors are all vector fields, by
/// moving ring factors left across fields with eta * g = g * eta + eta(g).
SmashSum smash_normalize(const SmashWord& w);

/// Evaluates a word or sum on a module element.
ModElem smash_eval(const AVModule& m, const SmashWord& w, const ModElem& e);
ModElem smash_eval(const AVModule& m, const SmashSum& s, const ModElem& e);

/// The local structure map into operators with jet coefficients:
///   phi(g # f d_i) = g f d_i (x) 1 + sum_{|k| >= 1} (1/k!) g (d^k f) (x) X^k d_i,
/// extended multiplicatively; jets truncate at degree trunc. Chart must have
/// coordinates.
JetPoly<DiffOp> phi(const SmashWord& w, int trunc);
JetPoly<DiffOp> phi(const SmashSum& s, int trunc);

/// Inverse images of the generators:
///   psi(g d_i (x) 1)       = g # d_i
///   psi(g (x) X^p d_i)     = sum_{k <= p} (-1)^{|p|-|k|} binom(p,k)
///                                   (g x^{p-k}) # (x^k d_i)
SmashSum psi_field(const ChartPtr& chart, const RingElem& g, int dir);
SmashSum psi_jet(const ChartPtr& chart, const RingElem& g, const JetGen& jet);

}  // namespace avmod
