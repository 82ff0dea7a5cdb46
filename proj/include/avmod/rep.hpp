#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "avmod/jets.hpp"
#include "avmod/matrix.hpp"

namespace avmod {

struct RepExpr;
using RepExprPtr = std::shared_ptr<const RepExpr>;

/// Construction tree for a finite-dimensional gl_n representation. Kept
/// alongside the built matrices because chart transition functions need to
/// act through the same construction (the group-level avatar of the rep).
struct RepExpr {
    enum class Kind { Natural, Dual, Ext, Sym, Tensor, DetPower, Hwc, Oplus };
    Kind kind;
    int n = 0;
    int k = 0;                     // Ext / Sym degree
    Rational lambda;               // DetPower exponent
    std::vector<Rational> weight;  // Hwc target weight
    std::vector<RepExprPtr> args;

    static RepExprPtr natural(int n);
    static RepExprPtr dual(RepExprPtr a);
    static RepExprPtr ext(int k, int n);
    static RepExprPtr sym(int k, int n);
    static RepExprPtr tensor(RepExprPtr a, RepExprPtr b);
    static RepExprPtr det_power(int n, const Rational& lambda);
    static RepExprPtr hwc(RepExprPtr a, std::vector<Rational> weight);
    static RepExprPtr oplus(RepExprPtr a, RepExprPtr b);

    std::string str() const;
};

/// A gl_n representation by exact rational matrices, validated against the
/// commutation relations on construction.
class Rep {
public:
    int n = 0;
    int dim = 0;
    RepExprPtr expr;
    std::vector<std::string> labels;
    /// Known when the representation is irreducible by construction.
    std::optional<std::vector<Rational>> highest_weight;
    /// Whether transition matrices can act: every det-power ingredient is an
    /// integer power.
    bool integrable = true;

    const QMatrix& E(int i, int j) const { return mats_[i * n + j]; }

    /// Data for restrictions cut out of a parent representation.
    std::shared_ptr<const Rep> hwc_parent;
    std::vector<std::vector<Rational>> hwc_basis;

    /// Builds without the commutation check; only for deliberately broken
    /// test fixtures.
    static Rep unchecked(int n, std::vector<QMatrix> mats, RepExprPtr expr);

    friend Rep rep_build(const RepExprPtr&);

private:
    std::vector<QMatrix> mats_;  // row-major n x n grid of dim x dim blocks
};

/// Builds and validates the representation described by the expression.
Rep rep_build(const RepExprPtr& e);

/// Basis order of the k-th exterior power: k-subsets of {0..n-1},
/// lexicographic. Shared by the rep builder and the transition lift.
std::vector<std::vector<int>> ext_basis_subsets(int n, int k);

/// Checks [E(i,j), E(k,l)] = delta_jk E(i,l) - delta_li E(k,j) on all index
/// tuples; returns a witness string on failure.
std::optional<std::string> rep_check_relations(const Rep& r);

/// The degree-k Casimir: sum over cyclic words E_{i1 i2} E_{i2 i3} ... E_{ik i1}.
QMatrix casimir(const Rep& r, int k);

/// Scalars by which the Casimirs 1..kmax act; throws NotScalar if one of them
/// is not a scalar matrix.
std::vector<Rational> central_character(const Rep& r, int kmax);
std::optional<std::vector<Rational>> try_central_character(const Rep& r, int kmax);

/// delta_{il} E(l,j) - E(l,i) E(l,j): the operator that must vanish for the
/// coefficient representation of a differentiable tensor module. Indices are
/// 0-based; no summation.
QMatrix obstruction_op(const Rep& r, int i, int j, int l);

/// Returns k when the representation passes every obstruction test and has
/// the dimension and central character of the k-th exterior power of the
/// natural representation; nullopt otherwise.
std::optional<int> exterior_power_type(const Rep& r);

/// Representation of the jet Lie algebra truncated at degree s: one matrix
/// per generator of degree <= s.
struct JetRep {
    int n = 0;
    int s = 0;
    int dim = 0;
    std::vector<std::string> labels;
    std::map<JetGen, QMatrix> action;

    const QMatrix& at(const JetGen& g) const;
};

/// Extends a gl_n representation to jets by letting every generator of
/// positive degree act as zero (the quotient map to degree zero).
JetRep jet_rep_from_gl(const Rep& r, int s = 0);

/// Bracket-compatibility check over all generator pairs; witness on failure.
std::optional<std::string> jet_rep_check(const JetRep& w);

}  // namespace avmod
