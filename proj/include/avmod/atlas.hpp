#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "avmod/avmodule.hpp"
#include "avmod/chart.hpp"
#include "avmod/diffop.hpp"
#include "avmod/jets.hpp"
#include "avmod/matrix.hpp"
#include "avmod/rep.hpp"

namespace avmod {

/// Change of presentation between two charts over their common overlap.
/// Elements over chart a first embed into from_overlap, then `map` rewrites
/// them in chart b's presentation (to_overlap). coord_images are the a-side
/// coordinates written out on the b side; both overlap charts carry
/// coordinates so jacobians and Taylor data are available.
struct Transition {
    ChartPtr from_overlap;
    ChartPtr to_overlap;
    std::function<RingElem(const RingElem&)> map;
    std::vector<RingElem> coord_images;
};

struct Atlas {
    std::string name;
    std::vector<ChartPtr> charts;
    std::map<std::pair<int, int>, Transition> transitions;

    /// Throws NoOverlap when the pair was not declared.
    const Transition& transition(int a, int b) const;
};

/// Projective line: k[x] and k[y] glued over the torus by x = 1/y.
Atlas atlas_p1();
/// Multiplicative group presented redundantly in t and s = 1/t.
Atlas atlas_gm();
/// Unit circle: coordinate-x and coordinate-y charts glued where both x and
/// 1 - x^2 are invertible.
Atlas atlas_circle();
/// The cubic curve y^2 = t^3 - t as a single chart (no overlaps).
Atlas atlas_cubic();
/// Affine plane re-coordinatized by the shear (u, v) = (x, y + x^2); both
/// charts are global, so the overlap is the plane itself. Exercises the
/// several-variable laws that the one-dimensional atlases cannot.
Atlas atlas_shear();

/// J(i, j) = d_j^{to}(x_i written on the b side): entries over the to-side
/// overlap ring.
RMatrix jacobian(const Atlas& at, int a, int b);

/// How section components transform: the matrix of the transition jacobian
/// acting through the construction of the representation (minors for
/// exterior powers, induced substitution for symmetric powers, inverse
/// transpose for duals, determinant powers, restrictions to highest-weight
/// components). Throws NotIntegrable when the representation has a
/// fractional determinant twist.
RMatrix rep_lift(const Rep& r, const RMatrix& jac);

/// comps are over chart a's ring (or already over the overlap); the result
/// is over the b-side overlap presentation.
std::vector<RingElem> transform_section(const Atlas& at, int a, int b, const Rep& r,
                                        const std::vector<RingElem>& comps);

/// Chart law for fields acting with charge lambda: f d_{x_i} maps to its
/// push-forward plus a lambda-proportional multiplication correction from
/// the second derivatives of the transition.
DiffOp transform_op_charged(const Atlas& at, int a, int b, const Rational& lambda,
                            const VecField& v);

/// Image of a jet field g X^m d_{X_p} under the transition: substitute
/// X_i -> (a-side coordinates)(y + Y) - (a-side coordinates)(y) and push the
/// direction forward at the displaced point. The Y-constant slice is an
/// honest field on the b side; jet coefficients keep degrees <= trunc.
struct JetSection {
    std::vector<RingElem> const_part;
    std::map<JetGen, RingElem> jets;
};
JetSection transform_jet(const Atlas& at, int a, int b, const RingElem& coeff,
                         const Expo& m, int p, int trunc);

/// Exact invariance of the degree-k Casimir word under conjugating every
/// matrix unit with the two jacobian factors of the transition. `sabotage`
/// drops one factor, which must break invariance whenever the jacobian is
/// not the identity.
bool casimir_invariant(const Atlas& at, int a, int b, int k, bool sabotage = false);

/// Looks for an integer c with |c| <= cmax such that multiplication by the
/// c-th coordinate power intertwines the charge-lambda module built on the
/// second torus chart with the first chart's module read through the
/// coordinate change, testing fields of degree |k| <= kmax on monomials of
/// degree |l| <= lmax. The two are isomorphic exactly when 2*lambda is an
/// integer, with c = 2*lambda.
std::optional<int> charged_intertwiner_power(const Rational& lambda, int cmax, int kmax,
                                             int lmax);

/// What kind of object rides along the transitions in a consistency check.
struct TransitionRule {
    enum class Kind { Section, Rep, DetPower, Charged, Jet };
    Kind kind = Kind::Section;
    RepExprPtr rep;   // Rep
    Rational lambda;  // DetPower / Charged
    int s = 0;        // Jet truncation order

    std::string str() const;
};

/// Round-trip consistency over every declared transition, on monomials up to
/// the degree bound: sections (optionally twisted by a representation or a
/// determinant power) must return to themselves, charged operators must
/// round-trip and preserve brackets, jets must round-trip at the rule's
/// truncation, and for representation rules transporting an element then
/// acting must agree with acting then transporting. Failures are reported
/// with witnesses rather than thrown.
CheckReport glue_check(const Atlas& at, const TransitionRule& rule, int degree);

}  // namespace avmod
