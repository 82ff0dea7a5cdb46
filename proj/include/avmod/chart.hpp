#pragma once

#include <memory>
#include <string>
#include <vector>

#include "avmod/ring.hpp"

namespace avmod {

/// A coordinate patch: a ring of functions together with a frame of
/// derivations d_1, ..., d_dim spanning the vector fields over it.
///
/// When the patch carries honest local coordinates (params nonempty),
/// params[i] names the ring variable serving as the i-th coordinate and d_i
/// is the corresponding partial derivative; Taylor expansion is available.
/// Curves like the nodal-free cubic expose a single global derivation
/// instead and leave params empty.
struct Chart {
    std::string name;
    RingSpecPtr ring;
    int dim = 0;
    std::vector<Derivation> frame;  // size dim; required pairwise commuting
    std::vector<int> params;        // coordinate variable indices, empty if none

    bool has_coordinates() const { return !params.empty(); }
    bool same_structure(const Chart& o) const;
};

using ChartPtr = std::shared_ptr<const Chart>;

/// Verifies frame arity and pairwise commutativity, then freezes the chart.
ChartPtr make_chart(Chart c);

/// Affine space: k[x...] with coordinate partials. Names are x; x,y; x,y,z;
/// x1..xn beyond three, or the caller's choice.
ChartPtr chart_affine(int n);
ChartPtr chart_affine(const std::vector<std::string>& vars);

/// Torus: all variables inverted.
ChartPtr chart_torus(const std::vector<std::string>& vars);

/// The plane curve y^2 = x^3 - x with its ring of regular functions
/// k[x,y]/(y^2 - x^3 + x) (variables named t, y) and the global derivation
/// tau = 2y d/dt + (3t^2 - 1) d/dy. Derivations of this ring form a free
/// rank-one module generated by tau, so the chart frame is {tau}.
ChartPtr chart_cubic_curve();
/// Same curve localized at y (denominators are powers of t^3 - t).
ChartPtr chart_cubic_curve_loc();

/// Circle ring k[x,y]/(y^2 - (1 - x^2)). Three charts: coordinate x with y
/// inverted, coordinate y with x inverted, and their common localization.
ChartPtr chart_circle_x();
ChartPtr chart_circle_y();
ChartPtr chart_circle_xy_from_x();  // overlap presented with coordinate x
ChartPtr chart_circle_xy_from_y();  // overlap presented with coordinate y

/// One-variable Laurent chart, e.g. the torus factor of the projective line.
ChartPtr chart_laurent1(const std::string& var);

/// Localization k[x...,x_i^{-1}] of affine space at one coordinate.
ChartPtr chart_affine_loc(int n, int inverted);

/// Coordinate chart with an arbitrary inversion pattern: variables with
/// inverted[i] set are Laurent, the rest polynomial.
ChartPtr chart_mixed(const std::vector<std::string>& vars, const std::vector<bool>& inverted);

std::vector<std::string> default_var_names(int n);

/// Applies the i-th frame derivation.
RingElem chart_derive(const ChartPtr& c, int i, const RingElem& f);

/// Iterated frame derivative d^k f (frame must commute, which make_chart
/// enforces, so the order of application is immaterial).
RingElem chart_derive(const ChartPtr& c, const Expo& k, const RingElem& f);

/// Taylor coefficients of f at a displaced point: the map k -> (1/k!) d^k f
/// over 0 <= |k| <= order, for charts with coordinates.
std::map<Expo, RingElem> taylor_coeffs(const ChartPtr& c, const RingElem& f, int order);

}  // namespace avmod
