#pragma once

#include <string>
#include <vector>

#include "avmod/atlas.hpp"
#include "avmod/avmodule.hpp"
#include "avmod/gkdim.hpp"

namespace avmod {

/// Parses the coefficient-representation language:
///
///   R ::= natural(n) | dual(R) | ext(k, n) | sym(k, n)
///       | det(q) | det(n, q) | tensor(R, R) | oplus(R, R)
///       | hwc(R, [w1, ..., wn])
///
/// Numbers are rationals like 2, -1, 1/2. det(q) with a single argument
/// infers the rank from a sibling factor, and falls back to `default_n`
/// when nothing else pins it down.
RepExprPtr parse_rep_expr(const std::string& text, int default_n = 1);

/// Parses and constructs a module:
///
///   M ::= k[v1, v2^-1, ...]                     functions on a chart
///       | delta(p1, ..., pn)                    distributions at a point
///       | tensor(M, R)                          coefficient twist
///       | charged(M, q)                         charge-term twist
///       | gauge(elliptic [, R])                 ideal gauge on the cubic curve
///       | alpha(q)                              rank-two cubic-curve family
///       | rudakov([p1, ..., pn], R)             twisted point distributions
///       | dual(M) | mtensor(M, M)
///       | fixture(gauge | charged | rep)        deliberately broken controls
AVModulePtr parse_module_expr(const std::string& text);

/// Frame descriptions for growth measurements: "default" or "jets(s)".
std::vector<FrameOp> parse_frame_spec(const std::string& text, const ChartPtr& chart);

/// Overlap-consistency rules: section | det:<q> | rep:<R> | charged:<q>
/// | jet:<s>. The representation form resolves unranked det factors against
/// `default_n`.
TransitionRule parse_transition_rule(const std::string& text, int default_n = 1);

/// The stock atlases: p1, gm, circle, elliptic-affine.
Atlas atlas_by_name(const std::string& name);

}  // namespace avmod
