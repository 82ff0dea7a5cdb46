#pragma once

#include <variant>
#include <vector>

#include "avmod/avmodule.hpp"
#include "avmod/jets.hpp"

namespace avmod {

/// One generator of the filtration: multiplication by a ring element, a
/// vector field, or a jet generator (the latter needs chart coordinates).
using FrameOp = std::variant<RingElem, VecField, JetGen>;

/// The standard generating set of a coordinate chart: all coordinate
/// functions and all frame fields.
std::vector<FrameOp> default_frame(const ChartPtr& c);
/// The standard set extended by the jet generators up to degree s.
std::vector<FrameOp> jet_frame(const ChartPtr& c, int s);

ModElem frame_apply(const AVModule& m, const FrameOp& op, const ModElem& e);

/// dims[l] = dim of F^l applied to the seed vectors, where F is spanned by 1
/// and the frame ops, for l = 0..lmax. Exact sparse rational row reduction.
struct GrowthResult {
    std::vector<long> dims;
};
GrowthResult growth_series(const AVModule& m, const std::vector<FrameOp>& frame,
                           const std::vector<ModElem>& seed, int lmax);

/// Estimates the growth exponent gamma with dims[l] ~ c l^gamma: the
/// least-squares slope of log dims[l] against log l over the tail fraction
/// of the indices (default: the last quarter). `residual` (optional out)
/// reports the root-mean-square deviation of the fitted line. A constant
/// tail estimates 0. Throws WindowTooSmall when the series has fewer than
/// nine entries or the tail keeps fewer than two points.
double growth_exponent(const std::vector<long>& dims, double tail_fraction = 0.25,
                       double* residual = nullptr);

/// Measures the growth exponent of the module over its default frame from
/// its first generator and compares with the chart dimension lower bound:
/// holonomic modules sit exactly at the bound. Returns the measured exponent.
double bernstein_exponent(const AVModule& m, int lmax);

}  // namespace avmod
