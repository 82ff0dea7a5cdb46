#include "avmod/gkdim.hpp"

#include <algorithm>
#include <cmath>

#include "avmod/errors.hpp"

namespace avmod {

std::vector<FrameOp> default_frame(const ChartPtr& c) {
    std::vector<FrameOp> out;
    for (int v = 0; v < c->ring->nvars(); ++v) out.push_back(RingElem::variable(c->ring, v));
    for (int i = 0; i < c->dim; ++i)
        out.push_back(VecField::basis(c, i, RingElem::one(c->ring)));
    return out;
}

std::vector<FrameOp> jet_frame(const ChartPtr& c, int s) {
    std::vector<FrameOp> out = default_frame(c);
    for (const JetGen& g : jet_gens_up_to(c->dim, s)) out.push_back(g);
    return out;
}

ModElem frame_apply(const AVModule& m, const FrameOp& op, const ModElem& e) {
    if (std::holds_alternative<RingElem>(op)) return m.act_ring(std::get<RingElem>(op), e);
    if (std::holds_alternative<VecField>(op)) return m.act_field(std::get<VecField>(op), e);
    return jet_act(m, std::get<JetGen>(op), e);
}

namespace {

// Coordinates of a module element in the monomial/pulse basis of its
// carriers: (slot, exponent, denominator power) -> coefficient.
using Key = std::tuple<int, Expo, int>;
using SparseVec = std::map<Key, Rational>;

SparseVec coords(const ModElem& e) {
    SparseVec v;
    for (size_t s = 0; s < e.comps.size(); ++s) {
        if (std::holds_alternative<RingElem>(e.comps[s])) {
            const RingElem& f = std::get<RingElem>(e.comps[s]);
            for (const auto& [ex, c] : f.terms()) v[{static_cast<int>(s), ex, f.den_power()}] = c;
        } else {
            const DeltaElem& d = std::get<DeltaElem>(e.comps[s]);
            for (const auto& [b, c] : d.terms) v[{static_cast<int>(s), b, 0}] = c;
        }
    }
    return v;
}

struct Reducer {
    std::map<Key, SparseVec> pivots;

    long rank() const { return static_cast<long>(pivots.size()); }

    /// Gaussian elimination against the stored pivot rows; true when the
    /// vector extends the span (and is then kept as a new pivot).
    bool insert(SparseVec v) {
        while (!v.empty()) {
            Key lead = v.rbegin()->first;
            auto it = pivots.find(lead);
            if (it == pivots.end()) {
                Rational inv = Rational(1) / v.rbegin()->second;
                for (auto& [k, c] : v) c = c * inv;
                pivots.emplace(std::move(lead), std::move(v));
                return true;
            }
            Rational c = v.rbegin()->second;
            for (const auto& [k, q] : it->second) {
                auto vt = v.find(k);
                if (vt == v.end()) {
                    v.emplace(k, -(c * q));
                } else {
                    vt->second -= c * q;
                    if (vt->second.is_zero()) v.erase(vt);
                }
            }
        }
        return false;
    }
};

}  // namespace

GrowthResult growth_series(const AVModule& m, const std::vector<FrameOp>& frame,
                           const std::vector<ModElem>& seed, int lmax) {
    Reducer red;
    std::vector<ModElem> frontier;
    for (const ModElem& e : seed)
        if (red.insert(coords(e))) frontier.push_back(e);
    GrowthResult res;
    res.dims.push_back(red.rank());
    for (int l = 1; l <= lmax; ++l) {
        std::vector<ModElem> next;
        for (const ModElem& e : frontier)
            for (const FrameOp& op : frame) {
                ModElem im = frame_apply(m, op, e);
                if (im.is_zero()) continue;
                if (red.insert(coords(im))) next.push_back(std::move(im));
            }
        res.dims.push_back(red.rank());
        frontier = std::move(next);
    }
    return res;
}

double growth_exponent(const std::vector<long>& dims, double tail_fraction, double* residual) {
    int lmax = static_cast<int>(dims.size()) - 1;
    if (lmax < 8)
        throw WindowTooSmall("growth_exponent: need a series up to l >= 8, have l = " +
                             std::to_string(lmax));
    int l0 = std::max(1, static_cast<int>(std::ceil(lmax * (1.0 - tail_fraction))));
    std::vector<double> xs, ys;
    for (int l = l0; l <= lmax; ++l) {
        if (dims[l] <= 0) continue;
        xs.push_back(std::log(static_cast<double>(l)));
        ys.push_back(std::log(static_cast<double>(dims[l])));
    }
    if (xs.size() < 2)
        throw WindowTooSmall("growth_exponent: tail keeps fewer than two points");
    double n = static_cast<double>(xs.size()), mx = 0, my = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    double slope = sxx > 0 ? sxy / sxx : 0.0;
    if (residual) {
        double acc = 0;
        for (size_t i = 0; i < xs.size(); ++i) {
            double err = ys[i] - (my + slope * (xs[i] - mx));
            acc += err * err;
        }
        *residual = std::sqrt(acc / n);
    }
    return slope;
}

double bernstein_exponent(const AVModule& m, int lmax) {
    GrowthResult g = growth_series(m, default_frame(m.chart()), {m.gen(0)}, lmax);
    return growth_exponent(g.dims);
}

}  // namespace avmod
