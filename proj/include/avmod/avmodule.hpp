#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "avmod/diffop.hpp"
#include "avmod/rep.hpp"

namespace avmod {

/// One coordinate of a module element: a function or a point distribution.
using CarrierElem = std::variant<RingElem, DeltaElem>;

bool carrier_is_zero(const CarrierElem& c);
CarrierElem carrier_add(const CarrierElem& a, const CarrierElem& b);
CarrierElem carrier_scale(const CarrierElem& a, const Rational& q);
std::string carrier_str(const CarrierElem& c);

/// Element of a module: one carrier entry per generator slot.
struct ModElem {
    std::vector<CarrierElem> comps;

    bool is_zero() const;
    ModElem operator+(const ModElem& o) const;
    ModElem operator-(const ModElem& o) const;
    ModElem scaled(const Rational& q) const;
    bool operator==(const ModElem& o) const { return comps == o.comps; }
    bool operator!=(const ModElem& o) const { return !(*this == o); }
};

/// A module over the functions of a chart equipped with a compatible action
/// of its vector fields, i.e. a representation of the full transform algebra
/// generated by multiplications and derivations.
class AVModule {
public:
    virtual ~AVModule() = default;

    const ChartPtr& chart() const { return chart_; }
    int rank() const { return rank_; }
    const std::vector<std::string>& labels() const { return labels_; }
    /// True when the carrier is the free module ring^rank.
    bool free_over_ring() const { return free_; }
    bool delta_carrier() const { return delta_; }

    virtual ModElem act_ring(const RingElem& f, const ModElem& m) const = 0;
    virtual ModElem act_field(const VecField& eta, const ModElem& m) const = 0;
    virtual std::string describe() const = 0;

    ModElem zero_elem() const;
    /// The a-th generator: 1 in slot a, or the plain pulse for distributions.
    virtual ModElem gen(int a) const;
    /// Spanning family of carrier elements up to the given degree.
    virtual std::vector<ModElem> basis(int degree_bound) const;
    const std::vector<Rational>& point() const { return point_; }
    std::string elem_str(const ModElem& m) const;
    void check_elem(const ModElem& m) const;

protected:
    ChartPtr chart_;
    int rank_ = 1;
    bool free_ = true;
    bool delta_ = false;
    std::vector<Rational> point_;  // delta carriers only
    std::vector<std::string> labels_;

    RingElem coerce(const RingElem& f) const { return f.in_spec(chart_->ring); }
};

using AVModulePtr = std::shared_ptr<const AVModule>;

/// The ring of the chart acting on itself; fields act as derivations.
AVModulePtr ring_module(ChartPtr chart);

/// Distributions supported at a rational point of affine space.
AVModulePtr delta_module(ChartPtr chart, std::vector<Rational> point);

/// Twist of a rank-one distribution or function module by a representation
/// of the truncated jet algebra: fields act by the jet-corrected Leibniz
/// formula
///   (f d_i)(p (x) w) = ((f d_i) p) (x) w
///                      + sum_{1 <= |k| <= s+1} (1/k!) ((d^k f) p) (x) (X^k d_i) w.
AVModulePtr tensor_module(AVModulePtr base, JetRep w);

/// Adds the charge term: rho(f d_i) = f d_i + lambda (d_i f).
AVModulePtr charged_module(AVModulePtr base, const Rational& lambda);

/// Deliberately wrong variant using a second derivative, rho(f d_i) =
/// f d_i + lambda (d_i d_i f). Satisfies the commutator relation with ring
/// multiplication but not the bracket homomorphism; negative-control fixture.
AVModulePtr charged_module_broken(AVModulePtr base, const Rational& lambda);

/// Ideal carrier with declared generator derivatives. gauge[i] is the matrix
/// of the i-th frame derivation on the generators: d_i(gen_j) =
/// sum_r gauge[i](r, j) gen_r, everything read through the embedding into the
/// ring.
struct GaugeData {
    ChartPtr chart;
    std::vector<std::string> gens;
    std::vector<RingElem> embed;
    std::vector<RMatrix> gauge;
    /// Writes an ideal element as coefficients against the generators.
    std::function<std::vector<RingElem>(const RingElem&)> section;
    /// Pairs of coefficient vectors presenting the same ideal element.
    std::vector<std::pair<std::vector<RingElem>, std::vector<RingElem>>> syzygies;
};

/// Validates the data (syzygy compatibility; throws SyzygyViolation with a
/// witness) and builds the module twisted by a gl_n representation.
AVModulePtr gauge_module(GaugeData data, Rep w);

/// The ideal (t, y) on the cubic curve with tau(T) = (t^2+1) Y and
/// tau(Y) = (t^3+t) T.
GaugeData cubic_ideal_gauge();
/// Same data with one gauge coefficient corrupted; for negative tests.
GaugeData cubic_ideal_gauge_broken();

/// Rank-two family over the cubic curve:
///   (f tau) g_v = (f tau(g_v) + alpha g_v tau(f)) v + g_v tau(tau(f)) u
///   (f tau) g_u = (f tau(g_u) + (alpha+1) g_u tau(f)) u
AVModulePtr cubic_alpha_module(const Rational& alpha);

/// Distribution-supported module at p twisted by w: shorthand for the tensor
/// construction over the pulse module with the determinant-shifted
/// coefficients w (x) det^1.
AVModulePtr rudakov_module(std::vector<Rational> point, const Rep& w);

/// Contragredient of a free finite-rank module; throws NotFree otherwise.
AVModulePtr av_dual(AVModulePtr m);

/// Tensor product over the ring of two free modules on the same chart, with
/// fields acting by the Leibniz rule; throws NotFree / SpecMismatch.
AVModulePtr av_mtensor(AVModulePtr a, AVModulePtr b);

/// Extension of a free module to a localized chart of the same ring, using
/// the jet decomposition of the action:
///   rho_f(h d_i) m = h D_i(m) + sum_{0 < |p| <= N-1} (1/p!) (d^p h) J_{p,i}(m)
/// where D_i extends rho(d_i) by the quotient rule and J_{p,i} extends the
/// degree-p jet action linearly over the localized ring. The base chart must
/// have coordinates. If no differentiability order N is supplied, the module
/// is probed up to order 6; UnknownDifferentiability if that fails.
AVModulePtr localize_module(AVModulePtr m, ChartPtr localized,
                            std::optional<int> order = std::nullopt);

/// Action of a single jet generator through the finite-part expansion
///   X^p d_i |-> sum_{k <= p} (-1)^{|p|-|k|} binom(p,k) x^{p-k} # x^k d_i.
/// Chart must have coordinates.
ModElem jet_act(const AVModule& m, const JetGen& g, const ModElem& elem);

struct CheckReport {
    bool pass = true;
    long checks = 0;
    std::vector<std::string> witnesses;  // first few failures

    void fail(std::string w) {
        pass = false;
        if (witnesses.size() < 8) witnesses.push_back(std::move(w));
    }
};

/// Exercises the defining compatibilities on all monomial coefficients and
/// basis elements up to the degree bound:
///   (i)  [rho(eta), f] = eta(f) as operators on the module
///   (ii) rho([eta, mu]) = [rho(eta), rho(mu)]
/// plus multiplicativity of the ring action.
CheckReport validate_smash(const AVModule& m, int degree);

/// Smallest N <= n_max such that order-N differences of the action vanish:
/// on charts with coordinates this tests the jet generators with |p| in
/// {N, N+1}; otherwise it tests the defining alternating sum
///   sum_k (-1)^(N-k) binom(N,k) f^k rho(f^(N-k) eta) = 0
/// over sampled ring elements. nullopt when every N fails.
std::optional<int> minimal_differentiability(const AVModule& m, int n_max, int degree);

}  // namespace avmod
