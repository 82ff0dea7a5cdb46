#include "avmod/chart.hpp"

namespace avmod {

bool Chart::same_structure(const Chart& o) const {
    if (dim != o.dim || !ring->same_structure(*o.ring)) return false;
    if (params != o.params) return false;
    for (int i = 0; i < dim; ++i)
        for (int v = 0; v < ring->nvars(); ++v)
            if (frame[i].images[v].terms() != o.frame[i].images[v].terms() ||
                frame[i].images[v].den_power() != o.frame[i].images[v].den_power())
                return false;
    return true;
}

ChartPtr make_chart(Chart c) {
    if (static_cast<int>(c.frame.size()) != c.dim)
        throw std::invalid_argument("chart: frame size must equal dim");
    for (const auto& d : c.frame)
        if (static_cast<int>(d.images.size()) != c.ring->nvars())
            throw std::invalid_argument("chart: derivation arity mismatch");
    // A bracket of derivations is a derivation, so checking [d_i, d_j] = 0 on
    // the ring generators suffices.
    for (int i = 0; i < c.dim; ++i)
        for (int j = i + 1; j < c.dim; ++j)
            for (int v = 0; v < c.ring->nvars(); ++v) {
                RingElem g = RingElem::variable(c.ring, v);
                RingElem lhs = derive(derive(g, c.frame[j]), c.frame[i]);
                RingElem rhs = derive(derive(g, c.frame[i]), c.frame[j]);
                if (lhs != rhs)
                    throw std::invalid_argument("chart '" + c.name + "': frame does not commute");
            }
    for (int p : c.params)
        if (p < 0 || p >= c.ring->nvars())
            throw std::invalid_argument("chart: bad coordinate index");
    return std::make_shared<const Chart>(std::move(c));
}

std::vector<std::string> default_var_names(int n) {
    if (n == 1) return {"x"};
    if (n == 2) return {"x", "y"};
    if (n == 3) return {"x", "y", "z"};
    std::vector<std::string> v;
    for (int i = 1; i <= n; ++i) v.push_back("x" + std::to_string(i));
    return v;
}

static ChartPtr coordinate_chart(RingSpecPtr ring, const std::string& name) {
    Chart c;
    c.name = name;
    c.ring = std::move(ring);
    int n = c.ring->nvars();
    c.dim = n;
    for (int i = 0; i < n; ++i) {
        Derivation d;
        for (int v = 0; v < n; ++v)
            d.images.push_back(v == i ? RingElem::one(c.ring) : RingElem::zero(c.ring));
        c.frame.push_back(std::move(d));
        c.params.push_back(i);
    }
    return make_chart(std::move(c));
}

ChartPtr chart_affine(const std::vector<std::string>& vars) {
    return coordinate_chart(RingSpec::poly(vars), "affine" + std::to_string(vars.size()));
}

ChartPtr chart_affine(int n) { return chart_affine(default_var_names(n)); }

ChartPtr chart_torus(const std::vector<std::string>& vars) {
    return coordinate_chart(RingSpec::laurent(vars), "torus" + std::to_string(vars.size()));
}

ChartPtr chart_laurent1(const std::string& var) {
    return coordinate_chart(RingSpec::laurent({var}), "torus1_" + var);
}

ChartPtr chart_affine_loc(int n, int inverted) {
    auto names = default_var_names(n);
    std::vector<bool> inv(n, false);
    inv[inverted] = true;
    return coordinate_chart(RingSpec::mixed(names, inv),
                            "affine" + std::to_string(n) + "_loc_" + names[inverted]);
}

ChartPtr chart_mixed(const std::vector<std::string>& vars, const std::vector<bool>& inverted) {
    if (vars.size() != inverted.size())
        throw std::invalid_argument("chart_mixed: flag count must match variable count");
    std::string name = "chart";
    for (size_t i = 0; i < vars.size(); ++i) {
        name += "_" + vars[i];
        if (inverted[i]) name += "inv";
    }
    return coordinate_chart(RingSpec::mixed(vars, inverted), name);
}

// y^2 = t^3 - t with vars (t, y); rhs drives localized denominators.
static RingSpecPtr cubic_ring(bool loc) {
    std::map<Expo, Rational> rhs;
    rhs[{3, 0}] = Rational(1);
    rhs[{1, 0}] = Rational(-1);
    return RingSpec::quotient({"t", "y"}, {false, false}, 1, 2, std::move(rhs), loc,
                              loc ? "k[t,y]/(y^2-t^3+t)_y" : "k[t,y]/(y^2-t^3+t)");
}

static ChartPtr cubic_chart(bool loc) {
    Chart c;
    c.name = loc ? "cubic_curve_loc" : "cubic_curve";
    c.ring = cubic_ring(loc);
    c.dim = 1;
    Derivation tau;
    tau.images.push_back(RingElem::monomial(c.ring, {0, 1}, Rational(2)));  // tau(t) = 2y
    std::map<Expo, Rational> ty{{{2, 0}, Rational(3)}, {{0, 0}, Rational(-1)}};
    tau.images.push_back(RingElem::make(c.ring, ty, 0));  // tau(y) = 3t^2 - 1
    c.frame.push_back(std::move(tau));
    return make_chart(std::move(c));
}

ChartPtr chart_cubic_curve() { return cubic_chart(false); }
ChartPtr chart_cubic_curve_loc() { return cubic_chart(true); }

// Circle specs: relation y^2 = 1 - x^2 on vars (x, y).
static RingSpecPtr circle_ring(bool x_inv, bool y_inv) {
    std::map<Expo, Rational> rhs;
    rhs[{0, 0}] = Rational(1);
    rhs[{2, 0}] = Rational(-1);
    std::string nm = "k[x,y]/(x^2+y^2-1)";
    if (x_inv) nm += "_x";
    if (y_inv) nm += "_y";
    return RingSpec::quotient({"x", "y"}, {x_inv, false}, 1, 2, std::move(rhs), y_inv, nm);
}

// Coordinate x: differentiating the relation gives dy/dx = -x/y = -x*y/(1-x^2).
static ChartPtr circle_chart_x(RingSpecPtr ring, const std::string& name) {
    Chart c;
    c.name = name;
    c.ring = std::move(ring);
    c.dim = 1;
    Derivation d;
    d.images.push_back(RingElem::one(c.ring));
    d.images.push_back(RingElem::make(c.ring, {{{1, 1}, Rational(-1)}}, 1));
    c.frame.push_back(std::move(d));
    c.params.push_back(0);
    return make_chart(std::move(c));
}

// Coordinate y: dx/dy = -y/x.
static ChartPtr circle_chart_y(RingSpecPtr ring, const std::string& name) {
    Chart c;
    c.name = name;
    c.ring = std::move(ring);
    c.dim = 1;
    Derivation d;
    d.images.push_back(RingElem::monomial(c.ring, {-1, 1}, Rational(-1)));
    d.images.push_back(RingElem::one(c.ring));
    c.frame.push_back(std::move(d));
    c.params.push_back(1);
    return make_chart(std::move(c));
}

ChartPtr chart_circle_x() { return circle_chart_x(circle_ring(false, true), "circle_x"); }
ChartPtr chart_circle_y() { return circle_chart_y(circle_ring(true, false), "circle_y"); }
ChartPtr chart_circle_xy_from_x() { return circle_chart_x(circle_ring(true, true), "circle_xy|x"); }
ChartPtr chart_circle_xy_from_y() { return circle_chart_y(circle_ring(true, true), "circle_xy|y"); }

RingElem chart_derive(const ChartPtr& c, int i, const RingElem& f) {
    return derive(f, c->frame[i]);
}

RingElem chart_derive(const ChartPtr& c, const Expo& k, const RingElem& f) {
    RingElem g = f;
    for (int i = 0; i < c->dim; ++i)
        for (int rep = 0; rep < k[i]; ++rep) g = derive(g, c->frame[i]);
    return g;
}

std::map<Expo, RingElem> taylor_coeffs(const ChartPtr& c, const RingElem& f, int order) {
    if (!c->has_coordinates())
        throw AvError("taylor_coeffs: chart '" + c->name + "' has no coordinates");
    std::map<Expo, RingElem> out;
    std::map<Expo, RingElem> der;
    for (const Expo& k : multi_indices(c->dim, 0, order)) {
        if (expo_total(k) == 0) {
            der.emplace(k, f);
        } else {
            int i = 0;
            while (k[i] == 0) ++i;
            Expo prev = k;
            prev[i] -= 1;
            der.emplace(k, derive(der.at(prev), c->frame[i]));
        }
        RingElem coeff = der.at(k) * (Rational(1) / expo_factorial(k));
        if (!coeff.is_zero()) out.emplace(k, std::move(coeff));
    }
    return out;
}

}  // namespace avmod
