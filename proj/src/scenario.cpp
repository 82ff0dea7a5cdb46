#include "avmod/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "avmod/errors.hpp"
#include "avmod/expr.hpp"
#include "avmod/gkdim.hpp"
#include "avmod/local_iso.hpp"

namespace avmod {

namespace {

using json = nlohmann::json;

unsigned long fnv1a(const std::string& s) {
    unsigned long h = 1469598103934665603UL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211UL;
    }
    return h;
}

std::string format_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Individual checks.  Each returns pass/fail plus a human-readable value and
// failure witnesses through the CheckResult it fills in.

void check_smash(const Scenario& s, CheckResult& out) {
    AVModulePtr m = parse_module_expr(s.module);
    CheckReport r = validate_smash(*m, s.degree);
    out.pass = r.pass;
    out.value = m->describe() + ": " + std::to_string(r.checks) + " identities";
    out.witnesses = r.witnesses;
}

void check_diff_order(const Scenario& s, CheckResult& out) {
    AVModulePtr m = parse_module_expr(s.module);
    std::optional<int> n = minimal_differentiability(*m, s.nmax, s.degree);
    out.value = n ? std::to_string(*n) : "none";
    if (!s.expect.empty())
        out.pass = out.value == s.expect;
    else
        out.pass = n.has_value();
    if (!out.pass)
        out.witnesses.push_back(m->describe() + " has differentiability order " + out.value +
                                ", expected " + (s.expect.empty() ? "finite" : s.expect));
}

/// The cubic-curve ideal (t, y): deriving y*Y and (t^2-1)*T along tau must
/// give one and the same element, namely (t^4 + 4t^2 - 1) Y.
void check_gauge_compat(const Scenario&, CheckResult& out) {
    AVModulePtr m = parse_module_expr("gauge(elliptic)");
    const ChartPtr& c = m->chart();
    RingElem t = RingElem::variable(c->ring, 0);
    RingElem y = RingElem::variable(c->ring, 1);
    VecField tau = VecField::basis(c, 0, RingElem::one(c->ring));
    ModElem via_y = m->zero_elem();
    via_y.comps[0] = CarrierElem{y * y};  // y * Y
    ModElem via_t = m->zero_elem();
    via_t.comps[0] = CarrierElem{(t * t - RingElem::one(c->ring)) * t};  // (t^2-1) * T
    ModElem r1 = m->act_field(tau, via_y);
    ModElem r2 = m->act_field(tau, via_t);
    RingElem expected = (t.pow(4) + t * t * Rational(4) - RingElem::one(c->ring)) * y;
    out.value = carrier_str(r1.comps[0]);
    out.pass = r1 == r2 && std::get<RingElem>(r1.comps[0]) == expected;
    if (!out.pass) {
        out.witnesses.push_back("tau(y Y) = " + carrier_str(r1.comps[0]));
        out.witnesses.push_back("tau((t^2-1) T) = " + carrier_str(r2.comps[0]));
        out.witnesses.push_back("expected " + expected.str());
    }
}

/// Charged modules over the two torus parameters: the action written in the
/// second parameter s = 1/t must produce the shifted coefficient
/// (l + (k-2) lambda) on s^(k+l-1), for every charge in a small stock list.
void check_gm_reparam(const Scenario& s, CheckResult& out) {
    Atlas gm = atlas_gm();
    const ChartPtr& ct = gm.charts[0];
    const ChartPtr& cs = gm.charts[1];
    const auto& relabel = gm.transition(0, 1).map;
    std::vector<Rational> charges = {Rational(0), Rational(1, 2), Rational(1, 3), Rational(2)};
    long checked = 0;
    for (const Rational& lam : charges) {
        AVModulePtr mt = charged_module(ring_module(ct), lam);
        for (int k = -s.degree; k <= s.degree; ++k) {
            VecField eta_s = VecField::basis(cs, 0, RingElem::monomial(cs->ring, {k}, Rational(1)));
            VecField eta_t = VecField::zero(ct);
            // Rewrite the s-side field in the t parameter (plain pushforward).
            DiffOp pushed = transform_op_charged(gm, 1, 0, Rational(0), eta_s);
            for (const auto& [e, f] : pushed.terms()) {
                if (expo_total(e) != 1)
                    throw AvError("reparametrized field is not a field: " + pushed.str());
                eta_t.comps[0] += f;
            }
            for (int l = -s.degree; l <= s.degree; ++l) {
                ModElem me;
                me.comps = {CarrierElem{RingElem::monomial(ct->ring, {-l}, Rational(1))}};
                RingElem acted = std::get<RingElem>(mt->act_field(eta_t, me).comps[0]);
                RingElem got = relabel(acted);
                Rational coeff = Rational(l) + Rational(k - 2) * lam;
                RingElem want = RingElem::monomial(cs->ring, {k + l - 1}, coeff);
                ++checked;
                if (got != want) {
                    out.pass = false;
                    if (out.witnesses.size() < 8)
                        out.witnesses.push_back(
                            "lambda=" + lam.str() + " k=" + std::to_string(k) +
                            " l=" + std::to_string(l) + ": got " + got.str() + ", want " +
                            want.str());
                }
            }
        }
    }
    out.value = std::to_string(checked) + " coefficients";
}

void check_glue(const Scenario& s, CheckResult& out) {
    Atlas at = atlas_by_name(s.atlas);
    int n = at.transitions.empty() ? 1 : at.transitions.begin()->second.from_overlap->dim;
    TransitionRule rule = parse_transition_rule(s.rule, n);
    CheckReport r = glue_check(at, rule, s.degree);
    out.pass = r.pass;
    out.value = rule.str() + " on " + at.name + ": " + std::to_string(r.checks) + " round trips";
    out.witnesses = r.witnesses;
}

void check_obstruction(const Scenario& s, CheckResult& out) {
    Rep r = rep_build(parse_rep_expr(s.rep));
    std::optional<int> k = exterior_power_type(r);
    out.value = k ? std::to_string(*k) : "none";
    out.pass = s.expect.empty() ? true : out.value == s.expect;
    if (!out.pass)
        out.witnesses.push_back(s.rep + " classified as " + out.value + ", expected " + s.expect);
}

void check_obstruction_catalog(const Scenario&, CheckResult& out) {
    struct Entry {
        RepExprPtr expr;
        std::string label;
        std::optional<int> expect;
    };
    std::vector<Entry> entries;
    for (int n = 1; n <= 3; ++n)
        for (int k = 0; k <= n; ++k)
            entries.push_back({RepExpr::ext(k, n),
                               "ext(" + std::to_string(k) + "," + std::to_string(n) + ")", k});
    entries.push_back({RepExpr::det_power(2, Rational(1)), "det(2,1)", 2});
    entries.push_back({RepExpr::sym(2, 2), "sym(2,2)", std::nullopt});
    entries.push_back({RepExpr::sym(2, 3), "sym(2,3)", std::nullopt});
    for (int n = 2; n <= 3; ++n) {
        std::vector<Rational> w(n, Rational(0));
        w[0] = Rational(1);
        w[n - 1] = Rational(-1);
        entries.push_back({RepExpr::hwc(RepExpr::tensor(RepExpr::natural(n),
                                                        RepExpr::dual(RepExpr::natural(n))),
                                        w),
                           "adjoint-top(" + std::to_string(n) + ")", std::nullopt});
        for (int sign : {1, -1})
            entries.push_back({RepExpr::tensor(RepExpr::det_power(n, Rational(sign)),
                                               RepExpr::natural(n)),
                               "det^" + std::to_string(sign) + " x natural(" + std::to_string(n) +
                                   ")",
                               std::nullopt});
    }
    int hits = 0;
    for (const Entry& e : entries) {
        std::optional<int> got = exterior_power_type(rep_build(e.expr));
        if (got == e.expect) {
            ++hits;
        } else {
            out.pass = false;
            if (out.witnesses.size() < 8)
                out.witnesses.push_back(
                    e.label + " classified as " + (got ? std::to_string(*got) : "none") +
                    ", expected " + (e.expect ? std::to_string(*e.expect) : "none"));
        }
    }
    out.value = std::to_string(hits) + "/" + std::to_string(entries.size()) + " classified";
}

void check_casimir(const Scenario& s, CheckResult& out) {
    Rep r = rep_build(parse_rep_expr(s.rep));
    std::optional<std::vector<Rational>> cc = try_central_character(r, s.k);
    if (!cc) {
        out.value = "not scalar";
        out.pass = false;
        out.witnesses.push_back(s.rep + " has no central character up to depth " +
                                std::to_string(s.k));
        return;
    }
    std::string v = "[";
    for (size_t i = 0; i < cc->size(); ++i) v += (i ? ", " : "") + (*cc)[i].str();
    v += "]";
    out.value = v;
    out.pass = s.expect.empty() ? true : v == s.expect;
    if (!out.pass) out.witnesses.push_back(s.rep + " acts by " + v + ", expected " + s.expect);
}

/// Omega_1 = k and Omega_2 = k (n+1-k) on the k-th exterior power, over the
/// whole table n <= nmax.
void check_casimir_table(const Scenario& s, CheckResult& out) {
    std::ostringstream table;
    for (int n = 1; n <= s.nmax; ++n)
        for (int k = 0; k <= n; ++k) {
            Rep r = rep_build(RepExpr::ext(k, n));
            std::vector<Rational> cc = central_character(r, 2);
            Rational w1(k), w2(static_cast<long>(k) * (n + 1 - k));
            table << "L^" << k << "(Q^" << n << "): " << cc[0].str() << "," << cc[1].str() << "; ";
            if (cc[0] != w1 || cc[1] != w2) {
                out.pass = false;
                if (out.witnesses.size() < 8)
                    out.witnesses.push_back("ext(" + std::to_string(k) + "," + std::to_string(n) +
                                            "): got (" + cc[0].str() + ", " + cc[1].str() +
                                            "), want (" + w1.str() + ", " + w2.str() + ")");
            }
        }
    out.value = table.str();
}

void check_casimir_invariance(const Scenario& s, CheckResult& out) {
    Atlas at = atlas_by_name(s.atlas);
    long checked = 0;
    for (const auto& [pair, tr] : at.transitions) {
        int a = pair.first, b = pair.second;
        for (int kk = 1; kk <= s.k; ++kk) {
            ++checked;
            if (!casimir_invariant(at, a, b, kk)) {
                out.pass = false;
                out.witnesses.push_back(at.name + " " + std::to_string(a) + "->" +
                                        std::to_string(b) + ": Omega_" + std::to_string(kk) +
                                        " not invariant");
            }
        }
        // Negative control: dropping one Jacobian factor must break the
        // invariance whenever the transition is not trivial.
        RMatrix j = jacobian(at, a, b);
        bool trivial = true;
        for (int i = 0; i < j.rows(); ++i)
            for (int q = 0; q < j.cols(); ++q) {
                RingElem want = i == q ? RingElem::one(tr.to_overlap->ring)
                                       : RingElem::zero(tr.to_overlap->ring);
                if (j.at(i, q) != want) trivial = false;
            }
        if (!trivial) {
            ++checked;
            if (casimir_invariant(at, a, b, std::max(1, s.k), true)) {
                out.pass = false;
                out.witnesses.push_back(at.name + " " + std::to_string(a) + "->" +
                                        std::to_string(b) +
                                        ": sabotaged law did not break invariance");
            }
        }
    }
    out.value = std::to_string(checked) + " words";
}

/// phi is a left inverse of psi on every generator, and multiplicative on
/// seeded random words.
void check_local_iso(const Scenario& s, CheckResult& out, const RunOptions& opt) {
    long checked = 0;
    const int trunc = 4;
    for (int n = 1; n <= 2; ++n) {
        ChartPtr c = chart_affine(n);
        for (const RingElem& g : ring_monomials(c->ring, 2)) {
            for (int dir = 0; dir < n; ++dir) {
                JetPoly<DiffOp> got = phi(psi_field(c, g, dir), trunc);
                Expo e(c->dim, 0);
                e[dir] = 1;
                JetPoly<DiffOp> want = JetPoly<DiffOp>::unit(trunc, DiffOp::term(c, e, g));
                ++checked;
                if (got != want) {
                    out.pass = false;
                    if (out.witnesses.size() < 8)
                        out.witnesses.push_back("phi(psi(" + g.str() + " d_" +
                                                std::to_string(dir + 1) + " (x) 1)) = " +
                                                got.str());
                }
            }
            for (const JetGen& jg : jet_gens_up_to(n, trunc)) {
                JetPoly<DiffOp> got = phi(psi_jet(c, g, jg), trunc);
                JetPoly<DiffOp> want = JetPoly<DiffOp>::gen(trunc, jg, DiffOp::mult(g, c));
                ++checked;
                if (got != want) {
                    out.pass = false;
                    if (out.witnesses.size() < 8)
                        out.witnesses.push_back("phi(psi(" + g.str() + " (x) " +
                                                jg.str(c->ring->vars) + ")) != itself");
                }
            }
        }
    }
    // Multiplicativity on random words, deterministic per seed.
    std::mt19937_64 rng(opt.seed ^ fnv1a(s.name));
    const int mtrunc = 3;
    for (int sample = 0; sample < opt.samples; ++sample) {
        int n = 1 + static_cast<int>(rng() % 2);
        ChartPtr c = chart_affine(n);
        auto rand_mono = [&]() {
            Expo e(n, 0);
            for (int i = 0; i < n; ++i) e[i] = static_cast<int>(rng() % 3);
            Rational coeff(static_cast<long>(1 + rng() % 3));
            if (rng() % 2) coeff = -coeff;
            return RingElem::monomial(c->ring, e, coeff);
        };
        auto rand_word = [&]() {
            SmashWord w = SmashWord::unit(c);
            w.lead = rand_mono();
            int nf = static_cast<int>(rng() % 3);
            for (int f = 0; f < nf; ++f) {
                if (rng() % 2)
                    w.factors.push_back(SmashFactor{rand_mono()});
                else
                    w.factors.push_back(SmashFactor{
                        VecField::basis(c, static_cast<int>(rng() % n), rand_mono())});
            }
            return w;
        };
        SmashWord w1 = rand_word(), w2 = rand_word();
        JetPoly<DiffOp> prod = phi(w1, mtrunc) * phi(w2, mtrunc);
        SmashWord cat = smash_concat(w1, w2);
        ++checked;
        if (phi(cat, mtrunc) != prod || phi(smash_normalize(cat), mtrunc) != prod) {
            out.pass = false;
            if (out.witnesses.size() < 8)
                out.witnesses.push_back("phi not multiplicative on " + w1.str() + " * " +
                                        w2.str());
        }
    }
    out.value = std::to_string(checked) + " identities";
}

void check_intertwiner(const Scenario& s, CheckResult& out) {
    std::optional<int> c = charged_intertwiner_power(s.lambda, 4, 3, 3);
    out.value = c ? std::to_string(*c) : "none";
    out.pass = s.expect.empty() ? c.has_value() : out.value == s.expect;
    if (!out.pass)
        out.witnesses.push_back("charge " + s.lambda.str() + ": intertwiner power " + out.value +
                                ", expected " + s.expect);
}

void check_gk(const Scenario& s, CheckResult& out) {
    AVModulePtr m = parse_module_expr(s.module);
    std::vector<FrameOp> frame = parse_frame_spec(s.frame, m->chart());
    std::vector<ModElem> seed;
    for (int a = 0; a < m->rank(); ++a) seed.push_back(m->gen(a));
    GrowthResult g = growth_series(*m, frame, seed, s.lmax);
    double residual = 0.0;
    double gamma = growth_exponent(g.dims, 0.25, &residual);
    out.value = format_double(gamma) + " (residual " + format_double(residual) + ")";
    if (s.expect_value) {
        out.pass = std::abs(gamma - *s.expect_value) <= s.tol;
        if (!out.pass)
            out.witnesses.push_back(m->describe() + " grows with exponent " +
                                    format_double(gamma) + ", expected " +
                                    format_double(*s.expect_value) + " +/- " +
                                    format_double(s.tol));
    }
}

}  // namespace

std::vector<Scenario> builtin_scenarios() {
    std::vector<Scenario> list;
    auto add = [&](Scenario s) { list.push_back(std::move(s)); };

    {
        Scenario s;
        s.name = "elliptic-gauge";
        s.module = "gauge(elliptic)";
        s.checks = {"gauge-compat", "smash"};
        add(s);
    }
    {
        Scenario s;
        s.name = "gm-reparam";
        s.checks = {"gm-reparam"};
        add(s);
    }

    auto diff = [&](const std::string& name, const std::string& module, int order) {
        Scenario s;
        s.name = name;
        s.module = module;
        s.checks = {"diff-order"};
        s.nmax = 4;
        s.degree = 6;
        s.expect = std::to_string(order);
        add(s);
    };
    diff("diff-poly-line", "k[x]", 1);
    diff("diff-delta", "delta(0)", 1);
    diff("diff-det-half", "tensor(k[x], det(1/2))", 2);
    diff("diff-det-one", "tensor(k[x], det(1))", 2);
    diff("diff-natural", "tensor(k[x,y], natural(2))", 2);
    diff("diff-alpha-zero", "alpha(0)", 3);
    diff("diff-alpha-one", "alpha(1)", 3);
    diff("diff-alpha-minus", "alpha(-1)", 3);

    {
        Scenario s;
        s.name = "casimir-table";
        s.checks = {"casimir-table"};
        s.nmax = 4;
        add(s);
    }
    {
        Scenario s;
        s.name = "obstruction-catalog";
        s.checks = {"obstruction-catalog"};
        add(s);
    }
    {
        Scenario s;
        s.name = "local-iso";
        s.checks = {"local-iso"};
        add(s);
    }

    for (int lam = -2; lam <= 2; ++lam) {
        Scenario s;
        s.name = "p1-det-lambda" + std::string(lam < 0 ? "-minus-" : "-") +
                 std::to_string(std::abs(lam));
        s.atlas = "p1";
        s.rule = "det:" + std::to_string(lam);
        s.checks = {"glue"};
        s.degree = 2;
        add(s);
    }
    {
        Scenario s;
        s.name = "p1-det-lambda-half";
        s.atlas = "p1";
        s.rule = "det:1/2";
        s.checks = {"glue"};
        s.degree = 2;
        s.expect_fail = true;  // fractional determinant powers cannot glue
        add(s);
    }
    {
        Scenario s;
        s.name = "p1-sections";
        s.atlas = "p1";
        s.rule = "section";
        s.checks = {"glue"};
        add(s);
    }
    {
        Scenario s;
        s.name = "p1-jets";
        s.atlas = "p1";
        s.rule = "jet:2";
        s.checks = {"glue"};
        s.degree = 2;
        add(s);
    }
    {
        Scenario s;
        s.name = "gm-charged-half";
        s.atlas = "gm";
        s.rule = "charged:1/2";
        s.checks = {"glue"};
        add(s);
    }
    {
        Scenario s;
        s.name = "circle-sections";
        s.atlas = "circle";
        s.rule = "section";
        s.checks = {"glue"};
        add(s);
    }

    auto inter = [&](const std::string& name, const Rational& lambda, const std::string& expect) {
        Scenario s;
        s.name = name;
        s.lambda = lambda;
        s.expect = expect;
        s.checks = {"intertwiner"};
        add(s);
    };
    inter("gm-intertwiner-zero", Rational(0), "0");
    inter("gm-intertwiner-half", Rational(1, 2), "1");
    inter("gm-intertwiner-one", Rational(1), "2");
    inter("gm-intertwiner-third", Rational(1, 3), "none");

    for (const char* at : {"p1", "circle"}) {
        Scenario s;
        s.name = std::string(at) + "-casimir";
        s.atlas = at;
        s.k = 2;
        s.checks = {"casimir-invariance"};
        add(s);
    }

    auto gk = [&](const std::string& name, const std::string& module, const std::string& frame,
                  double expect) {
        Scenario s;
        s.name = name;
        s.module = module;
        s.frame = frame;
        s.lmax = 24;
        s.expect_value = expect;
        s.tol = 0.15;
        s.checks = {"gk"};
        add(s);
    };
    gk("gk-poly-line", "k[x]", "default", 1.0);
    gk("gk-poly-plane", "k[x,y]", "default", 2.0);
    gk("gk-delta", "delta(0)", "default", 1.0);
    gk("gk-tensor-w3", "tensor(k[x], oplus(det(0), oplus(det(1), det(2))))", "jets(1)", 1.0);

    auto smash = [&](const std::string& name, const std::string& module, int degree = 3) {
        Scenario s;
        s.name = name;
        s.module = module;
        s.degree = degree;
        s.checks = {"smash"};
        add(s);
    };
    smash("smash-poly-line", "k[x]");
    smash("smash-poly-plane", "k[x,y]");
    smash("smash-laurent", "k[t,t^-1]");
    smash("smash-delta", "delta(1/2)");
    smash("smash-tensor-det", "tensor(k[x], det(1/2))");
    smash("smash-tensor-natural", "tensor(k[x,y], natural(2))");
    smash("smash-charged", "charged(k[t,t^-1], 1/2)");
    smash("smash-gauge", "gauge(elliptic)");
    smash("smash-alpha", "alpha(1)");
    smash("smash-rudakov", "rudakov([0,0], natural(2))", 2);
    smash("smash-dual", "dual(tensor(k[x], det(2)))");
    smash("smash-mtensor", "mtensor(tensor(k[x], det(1)), tensor(k[x], det(-1)))");

    auto fixture = [&](const std::string& name, const std::string& module) {
        Scenario s;
        s.name = name;
        s.module = module;
        s.checks = {"smash"};
        s.expect_fail = true;
        add(s);
    };
    fixture("fixture-gauge", "fixture(gauge)");
    fixture("fixture-charged", "fixture(charged)");
    fixture("fixture-rep", "fixture(rep)");

    return list;
}

Report run_scenario(const Scenario& s, const RunOptions& opt) {
    Report rep;
    rep.scenario = s.name;
    rep.expect_fail = s.expect_fail;
    for (const std::string& name : s.checks) {
        CheckResult res;
        res.check = name;
        auto start = std::chrono::steady_clock::now();
        try {
            if (name == "smash")
                check_smash(s, res);
            else if (name == "diff-order")
                check_diff_order(s, res);
            else if (name == "gauge-compat")
                check_gauge_compat(s, res);
            else if (name == "gm-reparam")
                check_gm_reparam(s, res);
            else if (name == "glue")
                check_glue(s, res);
            else if (name == "obstruction")
                check_obstruction(s, res);
            else if (name == "obstruction-catalog")
                check_obstruction_catalog(s, res);
            else if (name == "casimir")
                check_casimir(s, res);
            else if (name == "casimir-table")
                check_casimir_table(s, res);
            else if (name == "casimir-invariance")
                check_casimir_invariance(s, res);
            else if (name == "local-iso")
                check_local_iso(s, res, opt);
            else if (name == "intertwiner")
                check_intertwiner(s, res);
            else if (name == "gk")
                check_gk(s, res);
            else {
                res.pass = false;
                res.witnesses.push_back("unknown check '" + name + "'");
            }
        } catch (const std::exception& e) {
            res.pass = false;
            res.witnesses.push_back(e.what());
        }
        res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                          .count();
        if (!res.pass) rep.pass = false;
        rep.results.push_back(std::move(res));
    }
    return rep;
}

std::vector<Report> run_all(const std::vector<Scenario>& list, const RunOptions& opt) {
    std::vector<const Scenario*> picked;
    for (const Scenario& s : list)
        if (opt.filter.empty() || s.name.find(opt.filter) != std::string::npos)
            picked.push_back(&s);
    std::vector<Report> reports(picked.size());
    unsigned nthreads = opt.threads > 0 ? static_cast<unsigned>(opt.threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
    nthreads = std::min<unsigned>(nthreads, picked.size() ? picked.size() : 1);
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= picked.size()) break;
            reports[i] = run_scenario(*picked[i], opt);
        }
    };
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    std::sort(reports.begin(), reports.end(),
              [](const Report& a, const Report& b) { return a.scenario < b.scenario; });
    return reports;
}

Scenario scenario_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw AvError("cannot open scenario file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ParseError("scenario file " + path + ": " + e.what(), e.byte);
    }
    static const std::vector<std::string> known = {
        "name", "checks", "module", "atlas",  "rep", "rule",         "frame",
        "nmax", "degree", "lmax",   "k",      "lambda", "expect",    "expect_value",
        "tol",  "expect_fail"};
    for (const auto& [key, _] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw AvError("scenario file " + path + ": unknown key '" + key + "'");
    Scenario s;
    s.name = j.value("name", std::string("scenario"));
    if (j.contains("checks")) s.checks = j.at("checks").get<std::vector<std::string>>();
    s.module = j.value("module", std::string());
    s.atlas = j.value("atlas", std::string());
    s.rep = j.value("rep", std::string());
    s.rule = j.value("rule", std::string());
    s.frame = j.value("frame", std::string("default"));
    s.nmax = j.value("nmax", s.nmax);
    s.degree = j.value("degree", s.degree);
    s.lmax = j.value("lmax", s.lmax);
    s.k = j.value("k", s.k);
    if (j.contains("lambda")) s.lambda = Rational::parse(j.at("lambda").get<std::string>());
    s.expect = j.value("expect", std::string());
    if (j.contains("expect_value")) s.expect_value = j.at("expect_value").get<double>();
    s.tol = j.value("tol", s.tol);
    s.expect_fail = j.value("expect_fail", false);
    return s;
}

std::string report_json(const std::vector<Report>& reports, const RunOptions& opt) {
    json out;
    out["seed"] = opt.seed;
    out["samples"] = opt.samples;
    json arr = json::array();
    for (const Report& r : reports) {
        json jr;
        jr["name"] = r.scenario;
        jr["pass"] = r.pass;
        jr["expect_fail"] = r.expect_fail;
        jr["ok"] = r.ok();
        if (!r.error.empty()) jr["error"] = r.error;
        json checks = json::array();
        for (const CheckResult& c : r.results) {
            json jc;
            jc["check"] = c.check;
            jc["pass"] = c.pass;
            if (!c.value.empty()) jc["value"] = c.value;
            if (!c.witnesses.empty()) jc["witnesses"] = c.witnesses;
            if (opt.timings) jc["seconds"] = c.seconds;
            checks.push_back(std::move(jc));
        }
        jr["checks"] = std::move(checks);
        arr.push_back(std::move(jr));
    }
    out["scenarios"] = std::move(arr);
    return out.dump(2) + "\n";
}

bool all_ok(const std::vector<Report>& reports) {
    for (const Report& r : reports)
        if (!r.ok()) return false;
    return true;
}

}  // namespace avmod
