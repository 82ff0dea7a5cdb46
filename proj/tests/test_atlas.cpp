#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "avmod/atlas.hpp"
#include "avmod/errors.hpp"
#include "avmod/local_iso.hpp"

using namespace avmod;

namespace {

VecField field_of(const DiffOp& op) {
    VecField v = VecField::zero(op.chart());
    for (const auto& [e, f] : op.terms()) {
        REQUIRE(expo_total(e) == 1);
        for (int q = 0; q < op.chart()->dim; ++q)
            if (e[q] == 1) v.comps[q] += f;
    }
    return v;
}

// Independent route for the jet transformation law: pull the jet generator
// back to a sum of plain ring and field words, transport each factor
// separately (fields by pushforward, functions by the transition map), and
// push the product forward through the structure map again.
JetPoly<DiffOp> jet_transform_oracle(const Atlas& at, int a, int b, const RingElem& coeff,
                                     const Expo& m, int p, int trunc) {
    const Transition& tr = at.transition(a, b);
    SmashSum sum = psi_jet(tr.from_overlap, coeff.in_spec(tr.from_overlap->ring), JetGen{m, p});
    SmashSum moved;
    for (const SmashWord& w : sum) {
        SmashWord out = SmashWord::unit(tr.to_overlap);
        out.lead = tr.map(w.lead);
        for (const SmashFactor& f : w.factors) {
            if (std::holds_alternative<RingElem>(f))
                out.factors.push_back(tr.map(std::get<RingElem>(f)));
            else
                out.factors.push_back(
                    field_of(transform_op_charged(at, a, b, Rational(0), std::get<VecField>(f))));
        }
        moved.push_back(std::move(out));
    }
    return phi(moved, trunc);
}

JetPoly<DiffOp> as_jet_poly(const Atlas& at, int a, int b, const JetSection& js, int trunc) {
    const ChartPtr& to = at.transition(a, b).to_overlap;
    JetPoly<DiffOp> out(trunc);
    DiffOp constant = DiffOp::zero(to);
    for (int q = 0; q < to->dim; ++q) {
        Expo e(to->dim, 0);
        e[q] = 1;
        constant = constant + DiffOp::term(to, e, js.const_part[q]);
    }
    out = out + JetPoly<DiffOp>::unit(trunc, constant);
    for (const auto& [g, f] : js.jets)
        out = out + JetPoly<DiffOp>::gen(trunc, g, DiffOp::mult(f, to));
    return out;
}

}  // namespace

TEST_CASE("jacobians") {
    Atlas p1 = atlas_p1();
    RMatrix j = jacobian(p1, 0, 1);
    REQUIRE(j.rows() == 1);
    const RingSpecPtr& ring = p1.transition(0, 1).to_overlap->ring;
    CHECK(j.at(0, 0) == RingElem::monomial(ring, {-2}, Rational(-1)));

    Atlas sh = atlas_shear();
    RMatrix js = jacobian(sh, 0, 1);
    REQUIRE(js.rows() == 2);
    const RingSpecPtr& sring = sh.transition(0, 1).to_overlap->ring;
    RingElem u = RingElem::variable(sring, 0);
    CHECK(js.at(0, 0) == RingElem::one(sring));
    CHECK(js.at(0, 1) == RingElem::zero(sring));
    CHECK(js.at(1, 0) == u * Rational(-2));
    CHECK(js.at(1, 1) == RingElem::one(sring));

    Atlas circ = atlas_circle();
    RMatrix jc = jacobian(circ, 0, 1);
    const RingSpecPtr& cring = circ.transition(0, 1).to_overlap->ring;
    RingElem cx = RingElem::variable(cring, 0);
    RingElem cy = RingElem::variable(cring, 1);
    CHECK(jc.at(0, 0) == -cy * cx.pow(-1));
}

TEST_CASE("transition lookup") {
    Atlas p1 = atlas_p1();
    CHECK_NOTHROW(p1.transition(0, 1));
    CHECK_NOTHROW(p1.transition(1, 0));
    CHECK_THROWS_AS(p1.transition(0, 0), NoOverlap);
    Atlas cu = atlas_cubic();
    CHECK(cu.charts.size() == 1);
    CHECK_THROWS_AS(cu.transition(0, 0), NoOverlap);
}

TEST_CASE("charged pushforward of a frame field") {
    Atlas gm = atlas_gm();
    const ChartPtr& ct = gm.charts[0];
    const ChartPtr& to = gm.transition(0, 1).to_overlap;
    RingElem s = RingElem::variable(to->ring, 0);

    for (Rational lambda : {Rational(0), Rational(1, 2), Rational(2)}) {
        DiffOp got = transform_op_charged(gm, 0, 1, lambda,
                                          VecField::basis(ct, 0, RingElem::one(ct->ring)));
        // d_t becomes -s^2 d_s - 2 lambda s.
        DiffOp expect = DiffOp::term(to, {1}, -(s * s)) + DiffOp::mult(s * lambda * Rational(-2), to);
        CHECK(got == expect);
    }
}

TEST_CASE("section transport") {
    Atlas p1 = atlas_p1();
    const RingSpecPtr& ring = p1.transition(0, 1).to_overlap->ring;
    std::vector<RingElem> one = {RingElem::one(p1.charts[0]->ring)};

    auto det1 = transform_section(p1, 0, 1, rep_build(RepExpr::det_power(1, Rational(1))), one);
    CHECK(det1[0] == RingElem::monomial(ring, {-2}, Rational(-1)));
    auto det2 = transform_section(p1, 0, 1, rep_build(RepExpr::det_power(1, Rational(2))), one);
    CHECK(det2[0] == RingElem::monomial(ring, {-4}, Rational(1)));
    CHECK_THROWS_AS(
        transform_section(p1, 0, 1, rep_build(RepExpr::det_power(1, Rational(1, 2))), one),
        NotIntegrable);
}

TEST_CASE("glue round trips on the projective line") {
    Atlas p1 = atlas_p1();
    CHECK(glue_check(p1, TransitionRule{}, 2).pass);
    for (int l = -2; l <= 2; ++l) {
        TransitionRule r;
        r.kind = TransitionRule::Kind::DetPower;
        r.lambda = Rational(l);
        CHECK(glue_check(p1, r, 2).pass);
    }
    TransitionRule half;
    half.kind = TransitionRule::Kind::DetPower;
    half.lambda = Rational(1, 2);
    CheckReport rep = glue_check(p1, half, 2);
    CHECK(!rep.pass);
    REQUIRE(!rep.witnesses.empty());
    CHECK(rep.witnesses[0].find("determinant") != std::string::npos);
}

TEST_CASE("glue round trips through representations on the shear atlas") {
    Atlas sh = atlas_shear();
    std::vector<RepExprPtr> reps = {
        RepExpr::natural(2),
        RepExpr::dual(RepExpr::natural(2)),
        RepExpr::ext(2, 2),
        RepExpr::sym(2, 2),
        RepExpr::tensor(RepExpr::natural(2), RepExpr::dual(RepExpr::natural(2))),
    };
    for (const auto& e : reps) {
        TransitionRule r;
        r.kind = TransitionRule::Kind::Rep;
        r.rep = e;
        CheckReport rep = glue_check(sh, r, 2);
        CHECK(rep.pass);
        CHECK(rep.checks > 0);
    }
}

TEST_CASE("glue round trips for charged operators and jets") {
    Atlas gm = atlas_gm();
    TransitionRule ch;
    ch.kind = TransitionRule::Kind::Charged;
    ch.lambda = Rational(1, 2);
    CHECK(glue_check(gm, ch, 3).pass);

    TransitionRule jets;
    jets.kind = TransitionRule::Kind::Jet;
    jets.s = 2;
    CHECK(glue_check(gm, jets, 2).pass);
    CHECK(glue_check(atlas_shear(), jets, 2).pass);
}

TEST_CASE("jet transformation matches the pullback route") {
    Atlas sh = atlas_shear();
    int trunc = 2;
    for (int a : {0, 1}) {
        int b = 1 - a;
        const ChartPtr& from = sh.transition(a, b).from_overlap;
        RingElem x = RingElem::variable(from->ring, 0);
        RingElem y = RingElem::variable(from->ring, 1);
        for (const RingElem& coeff : {RingElem::one(from->ring), x * y}) {
            for (Expo m : {Expo{1, 0}, Expo{0, 1}, Expo{2, 0}, Expo{1, 1}}) {
                for (int p = 0; p < 2; ++p) {
                    JetSection js = transform_jet(sh, a, b, coeff, m, p, trunc);
                    CHECK(as_jet_poly(sh, a, b, js, trunc) ==
                          jet_transform_oracle(sh, a, b, coeff, m, p, trunc));
                }
            }
        }
    }
}

TEST_CASE("casimir words survive the coordinate change") {
    Atlas p1 = atlas_p1();
    for (int k = 1; k <= 3; ++k) {
        CHECK(casimir_invariant(p1, 0, 1, k));
        CHECK(!casimir_invariant(p1, 0, 1, k, true));
    }
    Atlas circ = atlas_circle();
    CHECK(casimir_invariant(circ, 0, 1, 1));
    CHECK(casimir_invariant(circ, 0, 1, 2));
    CHECK(!casimir_invariant(circ, 0, 1, 2, true));
    Atlas sh = atlas_shear();
    CHECK(casimir_invariant(sh, 0, 1, 2));
    CHECK(!casimir_invariant(sh, 0, 1, 1, true));
}

TEST_CASE("charged intertwiner powers") {
    auto power = [](const Rational& l) { return charged_intertwiner_power(l, 4, 3, 3); };
    CHECK(power(Rational(0)) == 0);
    CHECK(power(Rational(1, 2)) == 1);
    CHECK(power(Rational(-1, 2)) == -1);
    CHECK(power(Rational(1)) == 2);
    CHECK(power(Rational(3, 2)) == 3);
    CHECK(!power(Rational(1, 3)).has_value());
    CHECK(!power(Rational(2, 3)).has_value());
}

TEST_CASE("rule descriptions") {
    TransitionRule r;
    CHECK(r.str() == "section");
    r.kind = TransitionRule::Kind::DetPower;
    r.lambda = Rational(-1, 2);
    CHECK(r.str() == "det:-1/2");
    r.kind = TransitionRule::Kind::Jet;
    r.s = 3;
    CHECK(r.str() == "jet:3");
}
