#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "avmod/diffop.hpp"

using namespace avmod;

TEST_CASE("normal ordering") {
    ChartPtr c = chart_affine(1);
    RingElem x = RingElem::variable(c->ring, 0);
    DiffOp d = DiffOp::partial(c, 0);
    DiffOp mx = DiffOp::mult(x, c);

    CHECK(d * mx == mx * d + DiffOp::mult(RingElem::one(c->ring), c));
    CHECK(d * DiffOp::mult(x * x, c) ==
          DiffOp::mult(x * x, c) * d + DiffOp::mult(x * Rational(2), c));
    CHECK(d * d * mx == mx * d * d + d.scaled(Rational(2)));
    CHECK((d * mx).order() == 1);
    CHECK((d * d).order() == 2);
    CHECK(DiffOp::zero(c).order() == -1);
}

TEST_CASE("commutators") {
    ChartPtr c = chart_affine(1);
    RingElem x = RingElem::variable(c->ring, 0);
    DiffOp d = DiffOp::partial(c, 0);
    DiffOp mx = DiffOp::mult(x, c);
    DiffOp one = DiffOp::mult(RingElem::one(c->ring), c);

    CHECK(commutator(d, mx) == one);
    CHECK(commutator(mx, d) == -one);
    CHECK(commutator(mx * d, d) == -d);
    CHECK(commutator(d, d).is_zero());
}

TEST_CASE("application") {
    ChartPtr c = chart_affine(1);
    RingElem x = RingElem::variable(c->ring, 0);
    DiffOp d = DiffOp::partial(c, 0);

    CHECK((DiffOp::mult(x, c) * d).apply(x.pow(3)) == x.pow(3) * Rational(3));
    CHECK((d * d).apply(x.pow(4)) == x * x * Rational(12));
    // Applying a product equals applying right then left.
    DiffOp op1 = d * DiffOp::mult(x * x, c);
    DiffOp op2 = DiffOp::mult(x, c) * d * d;
    for (int k = 0; k <= 4; ++k) {
        RingElem f = x.pow(k);
        CHECK((op1 * op2).apply(f) == op1.apply(op2.apply(f)));
    }
}

TEST_CASE("composition is associative") {
    ChartPtr c = chart_affine(2);
    RingElem x = RingElem::variable(c->ring, 0);
    RingElem y = RingElem::variable(c->ring, 1);
    std::vector<DiffOp> ops = {
        DiffOp::partial(c, 0),
        DiffOp::partial(c, 1) * DiffOp::mult(x, c),
        DiffOp::mult(x * y, c),
        DiffOp::term(c, {1, 1}, x + y),
    };
    for (const auto& a : ops)
        for (const auto& b : ops)
            for (const auto& e : ops) CHECK((a * b) * e == a * (b * e));
}

TEST_CASE("vector fields") {
    ChartPtr c = chart_affine(2);
    RingElem x = RingElem::variable(c->ring, 0);
    RingElem y = RingElem::variable(c->ring, 1);
    VecField xdy = VecField::basis(c, 1, x);
    VecField ydx = VecField::basis(c, 0, y);

    CHECK(xdy.apply(y * y) == x * y * Rational(2));
    CHECK(xdy.as_op().apply(y * y) == x * y * Rational(2));

    // [x d_y, y d_x] = x d_x - y d_y, and it matches the operator commutator.
    VecField br = vf_bracket(xdy, ydx);
    CHECK(br.as_op() == commutator(xdy.as_op(), ydx.as_op()));
    CHECK(br.as_op() == VecField::basis(c, 1, -y).as_op() + VecField::basis(c, 0, x).as_op());

    CHECK(vf_bracket(xdy, xdy).is_zero());
    CHECK((xdy + xdy.scaled(-RingElem::one(c->ring))).is_zero());
}

TEST_CASE("frame operators on the cubic curve") {
    ChartPtr c = chart_cubic_curve();
    RingElem t = RingElem::variable(c->ring, 0);
    RingElem y = RingElem::variable(c->ring, 1);
    DiffOp tau = DiffOp::partial(c, 0);

    CHECK(tau.apply(t) == y * Rational(2));
    CHECK((tau * tau).apply(t) == (t * t * Rational(3) - RingElem::one(c->ring)) * Rational(2));
    // tau . t = t . tau + tau(t) in the operator algebra.
    CHECK(tau * DiffOp::mult(t, c) == DiffOp::mult(t, c) * tau + DiffOp::mult(y * Rational(2), c));
}

TEST_CASE("point distributions") {
    std::vector<Rational> p = {Rational(1, 2)};
    DeltaElem d = delta_at(p);
    CHECK(d.terms.at(Expo{0}) == Rational(1));

    ChartPtr c = chart_affine(1);
    RingElem x = RingElem::variable(c->ring, 0);
    DiffOp mx = DiffOp::mult(x, c);
    DiffOp dd = DiffOp::partial(c, 0);

    // Functions act through the value at the point.
    CHECK(delta_act(mx, d) == d.scaled(Rational(1, 2)));
    // (x - 1/2) annihilates the plain pulse.
    CHECK(delta_act(mx - DiffOp::mult(RingElem::constant(c->ring, Rational(1, 2)), c), d)
              .is_zero());
    // Derivatives shift the pulse order.
    DeltaElem dprime = delta_act(dd, d);
    CHECK(dprime.terms.at(Expo{1}) == Rational(1));
    // x . d' = p d' - d.
    DeltaElem xd = delta_act(mx, dprime);
    CHECK(xd.terms.at(Expo{1}) == Rational(1, 2));
    CHECK(xd.terms.at(Expo{0}) == Rational(-1));
}

TEST_CASE("delta action is a module action") {
    std::vector<Rational> p = {Rational(2), Rational(-1)};
    ChartPtr c = chart_affine(2);
    RingElem x = RingElem::variable(c->ring, 0);
    RingElem y = RingElem::variable(c->ring, 1);
    std::vector<DiffOp> ops = {
        DiffOp::mult(x * y, c),
        DiffOp::partial(c, 0),
        DiffOp::partial(c, 1) * DiffOp::mult(x, c),
        DiffOp::term(c, {2, 0}, y),
    };
    std::vector<DeltaElem> elems = {delta_at(p), delta_act(DiffOp::partial(c, 0), delta_at(p)),
                                    delta_act(DiffOp::term(c, {1, 1}, x), delta_at(p))};
    for (const auto& a : ops)
        for (const auto& b : ops)
            for (const auto& m : elems)
                CHECK(delta_act(a * b, m) == delta_act(a, delta_act(b, m)));
}
