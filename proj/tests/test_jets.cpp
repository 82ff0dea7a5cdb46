#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "avmod/errors.hpp"
#include "avmod/jets.hpp"

using namespace avmod;

namespace {

JetPoly<Rational> jp_bracket(const JetGen& a, const JetGen& b, int trunc) {
    JetPoly<Rational> r(trunc);
    for (const auto& [g, c] : jet_bracket(a, b, trunc))
        r = r + JetPoly<Rational>::gen(trunc, g, c);
    return r;
}

}  // namespace

TEST_CASE("generator grading and order") {
    JetGen a{{1}, 0}, b{{2}, 0};
    CHECK(a.degree() == 0);
    CHECK(b.degree() == 1);
    CHECK(a < b);
    JetGen c{{1, 1}, 0}, d{{0, 2}, 1};
    CHECK(c.degree() == 1);
    // Same degree: ordered by exponent, then direction.
    CHECK(d < c);
    CHECK(!(c < c));
    CHECK(c == c);
}

TEST_CASE("bracket values") {
    // One variable: [X d, X^2 d] = X^2 d.
    auto r = jet_bracket({{1}, 0}, {{2}, 0}, 4);
    REQUIRE(r.size() == 1);
    CHECK(r[0].first == JetGen{{2}, 0});
    CHECK(r[0].second == Rational(1));

    // Degree-zero part matches the matrix-unit bracket:
    // [X_0 d_1, X_1 d_0] = X_0 d_0 - X_1 d_1.
    auto s = jet_bracket({{1, 0}, 1}, {{0, 1}, 0}, 4);
    REQUIRE(s.size() == 2);
    JetPoly<Rational> sum(4);
    for (const auto& [g, c] : s) sum = sum + JetPoly<Rational>::gen(4, g, c);
    JetPoly<Rational> expect = JetPoly<Rational>::gen(4, {{1, 0}, 0}, Rational(1)) +
                               JetPoly<Rational>::gen(4, {{0, 1}, 1}, Rational(-1));
    CHECK(sum == expect);

    // Commuting pairs: disjoint exponents and directions, or equal generators.
    CHECK(jet_bracket({{2, 0}, 0}, {{0, 2}, 1}, 4).empty());
    CHECK(jet_bracket({{1}, 0}, {{1}, 0}, 4).empty());
}

TEST_CASE("bracket is antisymmetric and truncates") {
    auto gens = jet_gens_up_to(2, 2);
    for (const auto& a : gens)
        for (const auto& b : gens) {
            CHECK(jp_bracket(a, b, 2) == jp_bracket(b, a, 2).scaled(Rational(-1)));
        }
    // [X d, X^2 d] has degree 1, so truncation at 0 drops it.
    CHECK(jet_bracket({{1}, 0}, {{2}, 0}, 0).empty());
}

TEST_CASE("generator enumeration") {
    CHECK(jet_gens_up_to(1, 3).size() == 4);   // X, X^2, X^3, X^4 times d
    CHECK(jet_gens_up_to(2, 0).size() == 4);   // the gl_2 matrix units
    CHECK(jet_gens_up_to(2, 1).size() == 10);  // 4 + 3*2
    auto gens = jet_gens_up_to(2, 2);
    CHECK(std::is_sorted(gens.begin(), gens.end()));
}

TEST_CASE("matrix unit embedding") {
    auto [j, i] = gl_embed({{0, 1}, 0});  // X_1 d_0
    CHECK(j == 1);
    CHECK(i == 0);
    CHECK_THROWS_AS(gl_embed(JetGen{{2, 0}, 0}), DegreeError);
}

TEST_CASE("straightening") {
    JetGen lo{{1}, 0}, hi{{2}, 0};
    // Out-of-order word: hi * lo = lo * hi + [hi, lo] = lo * hi - X^2 d.
    auto m = pbw_straighten({hi, lo}, 4);
    REQUIRE(m.size() == 2);
    CHECK(m.at(JetMono{lo, hi}) == Rational(1));
    CHECK(m.at(JetMono{hi}) == Rational(-1));
    // Already sorted words pass through unchanged.
    auto id = pbw_straighten({lo, lo, hi}, 4);
    REQUIRE(id.size() == 1);
    CHECK(id.at(JetMono{lo, lo, hi}) == Rational(1));
    // Truncation can kill the bracket correction.
    auto t = pbw_straighten({hi, lo}, 0);
    REQUIRE(t.size() == 1);
    CHECK(t.at(JetMono{lo, hi}) == Rational(1));
}

TEST_CASE("enveloping products are associative") {
    // Exercises straightening against the Jacobi identity in both ranks.
    for (int n : {1, 2}) {
        int trunc = 2;
        auto gens = jet_gens_up_to(n, 1);
        std::vector<JetPoly<Rational>> ps;
        for (const auto& g : gens) ps.push_back(JetPoly<Rational>::gen(trunc, g, Rational(1)));
        for (size_t a = 0; a < ps.size(); ++a)
            for (size_t b = 0; b < ps.size(); ++b)
                for (size_t c = 0; c < ps.size(); ++c)
                    CHECK((ps[a] * ps[b]) * ps[c] == ps[a] * (ps[b] * ps[c]));
    }
}

TEST_CASE("jet polynomial arithmetic") {
    int trunc = 3;
    auto u = JetPoly<Rational>::unit(trunc, Rational(2));
    auto g = JetPoly<Rational>::gen(trunc, {{1}, 0}, Rational(1, 2));
    CHECK((u + g - g) == u);
    CHECK((g - g).is_zero());
    CHECK(u * g == g.scaled(Rational(2)));
    CHECK(g.scaled(Rational(0)).is_zero());

    // Generators above the truncation vanish identically.
    CHECK(JetPoly<Rational>::gen(1, {{3}, 0}, Rational(1)).is_zero());
    JetPoly<Rational> other(2);
    CHECK_THROWS_AS((void)(u + other), TruncationMismatch);
    CHECK(!u.str().empty());
    CHECK(jet_mono_str({{{1}, 0}, {{2}, 0}}) != "");
}
