#include "doctest.h"

#include "carrousel/puiseux.hpp"

#include <random>

using namespace carrousel;

namespace {
const MultiPoly X = MultiPoly::variable(VX);
const MultiPoly Y = MultiPoly::variable(VY);
const MultiPoly Z = MultiPoly::variable(VZ);
const MultiPoly T = MultiPoly::variable(VT);
MultiPoly C(long n) { return MultiPoly(Scalar(n)); }
}  // namespace

TEST_CASE("newton polygon: basic edges and characteristic polynomials") {
    // y^2 - t: one edge, slope 1/2, char c^2 - 1
    auto e1 = newton_polygon(Y * Y - T, VY, VT);
    REQUIRE(e1.size() == 1);
    CHECK(e1[0].slope == Rat(1, 2));
    REQUIRE(e1[0].char_poly.size() == 3);
    CHECK(e1[0].char_poly[0] == C(-1));
    CHECK(e1[0].char_poly[2] == C(1));

    // x y^2 + t: slope 1/2, char x c^2 + 1
    auto e2 = newton_polygon(X * Y * Y + T, VY, VT);
    REQUIRE(e2.size() == 1);
    CHECK(e2[0].slope == Rat(1, 2));
    CHECK(e2[0].char_poly[2] == X);
    CHECK(e2[0].char_poly[0] == C(1));

    // (y^2 - t)(y - t): edges 1/2 and 1
    auto e3 = newton_polygon((Y * Y - T) * (Y - T), VY, VT);
    REQUIRE(e3.size() == 2);
    Rat s_lo = rat_min(e3[0].slope, e3[1].slope);
    Rat s_hi = rat_max(e3[0].slope, e3[1].slope);
    CHECK(s_lo == Rat(1, 2));
    CHECK(s_hi == Rat(1));

    CHECK_THROWS_AS(newton_polygon(MultiPoly(), VY, VT), Error);
    CHECK_THROWS_AS(newton_polygon(Y * T + Y, VY, VT), Error);
}

TEST_CASE("puiseux expansion: classic cases") {
    // y^2 - t: y = t^(1/2), class size 2
    auto c1 = puiseux_expand_px(Y * Y - T, VY, VT, Rat(5), Rat(5));
    REQUIRE(c1.size() == 1);
    CHECK(c1[0].tden == 2);
    CHECK(c1[0].strands == 2);
    CHECK(c1[0].exact_root);
    REQUIRE(c1[0].series.terms.size() == 1);
    CHECK(c1[0].series.terms[0].first == Rat(1, 2));

    // z^3 - y^2: z = y^(2/3), class size 3
    auto c2 = puiseux_expand_px(Z * Z * Z - Y * Y, VZ, VY, Rat(5), Rat(5));
    REQUIRE(c2.size() == 1);
    CHECK(c2[0].tden == 3);
    CHECK(c2[0].strands == 3);
    CHECK(c2[0].series.terms[0].first == Rat(2, 3));

    // x y^2 + t: y = b x^(-1/2) t^(1/2) with b^2 = -1; 2 in t and 2 in x
    auto c3 = puiseux_expand_px(X * Y * Y + T, VY, VT, Rat(5), Rat(5));
    REQUIRE(c3.size() == 1);
    CHECK(c3[0].tden == 2);
    CHECK(c3[0].xden == 2);
    CHECK(c3[0].strands == 2);
    auto lead = c3[0].series.terms[0];
    CHECK(lead.first == Rat(1, 2));
    auto xl = lead.second.terms[0];
    CHECK(xl.first == Rat(-1, 2));
    CHECK((xl.second * xl.second + Scalar(1)).is_zero());
}

TEST_CASE("nested expansion: closed forms") {
    // D = x y^2 + t
    auto b1 = nested_expand(X * Y * Y + T, Rat(5), Rat(5));
    REQUIRE(b1.size() == 1);
    CHECK(b1[0].q_over_p == Rat(1, 2));
    CHECK(b1[0].e_over_dprime == Rat(-1, 2));
    CHECK((b1[0].b * b1[0].b + Scalar(1)).is_zero());
    CHECK(b1[0].w.terms.size() == 1);  // w = 1
    CHECK(b1[0].tail.empty());
    CHECK(b1[0].d == 2);
    CHECK(b1[0].n == 2);
    CHECK(b1[0].p == 2);
    CHECK(b1[0].pprime == 1);
    CHECK(b1[0].nprime == 4);

    // Hirzebruch discriminants x^k y^l + t
    struct KL {
        int k, l;
    };
    for (KL kl : {KL{1, 2}, KL{2, 3}, KL{1, 3}, KL{3, 2}}) {
        MultiPoly D = MultiPoly::variable(VX, kl.k) * MultiPoly::variable(VY, kl.l) + T;
        auto bs = nested_expand(D, Rat(5), Rat(5));
        REQUIRE(bs.size() == 1);
        CHECK(bs[0].q_over_p == Rat(1, kl.l));
        Rat ed(-kl.k, kl.l);
        ed.canonicalize();
        CHECK(bs[0].e_over_dprime == ed);
        CHECK(bs[0].w.terms.size() == 1);
        CHECK(bs[0].strands == kl.l);
    }

    // (y^2 - t)(y - t): two branches with pairs (1/2, 0) and (1, 0)
    auto b2 = nested_expand((Y * Y - T) * (Y - T), Rat(5), Rat(5));
    REQUIRE(b2.size() == 2);
    CHECK(b2[0].q_over_p == Rat(1, 2));
    CHECK(b2[0].e_over_dprime == Rat(0));
    CHECK(b2[0].d == 1);
    CHECK(b2[1].q_over_p == Rat(1));
    CHECK(b2[1].e_over_dprime == Rat(0));

    // tail case: x y^2 + y^4 + t -> y = b x^-1/2 t^1/2 + (b/2) x^-5/2 t^3/2 + ...
    auto b3 = nested_expand(X * Y * Y + Y * Y * Y * Y + T, Rat(3), Rat(8));
    REQUIRE(b3.size() == 1);
    CHECK(b3[0].q_over_p == Rat(1, 2));
    CHECK(b3[0].e_over_dprime == Rat(-1, 2));
    REQUIRE(!b3[0].tail.empty());
    CHECK(b3[0].tail[0].first == Rat(3, 2));
    auto t0 = b3[0].tail[0].second.leading();
    REQUIRE(t0.has_value());
    CHECK(t0->first == Rat(-5, 2));
    CHECK((t0->second - b3[0].b * Scalar(Rat(1, 2))).is_zero());
    CHECK(b3[0].d == 2);
    CHECK(b3[0].nprime == 4);
}

TEST_CASE("monodromy permutations") {
    // branches +-i x^(-1/2) t^(1/2): x-loop is a transposition, 1 orbit
    auto bs = nested_expand(X * Y * Y + T, Rat(5), Rat(5));
    REQUIRE(bs.size() == 1);
    auto mx = monodromy_permutation({bs[0].series}, VX);
    CHECK(mx.points.size() == 2);
    CHECK(mx.perm.cycle_type() == std::vector<int>{2});
    CHECK(mx.perm.orbits() == 1);
    CHECK(mx.lcm_denominator == 2);
    CHECK(mx.perm.order() == 2);

    // d = 1 branch: identity
    auto b2 = nested_expand(Y - T * X, Rat(5), Rat(5));
    REQUIRE(b2.size() == 1);
    auto m2 = monodromy_permutation({b2[0].series}, VX);
    CHECK(m2.points.size() == 1);
    CHECK(m2.perm.orbits() == 1);
    CHECK(m2.perm.order() == 1);

    // Hirzebruch l=3, k=1: three conjugates, 3-cycle
    auto b3 = nested_expand(X * Y * Y * Y + T, Rat(5), Rat(5));
    REQUIRE(b3.size() == 1);
    auto m3 = monodromy_permutation({b3[0].series}, VX);
    CHECK(m3.points.size() == 3);
    CHECK(m3.perm.cycle_type() == std::vector<int>{3});
    CHECK(m3.perm.orbits() == 1);
    CHECK(m3.lcm_denominator % Int(m3.perm.order()) == 0);
}

TEST_CASE("resubstitution valuation oracle") {
    auto b1 = nested_expand(Y * Y - T, Rat(5), Rat(5));
    REQUIRE(b1.size() == 1);
    auto v1 = resubstitution_valuation(Y * Y - T, VY, VT, b1[0].series, Rat(5));
    CHECK(v1.exact_root);

    auto b2 = nested_expand(X * Y * Y + T, Rat(5), Rat(5));
    auto v2 = resubstitution_valuation(X * Y * Y + T, VY, VT, b2[0].series, Rat(5));
    CHECK(v2.exact_root);

    std::mt19937 rng(7);
    for (int it = 0; it < 8; ++it) {
        long a = long(rng() % 3) + 1, c = long(rng() % 2) + 1;
        MultiPoly F = (Y * Y - T * C(a)) * (Y - T * C(c)) + T * T * T * Y * C(long(rng() % 2));
        Rat order(3);
        std::vector<BranchExpansion> bs;
        try {
            bs = nested_expand(F, order, Rat(6));
        } catch (const Error&) {
            continue;  // truncation-too-short on a degenerate draw is acceptable here
        }
        Int strands(0);
        for (auto& b : bs) {
            auto v = resubstitution_valuation(F, VY, VT, b.series, order);
            if (!v.exact_root) CHECK(v.value >= order);
            strands += b.strands;
        }
        CHECK(strands == F.degree(VY));
    }
}

TEST_CASE("branch invariants hold by construction") {
    auto bs = nested_expand(X * Y * Y + Y * Y * Y * Y + T, Rat(4), Rat(8));
    for (auto& b : bs) {
        CHECK(b.p * b.pprime == b.n);
        CHECK(b.nprime == b.d * b.n);
        b.check_invariants();
    }
}
