#include "doctest.h"

#include "carrousel/multipoly.hpp"

#include <random>

using namespace carrousel;

namespace {
const MultiPoly X = MultiPoly::variable(VX);
const MultiPoly Y = MultiPoly::variable(VY);
const MultiPoly Z = MultiPoly::variable(VZ);
const MultiPoly T = MultiPoly::variable(VT);
MultiPoly C(long n) { return MultiPoly(Scalar(n)); }
}  // namespace

// Oracle for the first resultant example: the 3x3 Sylvester determinant of
// (z^2 - c, 2z) expanded by cofactors along the first row, independently of
// the elimination code:  det [[1,0,-c],[2,0,0],[0,2,0]] = -4c.
TEST_CASE("resultant matches hand-expanded Sylvester determinants") {
    MultiPoly p = Z * Z - T;  // c := t
    MultiPoly q = Z * C(2);
    CHECK(resultant(p, q, VZ) == C(-4) * T);

    // linear case: res(z - a, z - b) = a - b with a := x, b := y
    CHECK(resultant(Z - X, Z - Y, VZ) == X - Y);
    CHECK(resultant(Z - X, Z - X, VZ).is_zero());

    // substitution c = x*y^2 + t
    MultiPoly c = X * Y * Y + T;
    CHECK(resultant(Z * Z - c, Z * C(2), VZ) == C(-4) * c);
}

TEST_CASE("resultant rejects degenerate eliminations") {
    CHECK_THROWS_AS(resultant(X, Z, VZ), Error);
    CHECK_THROWS_AS(resultant(Z, C(3), VZ), Error);
}

TEST_CASE("resultant swap sign and common-factor detection") {
    std::mt19937 rng(42);
    auto rnd_lin = [&](int var) {
        int c = int(rng() % 5) - 2;
        MultiPoly v = MultiPoly::variable(var);
        if (rng() % 2)
            return v + C(c);
        else
            return v + MultiPoly::variable(int(rng() % 2)) * C(c);
    };
    for (int it = 0; it < 20; ++it) {
        MultiPoly p = rnd_lin(VZ), q = rnd_lin(VZ) * rnd_lin(VZ);
        if (rng() % 2) p = p * rnd_lin(VZ);
        int dp = p.degree(VZ), dq = q.degree(VZ);
        MultiPoly rpq = resultant(p, q, VZ);
        MultiPoly rqp = resultant(q, p, VZ);
        MultiPoly expect = (dp * dq) % 2 ? -rqp : rqp;
        CHECK(rpq == expect);

        MultiPoly shared = mp_gcd(p, q);
        bool gcd_pos = shared.degree(VZ) > 0;
        if (gcd_pos) CHECK(rpq.is_zero());
        if (!gcd_pos) CHECK_FALSE(rpq.is_zero());
    }
    // explicit common factor
    MultiPoly f = Z - X * Y;
    CHECK(resultant(f * (Z + C(1)), f * (Z - C(2)), VZ).is_zero());
    CHECK_FALSE(resultant((Z - X), (Z + X + C(1)), VZ).is_zero());
}

TEST_CASE("squarefree and gcd examples") {
    MultiPoly base = X * Y * Y + T;
    auto [g0, sf] = squarefree_and_gcd(base * base, MultiPoly(), VT);
    CHECK(sf == base);

    MultiPoly a = X * X - C(1);
    MultiPoly b = X * X + X * C(2) + C(1);
    auto [g, s1] = squarefree_and_gcd(a, b, VX);
    CHECK(g == X + C(1));

    auto [g2, s2] = squarefree_and_gcd(base, MultiPoly(), VT);
    CHECK(s2 == base);  // squarefree input is untouched
}

TEST_CASE("full squarefree part strips all multiplicity") {
    MultiPoly p = (Z - Y).pow(3) * (Z + Y) * X * X;
    MultiPoly sf = mp_squarefree(p);
    CHECK(sf.degree(VZ) == 2);
    CHECK(sf.degree(VX) == 1);
    MultiPoly g = sf;
    for (int v = 0; v < 4; ++v)
        if (sf.degree(v) > 0) g = mp_gcd(g, sf.derivative(v));
    CHECK(g.is_constant());
}

TEST_CASE("resultant of binomial germs against derivative") {
    // res_z(z^m - x y^2 - t, m z^(m-1)) has squarefree part x y^2 + t
    for (int m = 2; m <= 3; ++m) {
        MultiPoly f = MultiPoly::variable(VZ, m) - X * Y * Y - T;
        MultiPoly fz = f.derivative(VZ);
        MultiPoly r = resultant(f, fz, VZ);
        CHECK(mp_squarefree(r) == mp_squarefree(X * Y * Y + T));
    }
}
