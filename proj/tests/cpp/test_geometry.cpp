#include "doctest.h"

#include "carrousel/geometry.hpp"

using namespace carrousel;

namespace {
const MultiPoly X = MultiPoly::variable(VX);
const MultiPoly Y = MultiPoly::variable(VY);
const MultiPoly Z = MultiPoly::variable(VZ);
MultiPoly C(long n) { return MultiPoly(Scalar(n)); }
MultiPoly pw(const MultiPoly& b, int e) { return b.pow(e); }
}  // namespace

TEST_CASE("covering degree") {
    CHECK(covering_degree({Z * Z - X * Y * Y, true}) == 2);
    CHECK(covering_degree({pw(Z, 3) - pw(X, 2) * pw(Y, 2), true}) == 3);
    // (z-y)(z+y)(z-x): f(0,0,z) = z^3
    CHECK(covering_degree({(Z - Y) * (Z + Y) * (Z - X), true}) == 3);
    CHECK_THROWS_AS(covering_degree({X * X + Y * Y * Z, true}), Error);  // f(0,0,z)=0
}

TEST_CASE("genericity checks on the model germs") {
    auto r1 = genericity_check(Z * Z - X * Y * Y);
    CHECK(r1.weierstrass_ok);
    CHECK(r1.claim_ok);
    CHECK(r1.transversality_ok);

    auto r2 = genericity_check(X * X + Y * Y * Z);  // Whitney umbrella
    CHECK_FALSE(r2.weierstrass_ok);

    auto r3 = genericity_check(Z * Z - Y * Y);
    CHECK(r3.weierstrass_ok);
    CHECK(r3.claim_ok);
    CHECK(r3.transversality_ok);

    auto r4 = genericity_check(Z * Z);  // non-reduced
    CHECK_FALSE(r4.singular_locus_one_dim);
}

TEST_CASE("singular locus branches") {
    // z^2 - x y^2: Sigma = x-axis
    auto s1 = singular_locus({Z * Z - X * Y * Y, false}, Rat(6));
    REQUIRE(s1.size() == 1);
    CHECK(s1[0].is_x_axis());

    // z^2 - y^3: Sigma = x-axis
    auto s2 = singular_locus({Z * Z - Y * Y * Y, false}, Rat(6));
    REQUIRE(s2.size() == 1);
    CHECK(s2[0].is_x_axis());

    // z^2 - y^2 (node times line, reducible, accepted)
    auto s3 = singular_locus({Z * Z - Y * Y, false}, Rat(6));
    REQUIRE(s3.size() == 1);
    CHECK(s3[0].is_x_axis());

    CHECK_THROWS_AS(singular_locus({Z * Z, false}, Rat(6)), Error);
}

TEST_CASE("theta reduction") {
    // sigma already the x-axis: unchanged
    SurfaceGerm f1{Z * Z - X * Y * Y, false};
    SigmaBranch ax;
    auto g1 = theta_reduce(f1, ax, Rat(6));
    CHECK(g1.f == f1.f);

    // f = z^2 - (y - x)^2 x with sigma (u, u, 0) -> g = z^2 - y^2 x
    MultiPoly f2 = Z * Z - (Y - X) * (Y - X) * X;
    auto sigmas = singular_locus({f2, false}, Rat(6));
    REQUIRE(sigmas.size() == 1);
    CHECK(sigmas[0].k == 1);
    auto g2 = theta_reduce({f2, false}, sigmas[0], Rat(6));
    CHECK(g2.f == Z * Z - Y * Y * X);

    // pure ramification: sigma (u^2, 0, 0) -> g = f(x^2, y, z)
    SigmaBranch ram;
    ram.k = 2;
    auto g3 = theta_reduce(f1, ram, Rat(6));
    CHECK(g3.f == Z * Z - pw(X, 2) * Y * Y);
}

TEST_CASE("discriminant surface") {
    auto d1 = discriminant_surface({Z * Z - X * Y * Y, true});
    CHECK(d1.D == X * Y * Y + MultiPoly::variable(VT));

    // z^m - x^k y^l
    for (int m = 2; m <= 3; ++m) {
        MultiPoly f = MultiPoly::variable(VZ, m) - pw(X, 1) * pw(Y, 2);
        auto d = discriminant_surface({f, true});
        CHECK(d.D == X * Y * Y + MultiPoly::variable(VT));
    }

    auto d2 = discriminant_surface({Z * Z - Y * Y, true});
    CHECK(d2.D == Y * Y + MultiPoly::variable(VT));
}

TEST_CASE("transversal invariants") {
    // z^2 - x y^2: mu = 1, 2 branches, euler 0, annulus
    auto t1 = transversal_invariants({Z * Z - X * Y * Y, true}, Rat(6));
    CHECK(t1.mu == 1);
    CHECK(t1.branch_count == 2);
    CHECK(t1.euler == 0);
    CHECK(t1.annulus_flag);

    // z^3 - x y^3: mu = 4, euler -3 (oracle: staircase of (3-1)(3-1))
    auto t2 = transversal_invariants({pw(Z, 3) - X * pw(Y, 3), true}, Rat(6));
    CHECK(t2.mu == 4);
    CHECK(t2.euler == -3);
    CHECK_FALSE(t2.annulus_flag);

    // z^2 - y^2: independent of a
    auto t3 = transversal_invariants({Z * Z - Y * Y, true}, Rat(6));
    CHECK(t3.mu == 1);
    CHECK(t3.annulus_flag);

    // z^2 - x^2 y^2: two transversal branches fixed by the loop
    auto t4 = transversal_invariants({Z * Z - pw(X, 2) * pw(Y, 2), true}, Rat(6));
    CHECK(t4.mu == 1);
    CHECK(t4.branch_count == 2);
    CHECK(t4.branches.size() == 2);  // two separate classes (xden 1 each)

    // z^2 - x y^2: one class of two conjugate branches
    CHECK(t1.branches.size() == 1);
    CHECK(t1.branches[0].xden == 2);
}
