#include "doctest.h"

#include "carrousel/carrousel.hpp"

#include <random>

using namespace carrousel;

namespace {
const MultiPoly X = MultiPoly::variable(VX);
const MultiPoly Y = MultiPoly::variable(VY);
const MultiPoly T = MultiPoly::variable(VT);

BranchExpansion synth(const Rat& qp, const Rat& ed, const Scalar& b) {
    BranchExpansion e;
    e.q_over_p = qp;
    e.e_over_dprime = ed;
    e.b = b;
    e.w = PSeries::constant(Scalar(1));
    e.p = int(to_long(den(qp)));
    e.n = e.p;
    e.pprime = 1;
    e.d = int(to_long(den(ed))) > 1 ? to_long(den(ed)) : 1;
    e.nprime = e.d * e.n;
    e.strands = 1;
    return e;
}
}  // namespace

TEST_CASE("pair indexing follows the ladder order") {
    // Hirzebruch (2,1,2): one class, Q = {1/2}, Q_1 = {-1/2}, zone (1,1)
    auto bs = nested_expand(X * Y * Y + T, Rat(5), Rat(5));
    auto pa = first_exponent_pairs(bs);
    CHECK(pa.Q == std::vector<Rat>{Rat(1, 2)});
    CHECK(pa.Qi[0] == std::vector<Rat>{Rat(-1, 2)});
    CHECK(pa.branch_zone[0] == std::pair<int, int>{1, 1});

    // pairs (1/2, -1/2) and (3/2, 0): 3/2 indexes first
    std::vector<BranchExpansion> two{synth(Rat(1, 2), Rat(-1, 2), Scalar(2)),
                                     synth(Rat(3, 2), Rat(0), Scalar(3))};
    auto pa2 = first_exponent_pairs(two);
    CHECK(pa2.Q == std::vector<Rat>{Rat(3, 2), Rat(1, 2)});
    CHECK(pa2.branch_zone[0] == std::pair<int, int>{2, 1});
    CHECK(pa2.branch_zone[1] == std::pair<int, int>{1, 1});

    // identical pair, different b: same zone assignment
    std::vector<BranchExpansion> same{synth(Rat(1, 2), Rat(-1, 2), Scalar(1)),
                                      synth(Rat(1, 2), Rat(-1, 2), Scalar(2))};
    auto pa3 = first_exponent_pairs(same);
    CHECK(pa3.branch_zone[0] == pa3.branch_zone[1]);
}

TEST_CASE("ladder construction with mediants") {
    // single pair: one solid-torus zone bounded by theta
    std::vector<BranchExpansion> one{synth(Rat(1, 2), Rat(-1, 2), Scalar(1))};
    auto lad1 = build_zone_ladder(first_exponent_pairs(one));
    REQUIRE(lad1.zones.size() == 1);
    CHECK(lad1.zones[0].solid_torus);
    CHECK(lad1.zones[0].outer == Mag::theta_radius());
    CHECK(lad1.separators.empty());

    // Q = {3/2, 1/2}: s_1 = mediant = 1
    std::vector<BranchExpansion> two{synth(Rat(3, 2), Rat(0), Scalar(1)),
                                     synth(Rat(1, 2), Rat(0), Scalar(1))};
    auto lad2 = build_zone_ladder(first_exponent_pairs(two));
    REQUIRE(lad2.separators.size() == 1);
    CHECK(lad2.separators[0] == Rat(1));

    // Q_1 = {0, -1/2}: nu = mediant = -1/3
    std::vector<BranchExpansion> sec{synth(Rat(1, 2), Rat(0), Scalar(1)),
                                     synth(Rat(1, 2), Rat(-1, 2), Scalar(1))};
    auto lad3 = build_zone_ladder(first_exponent_pairs(sec));
    REQUIRE(lad3.nu[0].size() == 1);
    CHECK(lad3.nu[0][0] == Rat(-1, 3));
    CHECK(Rat(-1, 2) < lad3.nu[0][0]);
    CHECK(lad3.nu[0][0] < Rat(0));
}

TEST_CASE("zone membership certificates") {
    std::vector<BranchExpansion> two{synth(Rat(3, 2), Rat(0), Scalar(1)),
                                     synth(Rat(1, 2), Rat(-1, 2), Scalar(1))};
    auto pa = first_exponent_pairs(two);
    auto lad = build_zone_ladder(pa);
    auto c1 = classify_zone_membership(two[0], lad);
    CHECK(c1.i == 1);
    CHECK(c1.j == 1);
    auto c2 = classify_zone_membership(two[1], lad);
    CHECK(c2.i == 2);
    CHECK(c2.j == 1);

    // a pair absent from the ladder: stale-ladder
    auto stray = synth(Rat(5, 2), Rat(0), Scalar(1));
    CHECK_THROWS_AS(classify_zone_membership(stray, lad), Error);
}

TEST_CASE("ladder laws on random synthetic pair sets") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        int npairs = 1 + int(rng() % 4);
        std::vector<BranchExpansion> bs;
        for (int k = 0; k < npairs; ++k) {
            Rat qp(1 + long(rng() % 7), 1 + long(rng() % 4));
            qp.canonicalize();
            Rat ed(long(rng() % 9) - 4, 1 + long(rng() % 3));
            ed.canonicalize();
            bs.push_back(synth(qp, ed, Scalar(long(rng() % 5) + 1)));
        }
        auto pa = first_exponent_pairs(bs);
        auto lad = build_zone_ladder(pa);
        // coverage: inner of first zone is the zero radius, outer of last theta,
        // consecutive zones share exactly one boundary
        REQUIRE(!lad.zones.empty());
        CHECK(lad.zones.front().inner == Mag::zero_radius());
        CHECK(lad.zones.back().outer == Mag::theta_radius());
        for (size_t z = 0; z + 1 < lad.zones.size(); ++z) {
            CHECK(lad.zones[z].outer == lad.zones[z + 1].inner);
            CHECK(lad.zones[z].inner.smaller_than(lad.zones[z].outer));
        }
        // membership soundness: every branch classifies into the zone of its own pair
        for (auto& b : bs) {
            auto cert = classify_zone_membership(b, lad);
            auto& z = lad.zone(cert.i, cert.j);
            CHECK(z.pair.q_over_p == b.q_over_p);
            CHECK(z.pair.e_over_dprime == b.e_over_dprime);
            // and its radius does NOT certify into any other zone
            for (auto& other : lad.zones) {
                if (other.i == cert.i && other.j == cert.j) continue;
                bool inside = other.inner.smaller_than(cert.radius) &&
                              cert.radius.smaller_than(other.outer);
                CHECK_FALSE(inside);
            }
        }
    }
}

TEST_CASE("approximation tori grouping and certificates") {
    // two conjugate branches of x y^2 + t: one torus, l = 2, rho = -1/4
    auto bs = nested_expand(X * Y * Y + T, Rat(5), Rat(5));
    auto pa = first_exponent_pairs(bs);
    auto lad = build_zone_ladder(pa);
    auto ts = approximation_tori(bs, lad, pa);
    REQUIRE(ts.tori.size() == 1);
    CHECK(ts.tori[0].l == 2);
    CHECK(ts.tori[0].d == 2);
    CHECK(ts.tori[0].rho == Rat(-1, 4));
    CHECK(ts.tori[0].sun_separation_ok);
    CHECK(ts.tori[0].tube_in_zone_ok);

    // single branch with d' = 1, p = 1: l = 1, one sun
    std::vector<BranchExpansion> one{synth(Rat(1), Rat(0), Scalar(1))};
    auto pa1 = first_exponent_pairs(one);
    auto lad1 = build_zone_ladder(pa1);
    auto ts1 = approximation_tori(one, lad1, pa1);
    REQUIRE(ts1.tori.size() == 1);
    CHECK(ts1.tori[0].l == 1);

    // same pair, b = 1 and b = 2: distinct tori with a separation certificate
    std::vector<BranchExpansion> pairbs{synth(Rat(1, 2), Rat(0), Scalar(1)),
                                        synth(Rat(1, 2), Rat(0), Scalar(2))};
    auto pa2 = first_exponent_pairs(pairbs);
    auto lad2 = build_zone_ladder(pa2);
    auto ts2 = approximation_tori(pairbs, lad2, pa2);
    REQUIRE(ts2.tori.size() == 2);
    REQUIRE(ts2.separation_certified.size() == 1);

    // sun count = lcm(d', p) in general
    std::vector<BranchExpansion> hirz = nested_expand(X * Y * Y * Y + T, Rat(5), Rat(5));
    auto pah = first_exponent_pairs(hirz);
    auto tsh = approximation_tori(hirz, build_zone_ladder(pah), pah);
    REQUIRE(tsh.tori.size() == 1);
    CHECK(tsh.tori[0].l == 3);
}
