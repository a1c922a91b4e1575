#pragma once

#include "carrousel/puiseux.hpp"

namespace carrousel {

// Magnitude eta^a theta^b alpha^c in the regime 0 < eta << theta << alpha < 1.
// Comparison is lexicographic on (a, b, c): a larger exponent tuple means a
// smaller quantity.
struct Mag {
    Rat eta, theta, alpha;
    static Mag zero_radius() { return {Rat(1000000), 0, 0}; }  // smaller than all
    static Mag theta_radius() { return {0, 1, 0}; }
    static Mag of(const Rat& e, const Rat& a) { return {e, 0, a}; }
    // *this < o as magnitudes
    bool smaller_than(const Mag& o) const {
        if (eta != o.eta) return eta > o.eta;
        if (theta != o.theta) return theta > o.theta;
        return alpha > o.alpha;
    }
    bool operator==(const Mag& o) const {
        return eta == o.eta && theta == o.theta && alpha == o.alpha;
    }
    std::string str() const;
};

struct ExponentPair {
    Rat q_over_p;
    Rat e_over_dprime;
    bool operator==(const ExponentPair& o) const {
        return q_over_p == o.q_over_p && e_over_dprime == o.e_over_dprime;
    }
    // ladder order: larger quotient first, then larger second exponent
    bool operator<(const ExponentPair& o) const {
        if (q_over_p != o.q_over_p) return q_over_p > o.q_over_p;
        return e_over_dprime > o.e_over_dprime;
    }
};

struct ZoneDesc {
    int i = 1, j = 1;  // 1-based ladder indices
    ExponentPair pair;
    Mag inner, outer;
    bool solid_torus = false;
};

struct ZoneLadder {
    std::vector<Rat> quotients;             // q_1/p_1 > ... > q_k/p_k
    std::vector<std::vector<Rat>> seconds;  // per i: e_{i,1} > ... > e_{i,l_i}
    std::vector<Rat> separators;            // s_1 .. s_{k-1}
    std::vector<std::vector<Rat>> nu;       // per i: nu_{i,1} .. nu_{i,l_i - 1}
    std::vector<ZoneDesc> zones;            // lexicographic order on (i, j)
    const ZoneDesc& zone(int i, int j) const;
    int zone_index(int i, int j) const;
};

struct PairAssignment {
    std::vector<Rat> Q;
    std::vector<std::vector<Rat>> Qi;
    std::vector<std::pair<int, int>> branch_zone;  // per input branch, 1-based (i, j)
};

PairAssignment first_exponent_pairs(const std::vector<BranchExpansion>& expansions);

ZoneLadder build_zone_ladder(const PairAssignment& pairs);

// membership with a symbolic certificate: the branch radius lies strictly
// between the zone bounds in the (eta, alpha) exponent order
struct ZoneCertificate {
    int i = 0, j = 0;
    Mag radius;    // eta^(q/p) alpha^(e/d')
    Mag inner, outer;
};
ZoneCertificate classify_zone_membership(const BranchExpansion& b, const ZoneLadder& ladder);

struct ApproxTorus {
    std::vector<int> members;  // indices into the expansion list
    ExponentPair pair;
    Scalar leading_b;
    Int l;    // lcm(d', p): number of suns
    Rat rho;  // e/d' + 1/(2d)
    Int d;    // the x-denominator entering rho
    int zone_i = 1, zone_j = 1;
    // symbolic disjointness data
    bool sun_separation_ok = false;   // b(1 - zeta) != 0 for all zeta^l = 1, zeta != 1
    bool tube_in_zone_ok = false;     // nu_{i,j} < e/d' < rho exponent chain
};

struct TorusSet {
    std::vector<ApproxTorus> tori;
    // for every pair of distinct tori sharing a zone: min_zeta |b2 - zeta b1| != 0
    std::vector<std::array<int, 2>> separation_certified;
};

TorusSet approximation_tori(const std::vector<BranchExpansion>& expansions,
                            const ZoneLadder& ladder, const PairAssignment& pairs);

}  // namespace carrousel
