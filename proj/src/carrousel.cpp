#include "carrousel/carrousel.hpp"

#include <algorithm>
#include <sstream>

namespace carrousel {

std::string Mag::str() const {
    std::ostringstream os;
    bool any = false;
    if (eta >= 1000000) return "0";
    if (eta != 0) {
        os << "eta^(" << rat_str(eta) << ")";
        any = true;
    }
    if (theta != 0) {
        if (any) os << "*";
        os << "theta^(" << rat_str(theta) << ")";
        any = true;
    }
    if (alpha != 0) {
        if (any) os << "*";
        os << "alpha^(" << rat_str(alpha) << ")";
        any = true;
    }
    if (!any) os << "1";
    return os.str();
}

const ZoneDesc& ZoneLadder::zone(int i, int j) const {
    int idx = zone_index(i, j);
    if (idx < 0) fail(ErrorKind::StaleLadder, "carrousel", "zone index out of range");
    return zones[size_t(idx)];
}

int ZoneLadder::zone_index(int i, int j) const {
    for (size_t k = 0; k < zones.size(); ++k)
        if (zones[k].i == i && zones[k].j == j) return int(k);
    return -1;
}

PairAssignment first_exponent_pairs(const std::vector<BranchExpansion>& expansions) {
    if (expansions.empty())
        fail(ErrorKind::InvalidElimination, "carrousel", "no branch expansions to index");
    PairAssignment out;
    for (auto& b : expansions) {
        if (b.b.is_zero())
            fail(ErrorKind::TruncationTooShort, "carrousel",
                 "uncertified leading coefficient in a branch expansion");
        if (std::find(out.Q.begin(), out.Q.end(), b.q_over_p) == out.Q.end())
            out.Q.push_back(b.q_over_p);
    }
    std::sort(out.Q.rbegin(), out.Q.rend());
    out.Qi.resize(out.Q.size());
    for (auto& b : expansions) {
        size_t i = size_t(std::find(out.Q.begin(), out.Q.end(), b.q_over_p) - out.Q.begin());
        auto& qi = out.Qi[i];
        if (std::find(qi.begin(), qi.end(), b.e_over_dprime) == qi.end())
            qi.push_back(b.e_over_dprime);
    }
    for (auto& qi : out.Qi) std::sort(qi.rbegin(), qi.rend());
    for (auto& b : expansions) {
        size_t i = size_t(std::find(out.Q.begin(), out.Q.end(), b.q_over_p) - out.Q.begin());
        size_t j = size_t(std::find(out.Qi[i].begin(), out.Qi[i].end(), b.e_over_dprime) -
                          out.Qi[i].begin());
        out.branch_zone.push_back({int(i) + 1, int(j) + 1});
    }
    return out;
}

ZoneLadder build_zone_ladder(const PairAssignment& pairs) {
    if (pairs.Q.empty())
        fail(ErrorKind::InvalidElimination, "carrousel", "empty pair set");
    ZoneLadder lad;
    lad.quotients = pairs.Q;
    lad.seconds = pairs.Qi;
    int k = int(pairs.Q.size());
    // separators between consecutive quotients (Farey mediants)
    for (int i = 0; i + 1 < k; ++i) {
        Rat s = mediant(lad.quotients[size_t(i)], lad.quotients[size_t(i) + 1]);
        if (!(lad.quotients[size_t(i) + 1] < s && s < lad.quotients[size_t(i)]))
            fail(ErrorKind::InternalError, "carrousel", "separator not strictly between");
        lad.separators.push_back(s);
    }
    lad.nu.resize(size_t(k));
    for (int i = 0; i < k; ++i) {
        auto& sec = lad.seconds[size_t(i)];
        for (size_t j = 0; j + 1 < sec.size(); ++j) {
            Rat v = mediant(sec[j], sec[j + 1]);
            if (!(sec[j + 1] < v && v < sec[j]))
                fail(ErrorKind::InternalError, "carrousel", "nu separator not strictly between");
            lad.nu[size_t(i)].push_back(v);
        }
    }
    // zones in lexicographic order; inner bound of each = outer bound of previous
    Mag prev = Mag::zero_radius();
    for (int i = 1; i <= k; ++i) {
        int li = int(lad.seconds[size_t(i - 1)].size());
        for (int j = 1; j <= li; ++j) {
            ZoneDesc z;
            z.i = i;
            z.j = j;
            z.pair = {lad.quotients[size_t(i - 1)], lad.seconds[size_t(i - 1)][size_t(j - 1)]};
            z.inner = prev;
            if (j < li)
                z.outer = Mag::of(lad.quotients[size_t(i - 1)], lad.nu[size_t(i - 1)][size_t(j - 1)]);
            else if (i < k)
                z.outer = {lad.separators[size_t(i - 1)], 0, 0};
            else
                z.outer = Mag::theta_radius();
            z.solid_torus = (i == 1 && j == 1);
            if (!prev.smaller_than(z.outer))
                fail(ErrorKind::InternalError, "carrousel", "zone bounds out of order");
            prev = z.outer;
            lad.zones.push_back(z);
        }
    }
    return lad;
}

ZoneCertificate classify_zone_membership(const BranchExpansion& b, const ZoneLadder& ladder) {
    ZoneCertificate cert;
    cert.radius = Mag::of(b.q_over_p, b.e_over_dprime);
    for (auto& z : ladder.zones) {
        if (z.pair.q_over_p == b.q_over_p && z.pair.e_over_dprime == b.e_over_dprime) {
            cert.i = z.i;
            cert.j = z.j;
            cert.inner = z.inner;
            cert.outer = z.outer;
            // the certified strict inequalities
            if (!(cert.inner.smaller_than(cert.radius) && cert.radius.smaller_than(cert.outer)))
                fail(ErrorKind::InternalError, "carrousel",
                     "branch radius does not lie inside its zone");
            return cert;
        }
    }
    fail(ErrorKind::StaleLadder, "carrousel",
         "branch pair not present in the ladder; rebuild it from the full pair set");
}

TorusSet approximation_tori(const std::vector<BranchExpansion>& expansions,
                            const ZoneLadder& ladder, const PairAssignment& pairs) {
    TorusSet out;
    std::vector<int> torus_of(expansions.size(), -1);
    for (size_t bi = 0; bi < expansions.size(); ++bi) {
        const auto& b = expansions[bi];
        Int l = ilcm(den(b.e_over_dprime), Int(b.p));
        bool placed = false;
        for (auto& t : out.tori) {
            if (!(t.pair == ExponentPair{b.q_over_p, b.e_over_dprime})) continue;
            if (t.l != l) continue;
            // same torus iff b / t.b is an l-th root of unity
            Scalar ratio = b.b / t.leading_b;
            if (ratio.pow(to_long(l)).is_one()) {
                t.members.push_back(int(bi));
                t.d = ilcm(t.d, b.d);
                t.rho = t.pair.e_over_dprime + Rat(1, 2 * t.d);
                placed = true;
                break;
            }
        }
        if (!placed) {
            ApproxTorus t;
            t.members = {int(bi)};
            t.pair = {b.q_over_p, b.e_over_dprime};
            t.leading_b = b.b;
            t.l = l;
            t.d = b.d;
            t.rho = b.e_over_dprime + Rat(1, 2 * b.d);
            t.zone_i = pairs.branch_zone[bi].first;
            t.zone_j = pairs.branch_zone[bi].second;
            out.tori.push_back(t);
        }
    }
    // certificates
    for (size_t ti = 0; ti < out.tori.size(); ++ti) {
        auto& t = out.tori[ti];
        // (1) sun separation: b(1 - zeta) != 0 for every nontrivial l-th root zeta
        t.sun_separation_ok = !t.leading_b.is_zero();
        long l = to_long(t.l);
        if (l > 1) {
            Scalar zeta = Tower::instance().root_of_unity(l);
            Scalar zk = zeta;
            for (long k = 1; k < l; ++k, zk = zk * zeta) {
                if ((t.leading_b - t.leading_b * zk).is_zero()) {
                    t.sun_separation_ok = false;
                    break;
                }
            }
        }
        if (!t.sun_separation_ok)
            fail(ErrorKind::InternalError, "carrousel", "sun separation certificate failed");
        // (3) tube inside the zone: inner alpha bound < e/d' and rho > e/d'
        const ZoneDesc& z = ladder.zone(t.zone_i, t.zone_j);
        t.tube_in_zone_ok = t.rho > t.pair.e_over_dprime;
        if (z.outer.eta == t.pair.q_over_p)  // alpha-refined outer bound
            t.tube_in_zone_ok = t.tube_in_zone_ok && (z.outer.alpha < t.pair.e_over_dprime);
        if (z.inner.eta == t.pair.q_over_p)
            t.tube_in_zone_ok = t.tube_in_zone_ok && (t.pair.e_over_dprime < z.inner.alpha);
        if (!t.tube_in_zone_ok)
            fail(ErrorKind::InternalError, "carrousel", "tube-in-zone certificate failed");
    }
    // (4) distinct tori with the same pair: min over zeta of |b2 - zeta b1| != 0
    for (size_t a = 0; a < out.tori.size(); ++a)
        for (size_t b2 = a + 1; b2 < out.tori.size(); ++b2) {
            auto& ta = out.tori[a];
            auto& tb = out.tori[b2];
            if (!(ta.pair == tb.pair)) continue;
            long l = to_long(ilcm(ta.l, tb.l));
            Scalar zeta = l > 1 ? Tower::instance().root_of_unity(l) : Scalar(1);
            Scalar zk(1);
            for (long k = 0; k < l; ++k, zk = zk * zeta) {
                if ((tb.leading_b - ta.leading_b * zk).is_zero())
                    fail(ErrorKind::InternalError, "carrousel",
                         "distinct tori with coincident leading data");
            }
            out.separation_certified.push_back({int(a), int(b2)});
        }
    (void)torus_of;
    return out;
}

}  // namespace carrousel
