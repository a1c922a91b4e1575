#pragma once

#include "carrousel/tseries.hpp"

#include <algorithm>

namespace carrousel {

// Polynomial in a main variable whose coefficients are truncated series in a
// parameter over the coefficient field C (index = degree in the main var).
template <class C>
using SPoly = std::vector<TS<C>>;

template <class C>
struct CharRoot {
    C value;
    Int rel_size;  // number of distinct root functions this value stands for
};

// One conjugacy class of Newton-Puiseux roots of F.
template <class C>
struct NPClass {
    TS<C> series;
    Int tden{1};     // lcm of the parameter-exponent denominators
    Int strands{1};  // total number of distinct root functions in the class
    bool exact_root = false;
    int residual_multiplicity = 1;  // >1 when the class is unseparated at the order cap
};

struct NPOptions {
    bool positive_only = true;  // expand only roots that tend to 0
    Rat order = 6;              // generate terms with exponent < order
    int max_steps = 20000;
};

template <class C>
using RootProvider = std::function<std::vector<CharRoot<C>>(const std::vector<C>&)>;

namespace npdetail {

struct HullPt {
    int i;
    Rat val;
    bool certain;
};

// indices of the lower hull vertices of the certain points, increasing i
inline std::vector<size_t> lower_hull(const std::vector<HullPt>& pts) {
    std::vector<size_t> h;
    for (size_t k = 0; k < pts.size(); ++k) {
        if (!pts[k].certain) continue;
        while (h.size() >= 2) {
            const auto& a = pts[h[h.size() - 2]];
            const auto& b = pts[h[h.size() - 1]];
            const auto& c = pts[k];
            Rat lhs = (b.val - a.val) * Rat(c.i - a.i);
            Rat rhs = (c.val - a.val) * Rat(b.i - a.i);
            if (lhs >= rhs)
                h.pop_back();
            else
                break;
        }
        h.push_back(k);
    }
    return h;
}

}  // namespace npdetail

// status probe that never throws: 0 certainly zero, 1 certain leading, 2 uncertain
template <class C>
int probe_leading(const TS<C>& s, Rat& e, C& c) {
    for (auto& [ee, cc] : s.terms) {
        ZS st = zstatus(cc);
        if (st == ZS::NonZero) {
            e = ee;
            c = cc;
            return 1;
        }
        if (st == ZS::Unknown) {
            e = ee;
            return 2;
        }
    }
    if (s.inf) return 0;
    e = s.trunc;
    return 2;
}

template <class C>
class NPDriver {
  public:
    NPDriver(RootProvider<C> provider, std::function<Scalar(long)> zeta)
        : provider_(std::move(provider)), zeta_(std::move(zeta)) {}

    std::vector<NPClass<C>> expand(const SPoly<C>& F, const NPOptions& opts) {
        steps_ = 0;
        std::vector<NPClass<C>> out;
        expand_rec(F, opts, Rat(0), TS<C>::zero(), Int(1), true, out);
        return out;
    }

    // total root mass tending to zero (positive-slope lattice length + main-var
    // valuation); used by callers for conservation checks
    static Int positive_mass(const SPoly<C>& F_in) {
        SPoly<C> F = F_in;
        while (!F.empty() && zstatus(F.back()) == ZS::Zero) F.pop_back();
        size_t v = 0;
        while (v < F.size() && zstatus(F[v]) == ZS::Zero) ++v;
        Int mass{long(v)};
        std::vector<npdetail::HullPt> pts;
        for (size_t i = v; i < F.size(); ++i) {
            Rat e;
            C c;
            int st = probe_leading(F[i], e, c);
            if (st == 0) continue;
            pts.push_back({int(i - v), e, st == 1});
        }
        auto hull = npdetail::lower_hull(pts);
        for (size_t hi = 0; hi + 1 < hull.size(); ++hi) {
            const auto& A = pts[hull[hi]];
            const auto& B = pts[hull[hi + 1]];
            Rat mu = (A.val - B.val) / Rat(B.i - A.i);
            if (mu > 0) mass += Int(B.i - A.i);
        }
        return mass;
    }

  private:
    RootProvider<C> provider_;
    std::function<Scalar(long)> zeta_;
    int steps_ = 0;

    void expand_rec(const SPoly<C>& F_in, const NPOptions& opts, const Rat& base_exp,
                    const TS<C>& prefix, Int tden, bool top, std::vector<NPClass<C>>& out) {
        if (++steps_ > opts.max_steps)
            fail(ErrorKind::InternalError, "puiseux", "expansion step budget exceeded");
        SPoly<C> F = F_in;
        while (!F.empty() && zstatus(F.back()) == ZS::Zero) F.pop_back();
        if (F.empty()) fail(ErrorKind::ExpansionBug, "puiseux", "zero polynomial in driver");

        // exact zero root of the current polynomial = exactly terminating series
        size_t v = 0;
        while (v < F.size() && zstatus(F[v]) == ZS::Zero) ++v;
        if (v > 0) {
            NPClass<C> z;
            z.series = prefix;
            z.tden = prefix.exp_den();
            z.strands = Int(long(v));
            z.exact_root = true;
            out.push_back(z);
            F.erase(F.begin(), F.begin() + long(v));
        }
        if (F.size() <= 1) return;
        if (zstatus(F[0]) == ZS::Unknown)
            fail(ErrorKind::TruncationTooShort, "puiseux",
                 "cannot decide divisibility by the main variable",
                 "retry with a larger truncation order");

        // Newton polygon support
        std::vector<npdetail::HullPt> pts;
        std::vector<C> leads(F.size());
        for (size_t i = 0; i < F.size(); ++i) {
            Rat e;
            C c;
            int st = probe_leading(F[i], e, c);
            if (st == 0) continue;
            if (st == 1) leads[i] = c;
            pts.push_back({int(i), e, st == 1});
        }
        auto hull = npdetail::lower_hull(pts);
        if (hull.size() < 1)
            fail(ErrorKind::TruncationTooShort, "puiseux", "no certified support");

        // verify uncertain support cannot undercut or touch the hull
        auto hull_val_at = [&](const Rat& i) -> std::optional<Rat> {
            for (size_t hi = 0; hi + 1 < hull.size(); ++hi) {
                const auto& A = pts[hull[hi]];
                const auto& B = pts[hull[hi + 1]];
                if (Rat(A.i) <= i && i <= Rat(B.i)) {
                    return A.val + (B.val - A.val) * (i - Rat(A.i)) / Rat(B.i - A.i);
                }
            }
            return std::nullopt;
        };
        for (auto& P : pts) {
            if (P.certain) continue;
            auto hv = hull_val_at(Rat(P.i));
            bool danger;
            if (!hv)
                danger = P.i < pts[hull.front()].i;  // could create a new edge at low degree
            else
                danger = P.val <= *hv;
            if (danger)
                fail(ErrorKind::TruncationTooShort, "puiseux",
                     "truncated coefficient could alter the Newton polygon",
                     "retry with a larger truncation order");
        }

        // gather positive edges (or all edges at a top-level all-roots call)
        struct Edge {
            int i0, i1;
            Rat v0, v1, mu;
        };
        std::vector<Edge> edges;
        Int mass_pos(0);
        for (size_t hi = 0; hi + 1 < hull.size(); ++hi) {
            const auto& A = pts[hull[hi]];
            const auto& B = pts[hull[hi + 1]];
            Rat mu = (A.val - B.val) / Rat(B.i - A.i);
            bool want = top && !opts.positive_only ? true : mu > 0;
            if (mu > 0) mass_pos += Int(B.i - A.i);
            if (want) edges.push_back({A.i, B.i, A.val, B.val, mu});
        }
        if (edges.empty()) return;

        // order cap reached: emit the (possibly unseparated) residue
        if (base_exp >= opts.order && base_exp > 0) {
            Rat next_mu = edges.front().mu;
            for (auto& e : edges) next_mu = rat_min(next_mu, e.mu);
            NPClass<C> r;
            r.series = prefix;
            r.series.inf = false;
            r.series.trunc = base_exp + next_mu;
            r.tden = prefix.exp_den();
            r.strands = mass_pos;
            r.residual_multiplicity = int(to_long(mass_pos));
            out.push_back(r);
            return;
        }

        Int grid(1);
        for (auto& c : F) grid = ilcm(grid, c.exp_den());

        for (auto& E : edges) {
            Rat base = E.v0 + E.mu * Rat(E.i0);
            std::vector<C> charpoly(size_t(E.i1 - E.i0) + 1, C{});
            for (auto& P : pts) {
                if (P.i < E.i0 || P.i > E.i1) continue;
                Rat line = base - E.mu * Rat(P.i);
                if (P.certain && P.val == line) charpoly[size_t(P.i - E.i0)] = leads[size_t(P.i)];
            }
            auto roots = provider_(charpoly);
            // relative ramification: den(mu) over the current exponent grid
            Int dmu = den(E.mu);
            Int p_rel = dmu / igcd(dmu, grid);
            auto orbits = group_orbits(roots, to_long(p_rel));
            for (auto& orb : orbits) {
                const C& gamma = orb.root.value;
                SPoly<C> G = substitute(F, E.mu, base, gamma, opts, base_exp);
                TS<C> pref2 = prefix;
                pref2.push_term(base_exp + E.mu, gamma);
                Int tden2 = ilcm(tden, den(E.mu));
                size_t before = out.size();
                expand_rec(G, opts, base_exp + E.mu, pref2, tden2, false, out);
                // scale the strand counts of everything this branch emitted
                Int mult = Int(long(orb.merged)) * orb.root.rel_size;
                for (size_t k = before; k < out.size(); ++k) {
                    out[k].strands *= mult;
                    out[k].tden = ilcm(out[k].tden, tden2);
                }
            }
        }
    }

    struct Orbit {
        CharRoot<C> root;
        int merged;
    };

    std::vector<Orbit> group_orbits(std::vector<CharRoot<C>>& roots, long p_rel) {
        std::vector<Orbit> orbits;
        std::vector<bool> used(roots.size(), false);
        Scalar zp = p_rel > 1 ? zeta_(p_rel) : Scalar(1);
        for (size_t i = 0; i < roots.size(); ++i) {
            if (used[i]) continue;
            used[i] = true;
            int merged = 1;
            if (p_rel > 1) {
                Scalar zk = zp;
                for (long k = 1; k < p_rel; ++k, zk = zk * zp) {
                    C rot = roots[i].value;
                    scalar_mul_inplace(rot, zk);
                    for (size_t j = i + 1; j < roots.size(); ++j) {
                        if (used[j]) continue;
                        if (same_value(roots[j].value, rot)) {
                            used[j] = true;
                            ++merged;
                            break;
                        }
                    }
                }
            }
            orbits.push_back({roots[i], merged});
        }
        return orbits;
    }

    static bool same_value(const C& a, const C& b) {
        if constexpr (std::is_same_v<C, Scalar>) {
            return (a - b).is_zero();
        } else {
            return zstatus(a - b) != ZS::NonZero;
        }
    }

    SPoly<C> substitute(const SPoly<C>& F, const Rat& mu, const Rat& base, const C& gamma,
                        const NPOptions& opts, const Rat& base_exp) {
        size_t n = F.size();
        std::vector<C> gp(n);
        gp[0] = ring_one_for((const C*)nullptr);
        for (size_t k = 1; k < n; ++k) gp[k] = gp[k - 1] * gamma;
        std::vector<std::vector<Int>> binom(n, std::vector<Int>(n, Int(0)));
        for (size_t i = 0; i < n; ++i) {
            binom[i][0] = 1;
            for (size_t j = 1; j <= i; ++j)
                binom[i][j] = binom[i - 1][j - 1] + (j < i ? binom[i - 1][j] : Int(0));
        }
        SPoly<C> G(n);
        Rat order_rem = opts.order - base_exp - mu;
        for (size_t j = 0; j < n; ++j) {
            TS<C> acc;
            for (size_t i = j; i < n; ++i) {
                if (zstatus(F[i]) == ZS::Zero) continue;
                C factor = gp[i - j] * scalar_of(binom[i][j]);
                if (zstatus(factor) == ZS::Zero) continue;
                TS<C> term = F[i].scaled(factor).shifted(mu * Rat(long(i)) - base);
                acc = acc + term;
            }
            // keep a bounded window beyond the target order for truncated data
            if (!acc.inf) acc.clamp(rat_max(order_rem + Rat(2), Rat(1)));
            G[j] = acc;
        }
        return G;
    }

    static C scalar_of(const Int& n) {
        C one = ring_one_for((const C*)nullptr);
        Scalar s{Rat(n)};
        scalar_mul_inplace(one, s);
        return one;
    }
};

}  // namespace carrousel
