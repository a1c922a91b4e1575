#include "carrousel/puiseux.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace carrousel {

// ---------------------------------------------------------------------------
// rendering helpers

std::string pseries_str(const PSeries& s, const char* var) {
    std::ostringstream os;
    bool first = true;
    for (auto& [e, c] : s.terms) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str() << ")";
        if (e != 0) {
            os << "*" << var << "^";
            if (den(e) == 1)
                os << num(e);
            else
                os << "(" << rat_str(e) << ")";
        }
    }
    if (first) os << "0";
    if (!s.inf) os << " + O(" << var << "^(" << rat_str(s.trunc) << "))";
    return os.str();
}

std::string ttseries_str(const TTSeries& s, const char* tvar, const char* xvar) {
    std::ostringstream os;
    bool first = true;
    for (auto& [e, c] : s.terms) {
        if (!first) os << " + ";
        first = false;
        os << "[" << pseries_str(c, xvar) << "]";
        if (e != 0) {
            os << "*" << tvar << "^";
            if (den(e) == 1)
                os << num(e);
            else
                os << "(" << rat_str(e) << ")";
        }
    }
    if (first) os << "0";
    if (!s.inf) os << " + O(" << tvar << "^(" << rat_str(s.trunc) << "))";
    return os.str();
}

// ---------------------------------------------------------------------------
// newton polygon over MultiPoly support

std::vector<PolygonEdge> newton_polygon(const MultiPoly& F, int main_var, int param_var) {
    if (F.is_zero())
        fail(ErrorKind::InvalidElimination, "puiseux", "newton polygon of the zero polynomial",
             "empty-input");
    auto cs = F.coeffs_in(main_var);
    if (!cs.empty() && cs[0].is_zero())
        fail(ErrorKind::InvalidElimination, "puiseux",
             "polynomial divisible by the main variable; divide out first");
    struct Pt {
        int i;
        int j;
        MultiPoly lead;
    };
    std::vector<Pt> pts;
    for (size_t i = 0; i < cs.size(); ++i) {
        if (cs[i].is_zero()) continue;
        auto pc = cs[i].coeffs_in(param_var);
        for (size_t j = 0; j < pc.size(); ++j)
            if (!pc[j].is_zero()) {
                pts.push_back({int(i), int(j), pc[j]});
                break;  // minimal param-degree of this coefficient
            }
    }
    std::vector<size_t> hull;
    for (size_t k = 0; k < pts.size(); ++k) {
        while (hull.size() >= 2) {
            auto& a = pts[hull[hull.size() - 2]];
            auto& b = pts[hull[hull.size() - 1]];
            auto& c = pts[k];
            long lhs = long(b.j - a.j) * long(c.i - a.i);
            long rhs = long(c.j - a.j) * long(b.i - a.i);
            if (lhs >= rhs)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(k);
    }
    std::vector<PolygonEdge> edges;
    for (size_t h = 0; h + 1 < hull.size(); ++h) {
        auto& A = pts[hull[h]];
        auto& B = pts[hull[h + 1]];
        Rat slope(Int(long(A.j - B.j)), Int(long(B.i - A.i)));
        slope.canonicalize();
        if (slope <= 0) continue;  // only branches tending to zero
        PolygonEdge e;
        e.slope = slope;
        e.lattice_length = Int(long(B.i - A.i));
        e.char_poly.assign(size_t(B.i - A.i) + 1, MultiPoly());
        for (auto& P : pts) {
            if (P.i < A.i || P.i > B.i) continue;
            Rat line = Rat(A.j) - slope * Rat(P.i - A.i);
            if (Rat(P.j) == line) e.char_poly[size_t(P.i - A.i)] = P.lead;
        }
        edges.push_back(std::move(e));
    }
    return edges;
}

// ---------------------------------------------------------------------------
// providers

std::vector<CharRoot<Scalar>> scalar_roots(const std::vector<Scalar>& charpoly) {
    UPoly p = uptrim(charpoly);
    auto roots = Tower::instance().all_roots(p);
    std::vector<CharRoot<Scalar>> out;
    for (auto& r : roots) out.push_back({r.value, Int(1)});
    return out;
}

std::vector<CharRoot<PSeries>> pseries_roots(const std::vector<PSeries>& charpoly,
                                             const Rat& x_order) {
    NPDriver<Scalar> inner([](const std::vector<Scalar>& cp) { return scalar_roots(cp); },
                           [](long n) { return Tower::instance().root_of_unity(n); });
    SPoly<Scalar> F = charpoly;  // a PSeries already is a TS<Scalar>
    Rat ord = x_order;
    for (int attempt = 0; attempt < 4; ++attempt) {
        NPOptions opts;
        opts.positive_only = false;
        opts.order = ord;
        auto classes = inner.expand(F, opts);
        std::vector<CharRoot<PSeries>> out;
        bool ok = true;
        for (auto& c : classes) {
            if (c.residual_multiplicity > 1) {
                Int rel = c.strands / Int(c.residual_multiplicity);
                if (rel * Int(c.residual_multiplicity) != c.strands) {
                    ok = false;  // asymmetric unseparated cluster: need more terms
                    break;
                }
                out.push_back({c.series, rel});
            } else {
                out.push_back({c.series, c.strands});
            }
        }
        if (ok) return out;
        ord *= 2;
    }
    fail(ErrorKind::TruncationTooShort, "puiseux", "characteristic roots could not be separated",
         "retry with a larger truncation order");
}

// ---------------------------------------------------------------------------
// conversions

TTSeries ttseries_of_poly(const MultiPoly& coeff, int param_var) {
    TTSeries out;
    std::map<int, PSeries> by_param;
    for (auto& [e, c] : coeff.terms) {
        for (int v = 0; v < 4; ++v)
            if (v != VX && v != param_var && e[size_t(v)] != 0)
                fail(ErrorKind::InternalError, "puiseux", "unexpected variable in coefficient");
        int pe = e[size_t(param_var)];
        Rat xe = param_var == VX ? Rat(0) : Rat(e[VX]);
        by_param[pe] = by_param[pe] + PSeries::monomial(xe, c);
    }
    for (auto& [pe, ps] : by_param) out.push_term(Rat(pe), ps);
    return out;
}

SPoly<PSeries> spoly_of_multipoly(const MultiPoly& F, int main_var, int param_var) {
    auto cs = F.coeffs_in(main_var);
    SPoly<PSeries> out(cs.size());
    for (size_t i = 0; i < cs.size(); ++i) out[i] = ttseries_of_poly(cs[i], param_var);
    return out;
}

Int xden_of(const TTSeries& s) {
    Int d(1);
    for (auto& [e, c] : s.terms) d = ilcm(d, c.exp_den());
    return d;
}

bool tt_equal(const TTSeries& a, const TTSeries& b) { return zstatus(a - b) != ZS::NonZero; }

TTSeries rotate_series(const TTSeries& s, int loop_var, const Scalar& zeta, const Int& D) {
    if (loop_var == VT) return s.rotated(zeta, D);
    TTSeries r = s;
    for (auto& [e, c] : r.terms) c = c.rotated(zeta, D);
    return r;
}

// ---------------------------------------------------------------------------
// expansion entry points

std::vector<PXClass> puiseux_expand_px(const MultiPoly& F, int main_var, int param_var,
                                       const Rat& order, const Rat& x_order) {
    if (F.is_zero()) fail(ErrorKind::InvalidElimination, "puiseux", "expansion of zero");
    for (int v = 0; v < 4; ++v)
        if (v != VX && v != main_var && v != param_var && F.degree(v) > 0)
            fail(ErrorKind::InternalError, "puiseux", "unexpected extra variable in expansion");
    SPoly<PSeries> sp = spoly_of_multipoly(F, main_var, param_var);
    NPDriver<PSeries> driver(
        [x_order](const std::vector<PSeries>& cp) { return pseries_roots(cp, x_order); },
        [](long n) { return Tower::instance().root_of_unity(n); });
    NPOptions opts;
    opts.positive_only = true;
    opts.order = order;
    auto classes = driver.expand(sp, opts);
    Int mass = NPDriver<PSeries>::positive_mass(sp);
    Int got(0);
    for (auto& c : classes) got += c.strands;
    if (got != mass)
        fail(ErrorKind::ExpansionBug, "puiseux",
             "Newton-polygon mass not conserved: got " + rat_str(Rat(got)) + " of " +
                 rat_str(Rat(mass)));
    std::vector<PXClass> out;
    for (auto& c : classes) {
        PXClass pc;
        pc.series = c.series;
        pc.tden = c.tden;
        pc.xden = xden_of(c.series);
        pc.strands = c.strands;
        pc.exact_root = c.exact_root;
        pc.residual = c.residual_multiplicity;
        out.push_back(std::move(pc));
    }
    std::sort(out.begin(), out.end(), [](const PXClass& a, const PXClass& b) {
        Rat ea = a.series.terms.empty() ? Rat(1000000) : a.series.terms.front().first;
        Rat eb = b.series.terms.empty() ? Rat(1000000) : b.series.terms.front().first;
        if (ea != eb) return ea < eb;
        if (a.series.terms.empty() || b.series.terms.empty()) return false;
        const PSeries& ca = a.series.terms.front().second;
        const PSeries& cb = b.series.terms.front().second;
        Rat xa = ca.terms.empty() ? Rat(0) : ca.terms.front().first;
        Rat xb = cb.terms.empty() ? Rat(0) : cb.terms.front().first;
        if (xa != xb) return xa < xb;
        if (!ca.terms.empty() && !cb.terms.empty())
            return ca.terms.front().second.cmp_structural(cb.terms.front().second) < 0;
        return false;
    });
    return out;
}

void BranchExpansion::check_invariants() const {
    if (q_over_p <= 0) fail(ErrorKind::InternalError, "puiseux", "q/p must be positive");
    if (e_over_dprime == 0 && den(e_over_dprime) != 1)
        fail(ErrorKind::InternalError, "puiseux", "e=0 requires d'=1");
    if (p * pprime != n) fail(ErrorKind::InternalError, "puiseux", "p p' != n");
    if (nprime != d * n) fail(ErrorKind::InternalError, "puiseux", "n' != d n");
    if (b.is_zero()) fail(ErrorKind::InternalError, "puiseux", "zero leading coefficient");
    if (w.terms.empty() || w.terms.front().first != 0 ||
        !(w.terms.front().second - Scalar(1)).is_zero())
        fail(ErrorKind::InternalError, "puiseux", "unit series w does not start at 1");
    Rat prev = q_over_p;
    for (auto& [r, bm] : tail) {
        if (r <= prev)
            fail(ErrorKind::InternalError, "puiseux", "tail exponents not increasing");
        Rat idx = (r - q_over_p) * Rat(n);
        if (den(idx) != 1) fail(ErrorKind::InternalError, "puiseux", "tail exponent off-grid");
        if (ilcm(bm.exp_den(), nprime) != nprime)
            fail(ErrorKind::InternalError, "puiseux", "tail coefficient denominator exceeds n'");
        prev = r;
    }
}

std::vector<BranchExpansion> nested_expand(const MultiPoly& D, const Rat& order,
                                           const Rat& x_order) {
    MultiPoly Dw = D;
    if (Dw.is_zero()) fail(ErrorKind::InvalidElimination, "puiseux", "nested expansion of zero");
    if (Dw.degree(VZ) > 0)
        fail(ErrorKind::InternalError, "puiseux", "discriminant still involves z");
    auto classes = puiseux_expand_px(Dw, VY, VT, order, x_order);
    std::vector<BranchExpansion> out;
    for (auto& c : classes) {
        if (c.residual > 1)
            fail(ErrorKind::TruncationTooShort, "puiseux",
                 "branches not separated at requested truncation",
                 "retry with a larger truncation order");
        if (c.series.terms.empty()) continue;  // exact zero root: the sigma image itself
        BranchExpansion b;
        b.series = c.series;
        b.strands = c.strands;
        b.exact_root = c.exact_root;
        auto ld = c.series.leading();
        if (!ld) continue;
        b.q_over_p = ld->first;
        if (b.q_over_p <= 0)
            fail(ErrorKind::HypothesisViolation, "puiseux",
                 "branch without positive leading t-exponent",
                 "the discriminant has a component not transverse to t=0");
        b.p = den(b.q_over_p);
        b.n = c.series.exp_den();
        b.pprime = b.n / b.p;
        const PSeries& c0 = ld->second;
        auto xl = c0.leading();
        if (!xl)
            fail(ErrorKind::TruncationTooShort, "puiseux",
                 "leading coefficient not certified nonzero");
        b.e_over_dprime = xl->first;
        b.b = xl->second;
        b.w = c0.scaled(b.b.inv()).shifted(-b.e_over_dprime);
        Int dd = ilcm(den(b.e_over_dprime), b.w.exp_den());
        for (auto& [te, cc] : c.series.terms) dd = ilcm(dd, cc.exp_den());
        b.d = dd;
        b.nprime = b.d * b.n;
        for (auto& [te, cc] : c.series.terms) {
            if (te == b.q_over_p) continue;
            b.tail.push_back({te, cc});
        }
        b.check_invariants();
        out.push_back(std::move(b));
    }
    return out;
}

// ---------------------------------------------------------------------------
// permutations and monodromy

Permutation Permutation::identity(int n) {
    Permutation p;
    p.img.resize(size_t(n));
    for (int i = 0; i < n; ++i) p.img[size_t(i)] = i;
    return p;
}

int Permutation::orbits() const {
    std::vector<bool> seen(img.size(), false);
    int cnt = 0;
    for (size_t i = 0; i < img.size(); ++i) {
        if (seen[i]) continue;
        ++cnt;
        size_t j = i;
        while (!seen[j]) {
            seen[j] = true;
            j = size_t(img[j]);
        }
    }
    return cnt;
}

std::vector<int> Permutation::cycle_type() const {
    std::vector<bool> seen(img.size(), false);
    std::vector<int> cyc;
    for (size_t i = 0; i < img.size(); ++i) {
        if (seen[i]) continue;
        int len = 0;
        size_t j = i;
        while (!seen[j]) {
            seen[j] = true;
            j = size_t(img[j]);
            ++len;
        }
        cyc.push_back(len);
    }
    std::sort(cyc.rbegin(), cyc.rend());
    return cyc;
}

long Permutation::order() const {
    long o = 1;
    for (int c : cycle_type()) o = to_long(ilcm(Int(o), Int(c)));
    return o;
}

Permutation Permutation::compose(const Permutation& then) const {
    Permutation r;
    r.img.resize(img.size());
    for (size_t i = 0; i < img.size(); ++i) r.img[i] = then.img[size_t(img[i])];
    return r;
}

Permutation Permutation::power(long k) const {
    Permutation acc = Permutation::identity(int(img.size()));
    long n = k >= 0 ? k : -k;
    Permutation base = *this;
    while (n) {
        if (n & 1) acc = acc.compose(base);
        base = base.compose(base);
        n >>= 1;
    }
    if (k < 0) {
        Permutation inv;
        inv.img.resize(acc.img.size());
        for (size_t i = 0; i < acc.img.size(); ++i) inv.img[size_t(acc.img[i])] = int(i);
        return inv;
    }
    return acc;
}

MonodromyResult monodromy_permutation(const std::vector<TTSeries>& classes, int loop_var) {
    MonodromyResult res;
    Int D(1);
    for (auto& c : classes) {
        if (loop_var == VT)
            D = ilcm(D, c.exp_den());
        else
            D = ilcm(D, xden_of(c));
    }
    res.lcm_denominator = D;
    Scalar zeta = Tower::instance().root_of_unity(to_long(D));
    for (size_t ci = 0; ci < classes.size(); ++ci) {
        std::vector<TTSeries> orbit{classes[ci]};
        for (int guard = 0;; ++guard) {
            TTSeries next = rotate_series(orbit.back(), loop_var, zeta, D);
            if (tt_equal(next, orbit.front())) break;
            orbit.push_back(std::move(next));
            if (guard > 1000)
                fail(ErrorKind::InconsistentBranchSet, "puiseux", "orbit did not close",
                     "branches do not form complete conjugacy classes");
        }
        for (auto& s : orbit) {
            res.points.push_back(s);
            res.class_of_point.push_back(int(ci));
        }
    }
    res.perm.img.resize(res.points.size());
    size_t base = 0;
    for (size_t ci = 0; ci < classes.size(); ++ci) {
        size_t len = 0;
        while (base + len < res.points.size() && res.class_of_point[base + len] == int(ci)) ++len;
        for (size_t k = 0; k < len; ++k) res.perm.img[base + k] = int(base + (k + 1) % len);
        base += len;
    }
    return res;
}

// ---------------------------------------------------------------------------
// resubstitution oracle

Valuation resubstitution_valuation(const MultiPoly& F, int main_var, int param_var,
                                   const TTSeries& series, const Rat& to_order) {
    auto cs = F.coeffs_in(main_var);
    TTSeries acc;
    for (int i = int(cs.size()) - 1; i >= 0; --i) {
        acc = acc * series;
        if (!cs[size_t(i)].is_zero()) acc = acc + ttseries_of_poly(cs[size_t(i)], param_var);
    }
    for (auto& [e, c] : acc.terms) {
        ZS st = zstatus(c);
        if (st == ZS::NonZero) {
            if (e < to_order)
                fail(ErrorKind::ExpansionBug, "puiseux",
                     "resubstitution valuation " + rat_str(e) + " below requested order " +
                         rat_str(to_order));
            return {false, e};
        }
        if (st == ZS::Unknown) {
            if (e < to_order)
                fail(ErrorKind::TruncationTooShort, "puiseux",
                     "resubstitution blocked by truncation");
            return {false, e};
        }
    }
    if (acc.inf) return {true, Rat(0)};  // exact root
    return {false, acc.trunc};
}

}  // namespace carrousel
