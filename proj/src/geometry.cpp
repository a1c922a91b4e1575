#include "carrousel/geometry.hpp"

#include <algorithm>

namespace carrousel {

namespace {

bool multipoly_squarefree(const MultiPoly& f) {
    MultiPoly g = f;
    for (int v = 0; v < 4; ++v) {
        if (f.degree(v) <= 0) continue;
        g = mp_gcd(g, f.derivative(v));
        if (g.is_constant()) return true;
    }
    return g.is_constant();
}

// evaluate a polynomial in (x, y) along x = u^k, y = phi(u)
PSeries eval_xy(const MultiPoly& c, int k, const PSeries& phi) {
    auto ys = c.coeffs_in(VY);
    PSeries acc;
    for (int i = int(ys.size()) - 1; i >= 0; --i) {
        acc = acc * phi;
        // inject x-powers scaled to the u-grid
        for (auto& [e, s] : ys[size_t(i)].terms) {
            if (e[VZ] || e[VT])
                fail(ErrorKind::InternalError, "geometry", "unexpected variable in plane data");
            acc = acc + PSeries::monomial(Rat(long(e[VX]) * k), s);
        }
    }
    return acc;
}

// evaluate f(x,y,z) along (u^k, phi(u), psi(u))
PSeries eval_xyz(const MultiPoly& f, int k, const PSeries& phi, const PSeries& psi) {
    auto zs = f.coeffs_in(VZ);
    PSeries acc;
    for (int i = int(zs.size()) - 1; i >= 0; --i) {
        acc = acc * psi;
        acc = acc + eval_xy(zs[size_t(i)], k, phi);
    }
    return acc;
}

bool vanishes_to_order(const PSeries& s, const Rat& order) {
    for (auto& [e, c] : s.terms) {
        if (e >= order) break;
        if (zstatus(c) == ZS::NonZero) return false;
    }
    return true;
}

// plane curve branches of g(x, y) = 0 through the origin, finite over x
struct PlaneBranch {
    int k;        // x = u^k
    PSeries phi;  // y = phi(u), integer exponents in u
};

std::vector<PlaneBranch> plane_branches(const MultiPoly& g_in, const Rat& order,
                                        bool* vertical) {
    MultiPoly g = g_in;
    Exps mono = g.strip_monomial();
    if (vertical) *vertical = mono[VX] > 0;
    std::vector<PlaneBranch> out;
    if (mono[VY] > 0) out.push_back({1, PSeries::zero()});  // the x-axis y = 0
    if (g.degree(VY) > 0) {
        auto classes = puiseux_expand_px(g, VY, VX, order, order);
        for (auto& c : classes) {
            if (c.series.terms.empty()) continue;
            // positive valuation only (branches through the origin)
            if (c.series.terms.front().first <= 0) continue;
            int k = int(to_long(c.tden));
            PSeries phi;
            phi.inf = c.series.inf;
            if (!c.series.inf) phi.trunc = c.series.trunc * Rat(k);
            for (auto& [e, cc] : c.series.terms) {
                // coefficients are x-free here (plane curve): constants
                Scalar s = cc.terms.empty() ? Scalar(0) : cc.terms.front().second;
                if (!cc.terms.empty() && cc.terms.front().first != 0)
                    fail(ErrorKind::InternalError, "geometry", "fractional x in plane branch");
                phi.push_term(e * Rat(k), s);
            }
            out.push_back({k, phi});
        }
    }
    return out;
}

}  // namespace

long covering_degree(const SurfaceGerm& f) {
    MultiPoly axis = f.f.subst_scalar(VX, Scalar(0)).subst_scalar(VY, Scalar(0));
    if (axis.is_zero())
        fail(ErrorKind::NonWeierstrass, "geometry",
             "f(0,0,z) vanishes identically; coordinates are not Weierstrass",
             "apply a shear first");
    int n = -1;
    for (auto& [e, c] : axis.terms) {
        if (n < 0 || e[VZ] < n) n = e[VZ];
    }
    if (n <= 0)
        fail(ErrorKind::HypothesisViolation, "geometry",
             "f(0,0,z) has a unit term; the germ does not vanish on the x-axis");
    return n;
}

MultiPoly shear_germ(const MultiPoly& f, long a, long b, long c) {
    // (x, y, z) -> (x, y + a x, z + b x + c y)
    MultiPoly X = MultiPoly::variable(VX), Y = MultiPoly::variable(VY),
              Z = MultiPoly::variable(VZ);
    MultiPoly g = f.subst(VY, Y + X * Scalar(a));
    g = g.subst(VZ, Z + X * Scalar(b) + Y * Scalar(c));
    return g;
}

namespace {

struct LocusScan {
    std::vector<SigmaBranch> sigma;
    int claim_violations = 0;   // 1-dim candidates in f=0 where f_x does not vanish
    int polar_components = 0;   // candidates not contained in f=0
    bool vertical = false;      // a candidate component inside {x = 0}
};

LocusScan scan_singular_locus(const MultiPoly& F, const Rat& order) {
    LocusScan scan;
    MultiPoly fx = F.derivative(VX), fy = F.derivative(VY), fz = F.derivative(VZ);
    if (F.degree(VZ) <= 0)
        fail(ErrorKind::NonWeierstrass, "geometry", "f must involve z");
    // candidates for the projection of {f_y = f_z = 0}
    MultiPoly A = fz.degree(VZ) > 0 ? resultant_any(F, fz, VZ) : fz;
    MultiPoly B = fy.degree(VZ) > 0 ? resultant_any(F, fy, VZ) : fy;
    if (A.is_zero() || B.is_zero())
        fail(ErrorKind::HypothesisViolation, "geometry",
             "degenerate elimination while computing the singular locus");
    MultiPoly cand = mp_gcd(mp_squarefree(A), mp_squarefree(B));
    auto pb = plane_branches(cand, order, &scan.vertical);
    for (auto& b : pb) {
        MultiPoly lift_poly = fz.degree(VZ) > 0 ? fz : F;
        auto cs = lift_poly.coeffs_in(VZ);
        SPoly<Scalar> sp(cs.size());
        for (size_t i = 0; i < cs.size(); ++i) sp[i] = eval_xy(cs[i], b.k, b.phi);
        NPDriver<Scalar> drv([](const std::vector<Scalar>& cp) { return scalar_roots(cp); },
                             [](long n) { return Tower::instance().root_of_unity(n); });
        NPOptions opts;
        opts.positive_only = true;
        opts.order = order * Rat(b.k);
        std::vector<NPClass<Scalar>> zs;
        try {
            zs = drv.expand(sp, opts);
        } catch (const Error&) {
            continue;
        }
        for (auto& zc : zs) {
            PSeries psi = zc.series;
            Rat uorder = order * Rat(b.k);
            if (!vanishes_to_order(eval_xyz(fy, b.k, b.phi, psi), uorder)) continue;
            if (!vanishes_to_order(eval_xyz(fz, b.k, b.phi, psi), uorder)) continue;
            // a branch of the critical set {f_y = f_z = 0}
            if (!vanishes_to_order(eval_xyz(F, b.k, b.phi, psi), uorder)) {
                ++scan.polar_components;  // the polar curve of the x-direction
                continue;
            }
            if (!vanishes_to_order(eval_xyz(fx, b.k, b.phi, psi), uorder)) {
                ++scan.claim_violations;  // inside f=0 but not singular
                continue;
            }
            SigmaBranch sb;
            sb.k = b.k;
            sb.phi = b.phi;
            sb.psi = psi;
            scan.sigma.push_back(sb);
        }
    }
    return scan;
}

}  // namespace

GenericityReport genericity_check(const MultiPoly& f) {
    GenericityReport rep;
    rep.singular_locus_one_dim = multipoly_squarefree(f);
    if (!rep.singular_locus_one_dim) return rep;

    MultiPoly axis = f.subst_scalar(VX, Scalar(0)).subst_scalar(VY, Scalar(0));
    rep.weierstrass_ok = !axis.is_zero() && axis.constant_value().is_zero();

    if (rep.weierstrass_ok) {
        MultiPoly fz = f.derivative(VZ);
        try {
            auto scan = scan_singular_locus(f, Rat(8));
            rep.claim_ok = scan.claim_violations == 0;
            rep.polar_curve_components = scan.polar_components;
            rep.has_vertical_sigma = scan.vertical;
        } catch (const Error&) {
            rep.claim_ok = false;
        }

        // transversality: after splitting sigma-image monomial factors off the
        // discriminant curve, its tangent cone avoids the x-axis direction
        MultiPoly delta0 = resultant_any(f, fz, VZ);
        if (delta0.is_zero()) {
            rep.transversality_ok = false;
        } else {
            delta0.strip_monomial();
            delta0 = mp_squarefree(delta0);
            delta0.strip_monomial();
            MultiPoly cone = delta0.lowest_form();
            bool has_y_free = false;
            for (auto& [e, c] : cone.terms)
                if (e[VY] == 0) has_y_free = true;
            rep.transversality_ok = has_y_free || cone.is_constant();
        }
    }

    if (!rep.all_ok()) {
        // deterministic small-integer shear search: first (a,b,c) restoring the
        // Weierstrass property
        for (long a = 0; a <= 2; ++a) {
            for (long b = 0; b <= 2; ++b) {
                for (long c = 0; c <= 2; ++c) {
                    if (a == 0 && b == 0 && c == 0) continue;
                    MultiPoly g = shear_germ(f, a, b, c);
                    MultiPoly ax = g.subst_scalar(VX, Scalar(0)).subst_scalar(VY, Scalar(0));
                    if (ax.is_zero() || !ax.constant_value().is_zero()) continue;
                    rep.suggested_shear = {a, b, c};
                    break;
                }
                if (rep.suggested_shear != std::array<long, 3>{0, 0, 0}) break;
            }
            if (rep.suggested_shear != std::array<long, 3>{0, 0, 0}) break;
        }
    }
    return rep;
}

std::vector<SigmaBranch> singular_locus(const SurfaceGerm& f, const Rat& order) {
    const MultiPoly& F = f.f;
    if (!multipoly_squarefree(F))
        fail(ErrorKind::HypothesisViolation, "geometry",
             "input is non-reduced: the singular locus is 2-dimensional",
             "pass a squarefree defining polynomial");
    auto scan = scan_singular_locus(F, order);
    if (scan.sigma.empty())
        fail(ErrorKind::HypothesisViolation, "geometry",
             "no one-dimensional singular branch found along the x-direction",
             scan.vertical
                 ? "a singular branch lies inside {x=0}: swap coordinate axes"
                 : "the germ may have an isolated singularity; the vanishing zone is empty");
    return scan.sigma;
}

SurfaceGerm theta_reduce(const SurfaceGerm& f, const SigmaBranch& sigma, const Rat& order) {
    (void)order;
    if (sigma.is_x_axis()) {
        SurfaceGerm g = f;
        g.reduced_flag = true;
        return g;
    }
    // exact path: polynomial phi and psi
    auto poly_of = [&](const PSeries& s) -> std::optional<MultiPoly> {
        if (!s.inf) return std::nullopt;  // genuinely truncated parametrization
        MultiPoly p;
        for (auto& [e, c] : s.terms) {
            if (den(e) != 1 || e < 0) return std::nullopt;
            p = p + MultiPoly::term({int(to_long(num(e))), 0, 0, 0}, c);
        }
        return p;
    };
    auto phi = poly_of(sigma.phi);
    auto psi = poly_of(sigma.psi);
    if (!phi || !psi)
        fail(ErrorKind::TruncationTooShort, "geometry",
             "sigma branch has a non-polynomial parametrization at this truncation",
             "raise the truncation order until the parametrization terminates");
    MultiPoly g = f.f;
    if (sigma.k > 1) {
        // x -> x^k
        MultiPoly h;
        for (auto& [e, c] : g.terms) {
            Exps e2 = e;
            e2[VX] = e[VX] * sigma.k;
            h.terms[e2] = c;
        }
        g = h;
        // phi, psi already live on the u-grid of x = u^k
    }
    g = g.subst(VY, MultiPoly::variable(VY) + *phi);
    g = g.subst(VZ, MultiPoly::variable(VZ) + *psi);
    SurfaceGerm out;
    out.f = g;
    out.reduced_flag = true;
    // the x-axis must now lie in the singular locus
    MultiPoly ax = g.subst_scalar(VY, Scalar(0)).subst_scalar(VZ, Scalar(0));
    if (!ax.is_zero())
        fail(ErrorKind::InternalError, "geometry", "reduction did not move sigma to the x-axis");
    return out;
}

DiscriminantData discriminant_surface(const SurfaceGerm& f) {
    const MultiPoly& F = f.f;
    MultiPoly fz = F.derivative(VZ);
    if (F.degree(VZ) <= 0 || fz.is_zero())
        fail(ErrorKind::NonWeierstrass, "geometry", "f must have positive z-degree");
    MultiPoly shifted = F - MultiPoly::variable(VT);
    DiscriminantData out;
    out.raw = resultant(shifted, fz, VZ);
    if (out.raw.is_zero())
        fail(ErrorKind::HypothesisViolation, "geometry",
             "discriminant vanishes identically: input is non-reduced");
    MultiPoly D = out.raw;
    Exps mono = D.strip_monomial();
    out.sigma_factors = MultiPoly(Scalar(1));
    for (int v = 0; v < 4; ++v)
        if (mono[size_t(v)] > 0)
            out.sigma_factors = out.sigma_factors * MultiPoly::variable(v, mono[size_t(v)]);
    D = mp_squarefree(D);
    // squarefree may reattach stripped monomial support; remove it again
    D.strip_monomial();
    out.D = D;
    return out;
}

TransversalInvariants transversal_invariants(const SurfaceGerm& f, const Rat& order) {
    const MultiPoly& F = f.f;
    TransversalInvariants out;
    // branches of f_a via the nested expansion of f in (z over y)
    out.branches = puiseux_expand_px(F, VZ, VY, order, order);
    long count = 0;
    for (auto& c : out.branches) {
        Int br = c.strands / c.tden;
        if (br * c.tden != c.strands)
            fail(ErrorKind::InternalError, "geometry", "strand count not divisible by class size");
        count += to_long(br);
    }
    out.branch_count = count;

    MultiPoly fy = F.derivative(VY), fz = F.derivative(VZ);
    if (fy.is_zero() || fz.is_zero())
        fail(ErrorKind::HypothesisViolation, "geometry",
             "transversal slice is degenerate (a partial derivative vanishes identically)");
    // far critical points on the z-axis would contaminate the resultant count
    MultiPoly fz0 = fz.subst_scalar(VY, Scalar(0));
    {
        MultiPoly probe = fz0;
        probe.strip_monomial();
        if (probe.degree(VZ) > 0) {
            MultiPoly fy0 = fy.subst_scalar(VY, Scalar(0));
            MultiPoly common = mp_gcd(probe, fy0);
            if (common.degree(VZ) > 0)
                fail(ErrorKind::HypothesisViolation, "geometry",
                     "critical locus meets the transversal axis away from the origin");
        }
    }
    MultiPoly R = resultant_any(fy, fz, VZ);
    if (R.is_zero())
        fail(ErrorKind::HypothesisViolation, "geometry",
             "transversal germ is non-reduced for transcendental slice parameter");
    int mu = -1;
    for (auto& [e, c] : R.terms)
        if (mu < 0 || e[VY] < mu) mu = e[VY];
    out.mu = mu;
    out.euler = 1 - out.mu;
    out.annulus_flag = (out.mu == 1 && out.branch_count == 2);
    return out;
}

}  // namespace carrousel
