#pragma once

#include "carrousel/puiseux.hpp"

namespace carrousel {

// A germ f(x,y,z); after reduction the x-axis is contained in the singular
// locus and every term of f has positive total degree in (y, z).
struct SurfaceGerm {
    MultiPoly f;
    bool reduced_flag = false;
};

// Branch of the singular locus, parametrized u -> (u^k, phi(u), psi(u)).
struct SigmaBranch {
    int k = 1;
    PSeries phi;  // series in u, integer exponents
    PSeries psi;
    bool is_x_axis() const {
        return k == 1 && zstatus(phi) != ZS::NonZero && zstatus(psi) != ZS::NonZero;
    }
};

struct GenericityReport {
    bool weierstrass_ok = false;
    bool claim_ok = false;
    bool transversality_ok = false;
    bool singular_locus_one_dim = true;
    int polar_curve_components = 0;  // components of the polar curve off Sigma
    bool has_vertical_sigma = false; // a Sigma-branch inside {x = 0}
    std::array<long, 3> suggested_shear{0, 0, 0};
    bool all_ok() const { return weierstrass_ok && claim_ok && transversality_ok; }
};

GenericityReport genericity_check(const MultiPoly& f);

// branches of {f = f_y = f_z = 0} with certified membership to the given order
std::vector<SigmaBranch> singular_locus(const SurfaceGerm& f, const Rat& order);

// g = f o Theta with Theta(x,y,z) = (x^k, y + phi(x), z + psi(x)); exact when
// phi and psi are polynomials (the only case the exact pipeline produces)
SurfaceGerm theta_reduce(const SurfaceGerm& f, const SigmaBranch& sigma, const Rat& order);

// apply the shear (x,y,z) -> (x, y + a x, z + b x + c y)
MultiPoly shear_germ(const MultiPoly& f, long a, long b, long c);

struct DiscriminantData {
    MultiPoly D;              // squarefree, sigma-image factors split off
    MultiPoly sigma_factors;  // product of the removed {y,t}-monomial factors
    MultiPoly raw;            // resultant before reduction
};
DiscriminantData discriminant_surface(const SurfaceGerm& f);

struct TransversalInvariants {
    long mu = 0;
    long branch_count = 0;
    long euler = 0;
    bool annulus_flag = false;
    std::vector<PXClass> branches;  // transversal Puiseux classes of f_a
};
TransversalInvariants transversal_invariants(const SurfaceGerm& f, const Rat& order);

long covering_degree(const SurfaceGerm& f);

}  // namespace carrousel
