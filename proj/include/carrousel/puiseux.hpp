#pragma once

#include "carrousel/driver.hpp"
#include "carrousel/multipoly.hpp"

namespace carrousel {

// Newton polygon edge; slope is reported as param-exponent per unit of
// main-variable degree, so a discriminant edge slope reads as the polar
// quotient directly.
struct PolygonEdge {
    Rat slope;
    Int lattice_length;                 // main-degree span of the edge
    std::vector<MultiPoly> char_poly;   // dense in the edge root variable
};

std::vector<PolygonEdge> newton_polygon(const MultiPoly& F, int main_var, int param_var);

// One conjugacy class of roots main_var(param) with coefficients that are
// truncated Puiseux series in x.
struct PXClass {
    TTSeries series;
    Int tden{1};     // class size in the expansion parameter
    Int xden{1};     // lcm of the x-exponent denominators of the coefficients
    Int strands{1};  // number of distinct root functions in the class
    bool exact_root = false;
    int residual = 1;  // >1 when unseparated at the requested order
};

std::vector<PXClass> puiseux_expand_px(const MultiPoly& F, int main_var, int param_var,
                                       const Rat& order, const Rat& x_order);

// Branch of the discriminant in leading normal form:
//   y = b w(x^(1/d)) x^(e/d') t^(q/p) + sum_m b_m(x^(1/n')) t^(r_m)
struct BranchExpansion {
    Rat q_over_p;
    Rat e_over_dprime;
    Scalar b;
    PSeries w;                                  // in x, constant term 1
    std::vector<std::pair<Rat, PSeries>> tail;  // (r_m, b_m)
    Int d{1}, n{1}, p{1}, pprime{1}, nprime{1};
    TTSeries series;  // underlying full series in t
    Int strands{1};
    bool exact_root = false;

    Rat rho() const { return e_over_dprime + Rat(1, 2 * d); }
    void check_invariants() const;
};

std::vector<BranchExpansion> nested_expand(const MultiPoly& D, const Rat& order,
                                           const Rat& x_order);

struct Permutation {
    std::vector<int> img;
    int orbits() const;
    std::vector<int> cycle_type() const;  // sorted descending
    long order() const;
    static Permutation identity(int n);
    Permutation compose(const Permutation& then) const;  // this followed by `then`
    Permutation power(long k) const;
};

// Action of loop_var^(1/D) -> zeta_D loop_var^(1/D) on the materialized set of
// conjugates of the given classes; loop_var is VX or VT.
struct MonodromyResult {
    Permutation perm;
    std::vector<TTSeries> points;          // materialized conjugates
    std::vector<int> class_of_point;
    Int lcm_denominator;
};
MonodromyResult monodromy_permutation(const std::vector<TTSeries>& classes, int loop_var);

// Least exponent of F(x, main <- series, param, ...) as a series in param;
// nullopt means "exact root" (vanishes identically to every computed order).
struct Valuation {
    bool exact_root;
    Rat value;  // meaningful when !exact_root
};
Valuation resubstitution_valuation(const MultiPoly& F, int main_var, int param_var,
                                   const TTSeries& series, const Rat& to_order);

// conversion helpers shared by geometry/bands
TTSeries ttseries_of_poly(const MultiPoly& coeff, int param_var);  // poly in (x, param)
SPoly<PSeries> spoly_of_multipoly(const MultiPoly& F, int main_var, int param_var);
TTSeries rotate_series(const TTSeries& s, int loop_var, const Scalar& zeta, const Int& D);
Int xden_of(const TTSeries& s);
bool tt_equal(const TTSeries& a, const TTSeries& b);

// root provider over the tower, shared by all drivers
std::vector<CharRoot<Scalar>> scalar_roots(const std::vector<Scalar>& charpoly);
// provider for nested expansion: roots of char polys with Puiseux-x coefficients
std::vector<CharRoot<PSeries>> pseries_roots(const std::vector<PSeries>& charpoly,
                                             const Rat& x_order);

}  // namespace carrousel
