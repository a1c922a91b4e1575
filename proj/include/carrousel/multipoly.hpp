#pragma once

#include "carrousel/tower.hpp"

#include <array>
#include <map>

namespace carrousel {

// Fixed ambient variables in lexicographic order.
enum Var : int { VX = 0, VY = 1, VZ = 2, VT = 3 };
inline const char* var_name(int v) { return (const char*[]){"x", "y", "z", "t"}[v]; }

using Exps = std::array<int, 4>;

// Sparse polynomial in x, y, z, t over the tower field.  Terms are kept in
// lexicographic order of the exponent tuples; no zero coefficients stored.
class MultiPoly {
  public:
    std::map<Exps, Scalar> terms;

    MultiPoly() = default;
    explicit MultiPoly(const Scalar& c) {
        if (!c.is_zero()) terms[{0, 0, 0, 0}] = c;
    }
    static MultiPoly variable(int v, int e = 1) {
        MultiPoly p;
        Exps ex{0, 0, 0, 0};
        ex[size_t(v)] = e;
        p.terms[ex] = Scalar(1);
        return p;
    }
    static MultiPoly term(const Exps& e, const Scalar& c) {
        MultiPoly p;
        if (!c.is_zero()) p.terms[e] = c;
        return p;
    }

    bool is_zero() const { return terms.empty(); }
    bool is_constant() const {
        return terms.empty() || (terms.size() == 1 && terms.begin()->first == Exps{0, 0, 0, 0});
    }
    Scalar constant_value() const {
        if (terms.empty()) return Scalar(0);
        auto it = terms.find({0, 0, 0, 0});
        return it == terms.end() ? Scalar(0) : it->second;
    }
    int degree(int v) const {
        int d = -1;
        for (auto& [e, c] : terms) d = std::max(d, e[size_t(v)]);
        return d;
    }
    bool involves(int v) const { return degree(v) > 0; }
    int total_degree() const {
        int d = -1;
        for (auto& [e, c] : terms) d = std::max(d, e[0] + e[1] + e[2] + e[3]);
        return d;
    }

    MultiPoly operator+(const MultiPoly& o) const;
    MultiPoly operator-(const MultiPoly& o) const;
    MultiPoly operator*(const MultiPoly& o) const;
    MultiPoly operator-() const;
    MultiPoly operator*(const Scalar& c) const;
    bool operator==(const MultiPoly& o) const { return (*this - o).is_zero(); }

    MultiPoly pow(int e) const;
    MultiPoly derivative(int v) const;

    // coefficients as polynomials in the remaining variables, indexed by
    // the degree in v (dense, may contain zero entries)
    std::vector<MultiPoly> coeffs_in(int v) const;
    static MultiPoly from_coeffs(int v, const std::vector<MultiPoly>& cs);

    // substitute variable v by the polynomial s
    MultiPoly subst(int v, const MultiPoly& s) const;
    // substitute v by scalar
    MultiPoly subst_scalar(int v, const Scalar& c) const;

    // lowest-degree homogeneous part (total degree)
    MultiPoly lowest_form() const;

    // divide out the largest monomial factor; returns the removed exponents
    Exps strip_monomial();

    std::string str() const;
    void norm_check() {  // drop exact zeros produced by arithmetic
        for (auto it = terms.begin(); it != terms.end();)
            it = it->second.is_zero() ? terms.erase(it) : std::next(it);
    }
};

// gcd, normalized so the lex-leading coefficient is 1
MultiPoly mp_gcd(const MultiPoly& a, const MultiPoly& b);

// exact division; fails (internal-error) if not divisible
MultiPoly mp_div_exact(const MultiPoly& a, const MultiPoly& b);

// squarefree part: same irreducible factors, multiplicity one, including
// the monomial part reduced to multiplicity one
MultiPoly mp_squarefree(const MultiPoly& p);

// (gcd, squarefree part of p) with respect to var, per the operation contract
std::pair<MultiPoly, MultiPoly> squarefree_and_gcd(const MultiPoly& p, const MultiPoly& q, int var);

// Sylvester resultant eliminating var, p-block rows above q-block rows,
// computed by fraction-free (Bareiss) elimination.
MultiPoly resultant(const MultiPoly& p, const MultiPoly& q, int var);

// resultant allowing degree-0 arguments (Res(c, q) = c^deg q); internal use
MultiPoly resultant_any(const MultiPoly& p, const MultiPoly& q, int var);

}  // namespace carrousel
