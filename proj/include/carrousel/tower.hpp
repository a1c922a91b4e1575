#pragma once

#include "carrousel/common.hpp"
#include "carrousel/qcomplex.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

namespace carrousel {

class Tower;

// Element of a dynamic tower of algebraic extensions of Q.  Level 0 is Q
// itself; level k > 0 is represented by a polynomial over level k-1 reduced
// modulo that level's defining polynomial.  Which root of the defining
// polynomial is meant is recorded in the level's isolating box.
class Scalar {
  public:
    Scalar() : level_(0), q_(0) {}
    Scalar(const Rat& q) : level_(0), q_(q) {}
    Scalar(long n) : level_(0), q_(n) {}
    Scalar(int n) : level_(0), q_(n) {}

    int level() const { return level_; }
    const Rat& rat() const { return q_; }
    bool is_rational() const;
    Rat to_rational() const;  // requires is_rational()

    bool is_zero() const;
    bool is_one() const { return (*this - Scalar(1)).is_zero(); }

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator-() const;
    Scalar inv() const;
    Scalar operator/(const Scalar& o) const { return *this * o.inv(); }
    Scalar pow(long e) const;
    bool operator==(const Scalar& o) const { return (*this - o).is_zero(); }
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    // Certified enclosure with half-width <= 2^-prec_bits.
    QBox enclosure(unsigned prec_bits = 30) const;
    std::complex<double> approx() const { return enclosure(40).mid().to_double(); }

    std::string str() const;

    // Deterministic structural ordering (for canonical output order).
    int cmp_structural(const Scalar& o) const;

    static Scalar lift(const Scalar& s, int level);

  private:
    friend class Tower;
    int level_;
    Rat q_;                        // payload when level_ == 0
    std::vector<Scalar> coeffs_;   // payload when level_ > 0, degree < level degree
    mutable uint64_t version_ = 0; // registry version at last reduction

    static Scalar make(int level, std::vector<Scalar> coeffs);
    void normalize() const;
};

using UPoly = std::vector<Scalar>;  // dense univariate, index = degree

// Univariate helpers over the tower field.
int updeg(const UPoly& p);
UPoly uptrim(UPoly p);
UPoly upadd(const UPoly& a, const UPoly& b);
UPoly upsub(const UPoly& a, const UPoly& b);
UPoly upmul(const UPoly& a, const UPoly& b);
UPoly upscale(const UPoly& a, const Scalar& c);
UPoly upderiv(const UPoly& a);
Scalar upeval(const UPoly& a, const Scalar& x);
QBox upeval_box(const UPoly& a, const QBox& x, unsigned prec);
void updivmod(const UPoly& a, const UPoly& b, UPoly& q, UPoly& r);
UPoly upgcd_monic(UPoly a, UPoly b);
UPoly upmonic(UPoly a);
UPoly updiv_exact(const UPoly& a, const UPoly& b);

struct RootInfo {
    Scalar value;
    int multiplicity = 1;
};

// Shared registry of extension levels.  All mutation happens under one lock;
// scalars are value types and may be moved across threads freely.
class Tower {
  public:
    static Tower& instance();

    // All roots of p (a nonconstant univariate over the tower), without
    // multiplicity for the squarefree part; multiplicities reported.
    std::vector<RootInfo> all_roots(const UPoly& p);

    // The root of `defining` isolated by `box` (refined as needed); extends
    // the tower unless the root simplifies to an existing representation.
    Scalar root_in_box(const UPoly& defining, const QBox& box);

    // Primitive n-th root of unity exp(2*pi*i/n) as an exact scalar.
    Scalar root_of_unity(long n);

    Scalar i();  // sqrt(-1)

    uint64_t version() const { return version_; }
    void reset();  // test support: drop all levels

  private:
    friend class Scalar;
    struct Level {
        UPoly defining;          // monic, over lower levels
        QC center;               // approximation of the selected root
        Rat radius;              // certified containment radius
        std::vector<QC> others;  // approximations of the remaining roots
        Rat others_radius;
        unsigned prec = 20;
    };
    std::vector<Level> levels_;
    uint64_t version_ = 1;
    std::recursive_mutex mu_;
    std::map<long, Scalar> zeta_cache_;

    int degree(int level) const { return updeg(levels_[size_t(level) - 1].defining); }
    const UPoly& modulus(int level) const { return levels_[size_t(level) - 1].defining; }
    void refine_level(int level, unsigned prec_bits);
    QBox level_box(int level, unsigned prec_bits);
    // Splits level's modulus, keeping the factor vanishing at the boxed root.
    void shrink_modulus(int level, const UPoly& factor_with_root);
    // Decide whether the boxed root of `level` is a root of g (vs cofactor h).
    bool root_satisfies(int level, const UPoly& g, const UPoly& h);
    std::vector<RootInfo> all_roots_inner(const UPoly& p);
    Scalar root_from_numeric(const UPoly& p, const std::vector<QC>& all, size_t idx,
                             const Rat& radius);

    friend std::vector<RootInfo> tower_all_roots(const UPoly&);
};

}  // namespace carrousel
