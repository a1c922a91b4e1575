#pragma once

#include "carrousel/common.hpp"

#include <complex>

namespace carrousel {

// Complex number with exact rational parts.
struct QC {
    Rat re, im;
    QC() : re(0), im(0) {}
    QC(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
    explicit QC(const Rat& r) : re(r), im(0) {}

    QC operator+(const QC& o) const { return {re + o.re, im + o.im}; }
    QC operator-(const QC& o) const { return {re - o.re, im - o.im}; }
    QC operator*(const QC& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
    QC operator-() const { return {-re, -im}; }
    bool operator==(const QC& o) const { return re == o.re && im == o.im; }

    Rat norm2() const { return re * re + im * im; }
    QC conj() const { return {re, -im}; }
    QC inv() const {
        Rat n = norm2();
        return {re / n, -im / n};
    }
    std::complex<double> to_double() const { return {re.get_d(), im.get_d()}; }

    // l1 upper / linf lower bounds of the modulus (sqrt-free).
    Rat abs_upper() const { return rat_abs(re) + rat_abs(im); }
    Rat abs_lower() const { return rat_max(rat_abs(re), rat_abs(im)) / 2; }
};

// Axis-aligned rational rectangle enclosing a complex value.
struct QBox {
    Rat re_lo, re_hi, im_lo, im_hi;
    QBox() : re_lo(0), re_hi(0), im_lo(0), im_hi(0) {}
    QBox(Rat rl, Rat rh, Rat il, Rat ih)
        : re_lo(std::move(rl)), re_hi(std::move(rh)), im_lo(std::move(il)), im_hi(std::move(ih)) {}
    static QBox point(const QC& z) { return {z.re, z.re, z.im, z.im}; }
    static QBox disc(const QC& c, const Rat& r) {
        return {c.re - r, c.re + r, c.im - r, c.im + r};
    }

    QC mid() const { return {(re_lo + re_hi) / 2, (im_lo + im_hi) / 2}; }
    Rat half_width() const { return rat_max(re_hi - re_lo, im_hi - im_lo) / 2; }

    bool contains_zero() const { return re_lo <= 0 && re_hi >= 0 && im_lo <= 0 && im_hi >= 0; }
    bool contains(const QC& z) const {
        return re_lo <= z.re && z.re <= re_hi && im_lo <= z.im && z.im <= im_hi;
    }
    bool intersects(const QBox& o) const {
        return !(re_hi < o.re_lo || o.re_hi < re_lo || im_hi < o.im_lo || o.im_hi < im_lo);
    }

    QBox operator+(const QBox& o) const {
        return {re_lo + o.re_lo, re_hi + o.re_hi, im_lo + o.im_lo, im_hi + o.im_hi};
    }
    QBox operator-(const QBox& o) const {
        return {re_lo - o.re_hi, re_hi - o.re_lo, im_lo - o.im_hi, im_hi - o.im_lo};
    }
    QBox operator*(const QBox& o) const {
        // Exact enclosure of {z*w} via interval products of the four bilinear parts.
        auto iv = [](const Rat& a, const Rat& b, const Rat& c, const Rat& d, Rat& lo, Rat& hi) {
            Rat p1 = a * c, p2 = a * d, p3 = b * c, p4 = b * d;
            lo = rat_min(rat_min(p1, p2), rat_min(p3, p4));
            hi = rat_max(rat_max(p1, p2), rat_max(p3, p4));
        };
        Rat ac_lo, ac_hi, bd_lo, bd_hi, ad_lo, ad_hi, bc_lo, bc_hi;
        iv(re_lo, re_hi, o.re_lo, o.re_hi, ac_lo, ac_hi);
        iv(im_lo, im_hi, o.im_lo, o.im_hi, bd_lo, bd_hi);
        iv(re_lo, re_hi, o.im_lo, o.im_hi, ad_lo, ad_hi);
        iv(im_lo, im_hi, o.re_lo, o.re_hi, bc_lo, bc_hi);
        return {ac_lo - bd_hi, ac_hi - bd_lo, ad_lo + bc_lo, ad_hi + bc_hi};
    }
    QBox operator*(const QC& z) const { return *this * QBox::point(z); }
    QBox operator-() const { return {-re_hi, -re_lo, -im_hi, -im_lo}; }

    // Upper bound on |z| over the box.
    Rat abs_upper() const {
        Rat r = rat_max(rat_abs(re_lo), rat_abs(re_hi));
        Rat i = rat_max(rat_abs(im_lo), rat_abs(im_hi));
        return r + i;
    }
    // Lower bound on |z| over the box; 0 if the box touches zero.
    Rat abs_lower() const {
        Rat r(0), i(0);
        if (re_lo > 0) r = re_lo;
        if (re_hi < 0) r = -re_hi;
        if (im_lo > 0) i = im_lo;
        if (im_hi < 0) i = -im_hi;
        return rat_max(r, i);
    }
};

// Round a rational to a nearby dyadic with bounded denominator 2^bits,
// keeping exactness optional: |result - v| <= 2^-bits.
Rat dyadic_round(const Rat& v, unsigned bits);
QC dyadic_round(const QC& v, unsigned bits);
Rat dyadic_floor(const Rat& v, unsigned bits);
Rat dyadic_ceil(const Rat& v, unsigned bits);
// enclosure-preserving rounding that caps denominator growth
QBox outward_round(const QBox& b, unsigned bits);

}  // namespace carrousel
