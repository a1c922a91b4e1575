#pragma once

#include "carrousel/tower.hpp"

#include <functional>
#include <optional>
#include <type_traits>

namespace carrousel {

// Zero status of a possibly-truncated quantity.
enum class ZS { Zero, NonZero, Unknown };

inline ZS zstatus(const Scalar& s) { return s.is_zero() ? ZS::Zero : ZS::NonZero; }
inline void scalar_mul_inplace(Scalar& c, const Scalar& z) { c = c * z; }
inline Int exp_denominator(const Scalar&) { return 1; }

// Truncated series with rational (possibly negative) exponents in one
// distinguished parameter; coefficients live in C.  Terms with exponent
// below `trunc` are exact; nothing is known at or beyond `trunc`.
template <class C>
struct TS {
    using coeff_type = C;
    bool inf = true;  // exact series: no truncation
    Rat trunc = 0;    // valid when !inf
    std::vector<std::pair<Rat, C>> terms;  // strictly increasing exponents

    TS() = default;
    static TS zero() { return TS(); }
    static TS constant(const C& c) {
        TS s;
        if (zstatus(c) != ZS::Zero) s.terms.push_back({Rat(0), c});
        return s;
    }
    static TS monomial(const Rat& e, const C& c) {
        TS s;
        if (zstatus(c) != ZS::Zero) s.terms.push_back({e, c});
        return s;
    }
    static TS unknown_tail(const Rat& at) {
        TS s;
        s.inf = false;
        s.trunc = at;
        return s;
    }

    bool has_trunc() const { return !inf; }
    Rat trunc_or(const Rat& big) const { return inf ? big : trunc; }

    // Lower bound for the valuation (first possibly-nonzero exponent).
    Rat val_lower() const {
        if (!terms.empty()) return terms.front().first;
        return inf ? Rat(1000000) : trunc;
    }
    bool certainly_zero() const { return inf && terms.empty(); }

    // Leading certainly-nonzero term; nullopt when the series is certainly 0.
    // Raises truncation-too-short when an undecided coefficient blocks it.
    std::optional<std::pair<Rat, C>> leading() const {
        for (auto& [e, c] : terms) {
            ZS st = zstatus(c);
            if (st == ZS::NonZero) return std::make_pair(e, c);
            if (st == ZS::Unknown)
                fail(ErrorKind::TruncationTooShort, "puiseux",
                     "leading coefficient undecided at current truncation",
                     "retry with a larger truncation order");
        }
        if (!inf)
            fail(ErrorKind::TruncationTooShort, "puiseux",
                 "series has no certified term below its truncation",
                 "retry with a larger truncation order");
        return std::nullopt;
    }

    void clamp(const Rat& order) {
        if (inf || order < trunc) {
            inf = false;
            trunc = order;
        }
        drop_tail();
    }

    void drop_tail() {
        if (inf) return;
        while (!terms.empty() && terms.back().first >= trunc) terms.pop_back();
    }

    void push_term(const Rat& e, const C& c) {
        if (!inf && e >= trunc) return;
        if (zstatus(c) == ZS::Zero) return;
        terms.push_back({e, c});
    }

    TS operator-() const {
        TS r = *this;
        for (auto& [e, c] : r.terms) c = -c;
        return r;
    }

    TS operator+(const TS& o) const {
        TS r;
        r.inf = inf && o.inf;
        if (!r.inf) r.trunc = rat_min(trunc_or(o.trunc), o.trunc_or(trunc));
        size_t i = 0, j = 0;
        while (i < terms.size() || j < o.terms.size()) {
            bool left = j >= o.terms.size() ||
                        (i < terms.size() && terms[i].first < o.terms[j].first);
            bool both = i < terms.size() && j < o.terms.size() &&
                        terms[i].first == o.terms[j].first;
            if (both) {
                C c = terms[i].second + o.terms[j].second;
                r.push_term(terms[i].first, c);
                ++i;
                ++j;
            } else if (left) {
                r.push_term(terms[i].first, terms[i].second);
                ++i;
            } else {
                r.push_term(o.terms[j].first, o.terms[j].second);
                ++j;
            }
        }
        r.drop_tail();
        return r;
    }
    TS operator-(const TS& o) const { return *this + (-o); }

    TS operator*(const TS& o) const {
        TS r;
        if ((certainly_zero()) || o.certainly_zero()) return r;
        Rat big(1000000);
        if (inf && o.inf)
            r.inf = true;
        else {
            r.inf = false;
            Rat t1 = trunc_or(big) + o.val_lower();
            Rat t2 = o.trunc_or(big) + val_lower();
            r.trunc = rat_min(t1, t2);
        }
        std::map<Rat, C> acc;
        for (auto& [ea, ca] : terms)
            for (auto& [eb, cb] : o.terms) {
                Rat e = ea + eb;
                if (!r.inf && e >= r.trunc) continue;
                C p = ca * cb;
                auto it = acc.find(e);
                if (it == acc.end())
                    acc.emplace(e, p);
                else
                    it->second = it->second + p;
            }
        for (auto& [e, c] : acc) r.push_term(e, c);
        r.drop_tail();
        return r;
    }

    TS scaled(const C& c) const {
        TS r = *this;
        if (zstatus(c) == ZS::Zero) {
            // exact zero scaling wipes terms but keeps truncation semantics
            r.terms.clear();
            return r;
        }
        std::vector<std::pair<Rat, C>> nt;
        for (auto& [e, a] : r.terms) {
            C p = a * c;
            if (zstatus(p) != ZS::Zero) nt.push_back({e, p});
        }
        r.terms = std::move(nt);
        return r;
    }

    TS shifted(const Rat& d) const {
        TS r = *this;
        if (!r.inf) r.trunc += d;
        for (auto& [e, c] : r.terms) e += d;
        return r;
    }

    TS pow(long k) const {
        TS acc = TS::constant_one();
        TS base = *this;
        while (k) {
            if (k & 1) acc = acc * base;
            base = base * base;
            k >>= 1;
        }
        return acc;
    }

    static TS constant_one();

    // substitution T^(1/D) -> zeta * T^(1/D): each term exponent e picks up
    // the factor zeta^(e*D); D must clear all exponent denominators.
    TS rotated(const Scalar& zeta, const Int& D) const {
        TS r = *this;
        for (auto& [e, c] : r.terms) {
            Rat k = e * Rat(D);
            if (den(k) != 1)
                fail(ErrorKind::InternalError, "puiseux", "rotation denominator mismatch");
            Int kk = num(k);
            long km = to_long(Int(((kk % D) + D) % D));
            scalar_mul_inplace(c, zeta.pow(km));
        }
        return r;
    }

    // lcm of this series' own exponent denominators (not the coefficients')
    Int exp_den() const {
        Int d(1);
        for (auto& [e, c] : terms) d = ilcm(d, den(e));
        return d;
    }
    // lcm of the coefficients' exponent denominators
    Int coeff_exp_den() const {
        Int d(1);
        for (auto& [e, c] : terms) d = ilcm(d, exp_denominator(c));
        return d;
    }

    // Multiplicative inverse of a series with a certified leading term,
    // computed to truncation `order` by a geometric expansion.
    TS inverse(const Rat& order) const {
        C one = one_coeff();
        auto ld = leading();
        if (!ld)
            fail(ErrorKind::InternalError, "puiseux", "inverse of zero series");
        auto [e0, c0] = *ld;
        // this = c0 T^e0 (1 + u), u = tail/(c0 T^e0)
        TS u = *this;
        // remove leading term
        std::vector<std::pair<Rat, C>> nt;
        bool dropped = false;
        for (auto& [e, c] : u.terms) {
            if (!dropped && e == e0) {
                dropped = true;
                continue;
            }
            nt.push_back({e, c});
        }
        u.terms = std::move(nt);
        C c0inv = inv_of(c0);
        u = u.scaled(c0inv).shifted(-e0);
        // now invert (1 + u) with val(u) > 0
        Rat rel_order = order + e0;  // inverse truncation target relative to shift
        TS inv_unit = TS::constant(one);
        TS upow = TS::constant(one);
        Rat uval = u.val_lower();
        if (uval <= 0) fail(ErrorKind::InternalError, "puiseux", "inverse unit valuation");
        long steps = 0;
        Rat cov = 0;
        while (cov < rel_order && steps < 10000) {
            upow = upow * u;
            upow.clamp(rel_order);
            if (steps % 2 == 0)
                inv_unit = inv_unit - upow;
            else
                inv_unit = inv_unit + upow;
            cov += uval;
            ++steps;
            if (upow.terms.empty() && upow.inf) break;
        }
        inv_unit.clamp(rel_order);
        return inv_unit.scaled(c0inv).shifted(-e0);
    }

    static C inv_of(const C& c);
    static C one_coeff();

    std::string str(const char* var) const;
};

inline ZS ts_status_of(const Scalar& s) { return zstatus(s); }

template <class C>
ZS zstatus(const TS<C>& s) {
    for (auto& [e, c] : s.terms) {
        ZS st = zstatus(c);
        if (st == ZS::NonZero) return ZS::NonZero;
        if (st == ZS::Unknown) return ZS::Unknown;
    }
    return s.inf ? ZS::Zero : ZS::Unknown;
}

template <class C>
void scalar_mul_inplace(TS<C>& s, const Scalar& z) {
    for (auto& [e, c] : s.terms) scalar_mul_inplace(c, z);
}

template <class C>
Int exp_denominator(const TS<C>& s) {
    return s.exp_den();
}

inline Scalar ring_one_for(const Scalar*) { return Scalar(1); }
template <class C>
TS<C> ring_one_for(const TS<C>*) {
    return TS<C>::constant(ring_one_for((const C*)nullptr));
}

template <class C>
TS<C> TS<C>::constant_one() {
    return ring_one_for((const TS<C>*)nullptr);
}

template <class C>
C TS<C>::one_coeff() {
    return ring_one_for((const C*)nullptr);
}

template <class C>
C TS<C>::inv_of(const C& c) {
    if constexpr (std::is_same_v<C, Scalar>)
        return c.inv();
    else
        return c.inverse(Rat(40));
}

using PSeries = TS<Scalar>;    // Puiseux series in one parameter over the tower
using TTSeries = TS<PSeries>;  // series in t with Puiseux-in-x coefficients

std::string pseries_str(const PSeries& s, const char* var);
std::string ttseries_str(const TTSeries& s, const char* tvar, const char* xvar);

}  // namespace carrousel
