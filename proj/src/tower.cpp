#include "carrousel/tower.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace carrousel {

// ---------------------------------------------------------------------------
// small helpers

Rat snap_to_rational(double v, long max_den, double* err) {
    // Continued-fraction convergents.
    double x = v;
    long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double best_err = 1e300;
    long long bp = 0, bq = 1;
    for (int it = 0; it < 64; ++it) {
        double fl = std::floor(x);
        if (fl > 9e17 || fl < -9e17) break;
        long long a = (long long)fl;
        long long p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den || q2 < 0) break;
        double e = std::fabs(v - double(p2) / double(q2));
        if (e < best_err) {
            best_err = e;
            bp = p2;
            bq = q2;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        double frac = x - fl;
        if (frac < 1e-15) break;
        x = 1.0 / frac;
    }
    if (err) *err = best_err;
    Rat r(Int((long)bp), Int((long)bq));
    r.canonicalize();
    return r;
}

std::string rat_str(const Rat& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

Rat dyadic_round(const Rat& v, unsigned bits) {
    Int scale = Int(1) << bits;
    Rat s = v * Rat(scale);
    Int fl;
    mpz_fdiv_q(fl.get_mpz_t(), s.get_num().get_mpz_t(), s.get_den().get_mpz_t());
    // round to nearest
    Rat frac = s - Rat(fl);
    if (frac * 2 >= 1) fl += 1;
    Rat out(fl, scale);
    out.canonicalize();
    return out;
}

QC dyadic_round(const QC& v, unsigned bits) {
    return {dyadic_round(v.re, bits), dyadic_round(v.im, bits)};
}

Rat dyadic_floor(const Rat& v, unsigned bits) {
    if (mpz_sizeinbase(v.get_den().get_mpz_t(), 2) <= bits + 1) return v;
    Int scale = Int(1) << bits;
    Rat s = v * Rat(scale);
    Int fl;
    mpz_fdiv_q(fl.get_mpz_t(), s.get_num().get_mpz_t(), s.get_den().get_mpz_t());
    Rat out(fl, scale);
    out.canonicalize();
    return out;
}

Rat dyadic_ceil(const Rat& v, unsigned bits) { return -dyadic_floor(-v, bits); }

QBox outward_round(const QBox& b, unsigned bits) {
    return {dyadic_floor(b.re_lo, bits), dyadic_ceil(b.re_hi, bits),
            dyadic_floor(b.im_lo, bits), dyadic_ceil(b.im_hi, bits)};
}

// ---------------------------------------------------------------------------
// univariate poly helpers over the tower

int updeg(const UPoly& p) {
    for (int i = int(p.size()) - 1; i >= 0; --i)
        if (!p[size_t(i)].is_zero()) return i;
    return -1;
}

UPoly uptrim(UPoly p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
    return p;
}

UPoly upadd(const UPoly& a, const UPoly& b) {
    UPoly r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) r[i] = r[i] + a[i];
        if (i < b.size()) r[i] = r[i] + b[i];
    }
    return uptrim(r);
}

UPoly upsub(const UPoly& a, const UPoly& b) {
    UPoly r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) r[i] = r[i] + a[i];
        if (i < b.size()) r[i] = r[i] - b[i];
    }
    return uptrim(r);
}

UPoly upmul(const UPoly& a, const UPoly& b) {
    if (a.empty() || b.empty()) return {};
    UPoly r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
    return uptrim(r);
}

UPoly upscale(const UPoly& a, const Scalar& c) {
    UPoly r = a;
    for (auto& x : r) x = x * c;
    return uptrim(r);
}

UPoly upderiv(const UPoly& a) {
    if (a.size() <= 1) return {};
    UPoly r(a.size() - 1);
    for (size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * Scalar(long(i));
    return uptrim(r);
}

Scalar upeval(const UPoly& a, const Scalar& x) {
    Scalar acc(0);
    for (int i = int(a.size()) - 1; i >= 0; --i) acc = acc * x + a[size_t(i)];
    return acc;
}

QBox upeval_box(const UPoly& a, const QBox& x, unsigned prec) {
    QBox acc = QBox::point(QC());
    for (int i = int(a.size()) - 1; i >= 0; --i)
        acc = outward_round(acc * x + a[size_t(i)].enclosure(prec), prec + 16);
    return acc;
}

void updivmod(const UPoly& a, const UPoly& b, UPoly& q, UPoly& r) {
    UPoly bb = uptrim(b);
    int db = updeg(bb);
    if (db < 0) fail(ErrorKind::InternalError, "algebra", "division by zero polynomial");
    bb.resize(size_t(db) + 1);
    Scalar lcinv = bb[size_t(db)].inv();
    r = uptrim(a);
    int dr = updeg(r);
    q.assign(dr >= db ? size_t(dr - db) + 1 : 1, Scalar(0));
    while ((dr = updeg(r)) >= db) {
        r.resize(size_t(dr) + 1);
        Scalar c = r[size_t(dr)] * lcinv;
        q[size_t(dr - db)] = c;
        for (int i = 0; i < db; ++i)
            r[size_t(dr - db + i)] = r[size_t(dr - db + i)] - c * bb[size_t(i)];
        r.resize(size_t(dr));  // leading term cancels exactly
    }
    q = uptrim(q);
    r = uptrim(r);
}

UPoly upmonic(UPoly a) {
    int d = updeg(a);
    if (d < 0) return {};
    a.resize(size_t(d) + 1);
    Scalar lcinv = a[size_t(d)].inv();
    for (auto& c : a) c = c * lcinv;
    a[size_t(d)] = Scalar(1);
    return a;
}

UPoly upgcd_monic(UPoly a, UPoly b) {
    a = uptrim(a);
    b = uptrim(b);
    while (updeg(b) >= 0) {
        UPoly q, r;
        updivmod(a, b, q, r);
        a = b;
        b = r;
    }
    if (updeg(a) < 0) return {};
    return upmonic(a);
}

UPoly updiv_exact(const UPoly& a, const UPoly& b) {
    UPoly q, r;
    updivmod(a, b, q, r);
    if (updeg(r) >= 0)
        fail(ErrorKind::InternalError, "algebra", "inexact polynomial division");
    return q;
}

// ---------------------------------------------------------------------------
// Scalar

Tower& Tower::instance() {
    static Tower t;
    return t;
}

Scalar Scalar::make(int level, std::vector<Scalar> coeffs) {
    Scalar s;
    s.level_ = level;
    s.coeffs_ = std::move(coeffs);
    s.version_ = 0;
    s.normalize();
    return s;
}

void Scalar::normalize() const {
    if (level_ == 0) return;
    Tower& t = Tower::instance();
    std::lock_guard<std::recursive_mutex> lk(t.mu_);
    if (version_ == t.version_) return;
    auto* self = const_cast<Scalar*>(this);
    const UPoly& mod = t.modulus(level_);
    UPoly rep = uptrim(self->coeffs_);
    if (updeg(rep) >= updeg(mod)) {
        UPoly q, r;
        updivmod(rep, mod, q, r);
        rep = r;
    }
    rep.resize(size_t(updeg(mod)) > 0 ? size_t(updeg(mod)) : 1, Scalar(0));
    self->coeffs_ = rep;
    self->version_ = t.version_;
}

Scalar Scalar::lift(const Scalar& s, int level) {
    Scalar cur = s;
    while (cur.level() < level) cur = Scalar::make(cur.level() + 1, {cur});
    return cur;
}

static Scalar lift_to(const Scalar& s, int level) { return Scalar::lift(s, level); }

Scalar Scalar::operator+(const Scalar& o) const {
    if (level_ == 0 && o.level_ == 0) return Scalar(q_ + o.q_);
    int L = std::max(level_, o.level_);
    Scalar a = lift_to(*this, L), b = lift_to(o, L);
    a.normalize();
    b.normalize();
    std::vector<Scalar> c(std::max(a.coeffs_.size(), b.coeffs_.size()), Scalar(0));
    for (size_t i = 0; i < c.size(); ++i) {
        if (i < a.coeffs_.size()) c[i] = c[i] + a.coeffs_[i];
        if (i < b.coeffs_.size()) c[i] = c[i] + b.coeffs_[i];
    }
    return make(L, std::move(c));
}

Scalar Scalar::operator-() const {
    if (level_ == 0) return Scalar(-q_);
    Scalar r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
    if (level_ == 0 && o.level_ == 0) return Scalar(q_ * o.q_);
    if (level_ == 0) {
        if (q_ == 0) return Scalar(0);
        Scalar r = o;
        r.normalize();
        for (auto& c : r.coeffs_) c = c * *this;
        return r;
    }
    if (o.level_ == 0) return o * *this;
    int L = std::max(level_, o.level_);
    Scalar a = lift_to(*this, L), b = lift_to(o, L);
    a.normalize();
    b.normalize();
    UPoly prod = upmul(uptrim(a.coeffs_), uptrim(b.coeffs_));
    return make(L, std::move(prod));
}

Scalar Scalar::pow(long e) const {
    if (e == 0) return Scalar(1);
    if (e < 0) return inv().pow(-e);
    Scalar base = *this, acc(1);
    while (e) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

bool Scalar::is_rational() const {
    if (level_ == 0) return true;
    normalize();
    for (size_t i = 1; i < coeffs_.size(); ++i)
        if (!coeffs_[i].is_zero()) return false;
    return coeffs_.empty() ? true : coeffs_[0].is_rational();
}

Rat Scalar::to_rational() const {
    if (level_ == 0) return q_;
    normalize();
    if (coeffs_.empty()) return Rat(0);
    return coeffs_[0].to_rational();
}

bool Scalar::is_zero() const {
    if (level_ == 0) return q_ == 0;
    Tower& t = Tower::instance();
    std::lock_guard<std::recursive_mutex> lk(t.mu_);
    normalize();
    bool allz = true;
    for (const auto& c : coeffs_)
        if (!c.is_zero()) {
            allz = false;
            break;
        }
    if (allz) return true;
    // numeric fast path: an enclosure excluding zero certifies nonzero
    for (unsigned prec : {40u, 120u}) {
        QBox e = enclosure(prec);
        if (!e.contains_zero()) return false;
    }
    // A nonzero representative can still vanish at the boxed root when the
    // level's modulus is reducible; detect via gcd and split the level.
    UPoly rep = uptrim(const_cast<Scalar*>(this)->coeffs_);
    const UPoly mod = t.modulus(level_);
    UPoly g = upgcd_monic(rep, mod);
    if (updeg(g) <= 0) return false;
    if (updeg(g) == updeg(mod)) {
        // rep is a multiple of mod; normalize should have killed it
        return true;
    }
    UPoly h = updiv_exact(mod, g);
    if (t.root_satisfies(level_, g, h)) {
        t.shrink_modulus(level_, g);
        normalize();
        return true;
    }
    t.shrink_modulus(level_, h);
    normalize();
    return false;
}

Scalar Scalar::inv() const {
    if (level_ == 0) {
        if (q_ == 0) fail(ErrorKind::InternalError, "algebra", "division by zero");
        return Scalar(Rat(1) / q_);
    }
    Tower& t = Tower::instance();
    std::lock_guard<std::recursive_mutex> lk(t.mu_);
    for (int attempt = 0; attempt < 64; ++attempt) {
        normalize();
        UPoly a = uptrim(coeffs_);
        if (updeg(a) < 0) fail(ErrorKind::InternalError, "algebra", "division by zero");
        UPoly mod = t.modulus(level_);
        // extended Euclid: u*a + v*mod = g
        UPoly r0 = mod, r1 = a;
        UPoly s0 = {}, s1 = {Scalar(1)};
        while (updeg(r1) >= 0) {
            UPoly q, r;
            updivmod(r0, r1, q, r);
            UPoly s2 = upsub(s0, upmul(q, s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
        }
        if (updeg(r0) == 0) {
            UPoly u = upscale(s0, r0[0].inv());
            return make(level_, std::move(u));
        }
        // gcd(a, mod) nontrivial: split the modulus and retry
        UPoly g = upmonic(r0);
        UPoly h = updiv_exact(mod, g);
        if (t.root_satisfies(level_, g, h)) {
            // value is a root of g and g | gcd(a,mod)... then a(theta)=0
            fail(ErrorKind::InternalError, "algebra", "division by zero (hidden)");
        }
        t.shrink_modulus(level_, h);
    }
    fail(ErrorKind::InternalError, "algebra", "inverse did not stabilize");
}

QBox Scalar::enclosure(unsigned prec_bits) const {
    if (level_ == 0) return QBox::point(QC(q_));
    Tower& t = Tower::instance();
    std::lock_guard<std::recursive_mutex> lk(t.mu_);
    normalize();
    Rat target = Rat(1, Int(1) << std::min(prec_bits, 200u));
    unsigned work = prec_bits + 8;
    for (int attempt = 0; attempt < 12; ++attempt) {
        QBox gen = t.level_box(level_, work);
        QBox acc = QBox::point(QC());
        for (int i = int(coeffs_.size()) - 1; i >= 0; --i)
            acc = outward_round(acc * gen + coeffs_[size_t(i)].enclosure(work), work + 16);
        if (acc.half_width() <= target) return acc;
        work *= 2;
        if (work > 4096) break;
    }
    fail(ErrorKind::IsolationFailure, "algebra", "enclosure refinement stalled",
         "raise truncation or report a defect");
}

int Scalar::cmp_structural(const Scalar& o) const {
    normalize();
    o.normalize();
    if (level_ != o.level_) return level_ < o.level_ ? -1 : 1;
    if (level_ == 0) return q_ < o.q_ ? -1 : (q_ == o.q_ ? 0 : 1);
    size_t n = std::max(coeffs_.size(), o.coeffs_.size());
    for (size_t i = 0; i < n; ++i) {
        Scalar a = i < coeffs_.size() ? coeffs_[i] : Scalar(0);
        Scalar b = i < o.coeffs_.size() ? o.coeffs_[i] : Scalar(0);
        int c = a.cmp_structural(b);
        if (c) return c;
    }
    return 0;
}

std::string Scalar::str() const {
    if (level_ == 0) return rat_str(q_);
    normalize();
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i].is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << coeffs_[i].str() << ")";
        if (i >= 1) {
            os << "*g" << level_;
            if (i > 1) os << "^" << i;
        }
    }
    if (first) return "0";
    return os.str();
}

// ---------------------------------------------------------------------------
// numeric root machinery

namespace {

using CD = std::complex<double>;

std::vector<CD> aberth_roots(std::vector<CD> c) {
    while (!c.empty() && std::abs(c.back()) == 0.0) c.pop_back();
    int n = int(c.size()) - 1;
    std::vector<CD> z;
    if (n <= 0) return z;
    for (auto& v : c) v /= c.back();
    // Cauchy bound
    double R = 0;
    for (int i = 0; i < n; ++i) R = std::max(R, std::abs(c[size_t(i)]));
    R += 1.0;
    z.resize(size_t(n));
    for (int i = 0; i < n; ++i) {
        double th = 2.0 * M_PI * (double(i) + 0.35) / double(n) + 0.41;
        z[size_t(i)] = std::polar(R * (0.5 + 0.3 * std::cos(3.1 * i)), th);
    }
    auto eval = [&](CD x, CD& p, CD& dp) {
        p = 0;
        dp = 0;
        for (int i = n; i >= 0; --i) {
            dp = dp * x + p;
            p = p * x + c[size_t(i)];
        }
    };
    for (int it = 0; it < 400; ++it) {
        double moved = 0;
        for (int i = 0; i < n; ++i) {
            CD p, dp;
            eval(z[size_t(i)], p, dp);
            if (std::abs(p) == 0.0) continue;
            CD w = (dp == 0.0) ? CD(1e-12, 1e-12) : p / dp;
            CD s = 0;
            for (int j = 0; j < n; ++j)
                if (j != i) s += 1.0 / (z[size_t(i)] - z[size_t(j)]);
            CD corr = w / (1.0 - w * s);
            z[size_t(i)] -= corr;
            moved = std::max(moved, std::abs(corr));
        }
        if (moved < 1e-14) break;
    }
    return z;
}

}  // namespace

// Evaluate p at exact rational complex point via coefficient enclosures.
static QBox upeval_point(const UPoly& p, const QC& x, unsigned prec) {
    return upeval_box(p, QBox::point(x), prec);
}

void Tower::refine_level(int level, unsigned prec_bits) {
    Level& L = levels_[size_t(level) - 1];
    Rat target = Rat(1, Int(1) << std::min(prec_bits, 400u));
    if (L.radius <= target && int(L.others.size()) == updeg(L.defining) - 1) return;
    if (int(L.others.size()) != updeg(L.defining) - 1) {
        // modulus changed since the approximations were recorded: re-seed
        std::vector<std::complex<double>> cd;
        for (const auto& c : L.defining) cd.push_back(c.enclosure(64).mid().to_double());
        auto zs = aberth_roots(cd);
        size_t best = 0;
        double bd = 1e300;
        auto c0 = L.center.to_double();
        for (size_t i = 0; i < zs.size(); ++i) {
            double d = std::abs(zs[i] - c0);
            if (d < bd) {
                bd = d;
                best = i;
            }
        }
        L.center = QC(dyadic_round(Rat(zs[best].real()), 64), dyadic_round(Rat(zs[best].imag()), 64));
        L.others.clear();
        for (size_t i = 0; i < zs.size(); ++i)
            if (i != best)
                L.others.push_back(
                    QC(dyadic_round(Rat(zs[i].real()), 64), dyadic_round(Rat(zs[i].imag()), 64)));
        L.radius = Rat(1);  // force recertification below
    }
    if (L.radius <= target) return;
    const UPoly& p = L.defining;
    UPoly dp = upderiv(p);
    unsigned work = std::max<unsigned>(L.prec, prec_bits) + 16;
    int n = updeg(p);
    for (int rounds = 0; rounds < 64 && L.radius > target; ++rounds) {
        // joint Newton polish of the tracked approximations
        auto polish = [&](QC& zc) {
            for (int it = 0; it < 3; ++it) {
                QBox pv = upeval_point(p, zc, work);
                QBox dv = upeval_point(dp, zc, work);
                Rat dlo = dv.abs_lower();
                if (dlo == 0) return;
                QC pm = pv.mid(), dm = dv.mid();
                if (dm.norm2() == 0) return;
                QC step = pm * dm.inv();
                zc = dyadic_round(zc - step, work);
            }
        };
        polish(L.center);
        for (auto& o : L.others) polish(o);
        // Smith-style certified radii
        auto radius_at = [&](const QC& zi, const std::vector<QC>& rest) -> Rat {
            QBox pv = upeval_point(p, zi, work);
            Rat up = pv.abs_upper();
            Rat denom(1);
            for (const auto& zj : rest) {
                Rat d = (zi - zj).abs_lower();
                if (d == 0) return Rat(-1);
                denom *= d;
            }
            QBox lead = p[size_t(n)].enclosure(work);
            Rat llo = lead.abs_lower();
            if (llo == 0) return Rat(-1);
            return Rat(n) * up / (denom * llo);
        };
        std::vector<QC> rest = L.others;
        Rat rc = radius_at(L.center, rest);
        bool ok = rc >= 0;
        Rat ro(0);
        std::vector<Rat> other_r;
        if (ok)
            for (size_t i = 0; i < L.others.size() && ok; ++i) {
                std::vector<QC> rr;
                rr.push_back(L.center);
                for (size_t j = 0; j < L.others.size(); ++j)
                    if (j != i) rr.push_back(L.others[j]);
                Rat r = radius_at(L.others[i], rr);
                if (r < 0) ok = false;
                other_r.push_back(r);
                if (r > ro) ro = r;
            }
        if (ok) {
            // pairwise disjoint check (squares)
            auto disjoint = [&](const QC& a, const Rat& ra, const QC& b, const Rat& rb) {
                return !QBox::disc(a, ra).intersects(QBox::disc(b, rb));
            };
            bool dis = true;
            for (size_t i = 0; i < L.others.size() && dis; ++i)
                dis = disjoint(L.center, rc, L.others[i], other_r[i]);
            for (size_t i = 0; i < L.others.size() && dis; ++i)
                for (size_t j = i + 1; j < L.others.size() && dis; ++j)
                    dis = disjoint(L.others[i], other_r[i], L.others[j], other_r[j]);
            if (dis) {
                L.radius = rc;
                L.others_radius = ro;
                L.prec = work;
                if (L.radius <= target) return;
            }
        }
        work *= 2;
        if (work > 1u << 16)
            fail(ErrorKind::IsolationFailure, "algebra", "root refinement stalled");
    }
    if (L.radius > target)
        fail(ErrorKind::IsolationFailure, "algebra", "root refinement did not reach precision");
}

QBox Tower::level_box(int level, unsigned prec_bits) {
    refine_level(level, prec_bits);
    Level& L = levels_[size_t(level) - 1];
    return QBox::disc(L.center, L.radius);
}

bool Tower::root_satisfies(int level, const UPoly& g, const UPoly& h) {
    for (unsigned prec = 32; prec <= (1u << 14); prec *= 2) {
        QBox box = level_box(level, prec);
        QBox gv = upeval_box(g, box, prec);
        QBox hv = upeval_box(h, box, prec);
        if (!hv.contains_zero()) return true;   // h(theta) != 0 => theta is a root of g
        if (!gv.contains_zero()) return false;  // g(theta) != 0 => theta is a root of h
    }
    fail(ErrorKind::IsolationFailure, "algebra", "factor separation stalled");
}

void Tower::shrink_modulus(int level, const UPoly& factor) {
    Level& L = levels_[size_t(level) - 1];
    if (updeg(factor) == updeg(L.defining)) return;
    L.defining = upmonic(factor);
    // keep only tracked approximations consistent with the new modulus
    std::vector<QC> keep;
    unsigned prec = std::max(L.prec, 64u);
    for (const auto& o : L.others) {
        QBox v = upeval_box(L.defining, QBox::disc(o, L.others_radius), prec);
        if (v.contains_zero()) keep.push_back(o);
    }
    if (int(keep.size()) > updeg(L.defining) - 1) keep.resize(size_t(updeg(L.defining) - 1));
    L.others = keep;
    ++version_;
}

Scalar Tower::root_from_numeric(const UPoly& p, const std::vector<QC>& all, size_t idx,
                                const Rat& radius) {
    // dedupe against existing levels
    for (size_t li = 0; li < levels_.size(); ++li) {
        Level& L = levels_[li];
        if (updeg(L.defining) != updeg(p)) continue;
        bool same = true;
        for (size_t i = 0; i < p.size() && same; ++i) {
            Scalar a = i < L.defining.size() ? L.defining[i] : Scalar(0);
            Scalar b = i < p.size() ? p[i] : Scalar(0);
            same = (a == b);
        }
        if (!same) continue;
        if (QBox::disc(L.center, L.radius).intersects(QBox::disc(all[idx], radius))) {
            std::vector<Scalar> rep{Scalar(0), Scalar(1)};
            return Scalar::make(int(li) + 1, rep);
        }
    }
    Level L;
    L.defining = p;
    L.center = all[idx];
    L.radius = radius;
    for (size_t j = 0; j < all.size(); ++j)
        if (j != idx) L.others.push_back(all[j]);
    L.others_radius = radius;
    L.prec = 64;
    levels_.push_back(std::move(L));
    ++version_;
    std::vector<Scalar> rep{Scalar(0), Scalar(1)};
    return Scalar::make(int(levels_.size()), rep);
}

// squarefree decomposition (Yun) -> list of (factor, multiplicity)
static std::vector<std::pair<UPoly, int>> yun_squarefree(const UPoly& p0) {
    UPoly p = upmonic(p0);
    std::vector<std::pair<UPoly, int>> out;
    UPoly dp = upderiv(p);
    UPoly g = upgcd_monic(p, dp);
    if (updeg(g) <= 0) {
        out.push_back({p, 1});
        return out;
    }
    UPoly b = updiv_exact(p, g);
    UPoly c = updiv_exact(dp, g);
    UPoly d = upsub(c, upderiv(b));
    int i = 1;
    while (updeg(b) > 0) {
        UPoly a = upgcd_monic(b, d);
        if (updeg(a) > 0) out.push_back({a, i});
        b = updiv_exact(b, updeg(a) > 0 ? a : UPoly{Scalar(1)});
        c = updiv_exact(d, updeg(a) > 0 ? a : UPoly{Scalar(1)});
        d = upsub(c, upderiv(b));
        ++i;
        if (i > 64) fail(ErrorKind::InternalError, "algebra", "squarefree loop");
    }
    return out;
}

std::vector<RootInfo> Tower::all_roots(const UPoly& p_in) {
    std::lock_guard<std::recursive_mutex> lk(mu_);
    UPoly p = uptrim(p_in);
    if (updeg(p) <= 0)
        fail(ErrorKind::InvalidElimination, "algebra", "root extraction needs positive degree");
    std::vector<RootInfo> out;
    for (auto& [f, mult] : yun_squarefree(p)) {
        for (auto& r : all_roots_inner(f)) {
            r.multiplicity = mult;
            out.push_back(r);
        }
    }
    return out;
}

std::vector<RootInfo> Tower::all_roots_inner(const UPoly& q_in) {
    UPoly q = upmonic(q_in);
    std::vector<RootInfo> out;
    int n = updeg(q);
    if (n <= 0) return out;
    if (n == 1) {
        out.push_back({-q[0], 1});
        return out;
    }
    // numeric seeds
    unsigned prec = 64;
    for (int attempt = 0;; ++attempt) {
        std::vector<CD> cd;
        cd.reserve(q.size());
        for (const auto& c : q) cd.push_back(c.enclosure(prec).mid().to_double());
        std::vector<CD> zs = aberth_roots(cd);
        if (int(zs.size()) != n) fail(ErrorKind::IsolationFailure, "algebra", "lost roots");
        // rational polish
        std::vector<QC> zq;
        UPoly dq = upderiv(q);
        for (auto& z : zs) {
            QC zc(dyadic_round(Rat(z.real()), prec), dyadic_round(Rat(z.imag()), prec));
            for (int it = 0; it < 4 + attempt * 2; ++it) {
                QBox pv = upeval_point(q, zc, prec);
                QBox dv = upeval_point(dq, zc, prec);
                QC dm = dv.mid();
                if (dm.norm2() == 0) break;
                zc = dyadic_round(zc - pv.mid() * dm.inv(), prec);
            }
            zq.push_back(zc);
        }
        // try exact rational roots first
        for (size_t i = 0; i < zq.size(); ++i) {
            QBox pv = upeval_point(q, zq[i], prec);
            (void)pv;
            double im = zq[i].im.get_d();
            if (std::fabs(im) < 1e-9) {
                double err;
                Rat cand = snap_to_rational(zq[i].re.get_d(), 1000000L, &err);
                if (err < 1e-9) {
                    Scalar c(cand);
                    if (upeval(q, c).is_zero()) {
                        out.push_back({c, 1});
                        UPoly lin{-c, Scalar(1)};
                        UPoly rest = updiv_exact(q, lin);
                        auto deeper = all_roots_inner(rest);
                        for (auto& r : deeper) out.push_back(r);
                        return out;
                    }
                }
            }
        }
        // Smith radii certification
        auto lead = q[size_t(n)].enclosure(prec);
        Rat llo = lead.abs_lower();
        bool ok = llo > 0;
        std::vector<Rat> radii(zq.size(), Rat(0));
        for (size_t i = 0; i < zq.size() && ok; ++i) {
            QBox pv = upeval_point(q, zq[i], prec);
            Rat up = pv.abs_upper();
            Rat denom(1);
            for (size_t j = 0; j < zq.size(); ++j) {
                if (j == i) continue;
                Rat d = (zq[i] - zq[j]).abs_lower();
                if (d == 0) {
                    ok = false;
                    break;
                }
                denom *= d;
            }
            if (!ok) break;
            radii[i] = Rat(n) * up / (denom * llo);
        }
        if (ok) {
            for (size_t i = 0; i < zq.size() && ok; ++i)
                for (size_t j = i + 1; j < zq.size() && ok; ++j)
                    ok = !QBox::disc(zq[i], radii[i]).intersects(QBox::disc(zq[j], radii[j]));
        }
        if (ok) {
            // binomial shortcut: v^n - c
            bool binom = true;
            for (int i = 1; i < n; ++i)
                if (!q[size_t(i)].is_zero()) {
                    binom = false;
                    break;
                }
            Rat rmax = radii[0];
            for (auto& r : radii) rmax = rat_max(rmax, r);
            if (binom && n >= 2) {
                Scalar theta = root_from_numeric(q, zq, 0, rmax);
                Scalar zeta = root_of_unity(n);
                Scalar cur = theta;
                for (int j = 0; j < n; ++j) {
                    out.push_back({cur, 1});
                    if (j + 1 < n) cur = cur * zeta;
                }
                return out;
            }
            Scalar theta = root_from_numeric(q, zq, 0, rmax);
            out.push_back({theta, 1});
            UPoly lin{-theta, Scalar(1)};
            UPoly rest = updiv_exact(q, lin);
            auto deeper = all_roots_inner(rest);
            for (auto& r : deeper) out.push_back(r);
            return out;
        }
        prec *= 2;
        if (prec > (1u << 13))
            fail(ErrorKind::IsolationFailure, "algebra", "numeric isolation stalled");
    }
}

Scalar Tower::root_in_box(const UPoly& defining, const QBox& box) {
    std::lock_guard<std::recursive_mutex> lk(mu_);
    UPoly p = uptrim(defining);
    if (updeg(p) <= 0)
        fail(ErrorKind::InvalidElimination, "algebra", "tower extension needs positive degree");
    auto roots = all_roots(p);
    std::vector<size_t> inside;
    for (size_t i = 0; i < roots.size(); ++i) {
        QBox e = roots[i].value.enclosure(48);
        if (box.intersects(e)) inside.push_back(i);
    }
    if (inside.size() == 1) return roots[inside[0]].value;
    // ambiguous: refine candidate enclosures and demand strict containment
    for (unsigned prec = 96; prec <= 2048; prec *= 2) {
        inside.clear();
        for (size_t i = 0; i < roots.size(); ++i) {
            QBox e = roots[i].value.enclosure(prec);
            if (box.intersects(e)) inside.push_back(i);
        }
        if (inside.size() == 1) return roots[inside[0]].value;
        if (inside.empty())
            fail(ErrorKind::IsolationFailure, "algebra", "box contains no root of the defining polynomial");
    }
    fail(ErrorKind::IsolationFailure, "algebra",
         "box does not isolate a single root after maximal refinement",
         "shrink the box");
}

// cyclotomic polynomial over Q, as a UPoly of rational scalars
static UPoly cyclotomic(long n) {
    // Phi_1 = v - 1
    std::vector<UPoly> phi(size_t(n) + 1);
    for (long d = 1; d <= n; ++d) {
        if (n % d) continue;
        // start from v^d - 1
        UPoly xd(size_t(d) + 1, Scalar(0));
        xd[0] = Scalar(-1);
        xd[size_t(d)] = Scalar(1);
        for (long e = 1; e < d; ++e) {
            if (d % e) continue;
            if (n % e) continue;
            xd = updiv_exact(xd, phi[size_t(e)]);
        }
        phi[size_t(d)] = xd;
    }
    return phi[size_t(n)];
}

Scalar Tower::root_of_unity(long n) {
    std::lock_guard<std::recursive_mutex> lk(mu_);
    if (n <= 0) fail(ErrorKind::InternalError, "algebra", "root_of_unity order");
    if (n == 1) return Scalar(1);
    if (n == 2) return Scalar(-1);
    auto it = zeta_cache_.find(n);
    if (it != zeta_cache_.end()) return it->second;
    UPoly phi = cyclotomic(n);
    double th = 2.0 * M_PI / double(n);
    double margin = std::min(0.2, th / 8.0);
    QBox box(dyadic_round(Rat(std::cos(th) - margin), 40), dyadic_round(Rat(std::cos(th) + margin), 40),
             dyadic_round(Rat(std::sin(th) - margin), 40), dyadic_round(Rat(std::sin(th) + margin), 40));
    Scalar z = root_in_box(phi, box);
    zeta_cache_.emplace(n, z);
    return z;
}

Scalar Tower::i() { return root_of_unity(4); }

void Tower::reset() {
    std::lock_guard<std::recursive_mutex> lk(mu_);
    levels_.clear();
    zeta_cache_.clear();
    ++version_;
}

}  // namespace carrousel
