#include "carrousel/multipoly.hpp"

#include <algorithm>
#include <sstream>

namespace carrousel {

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
    MultiPoly r = *this;
    for (auto& [e, c] : o.terms) {
        auto it = r.terms.find(e);
        if (it == r.terms.end())
            r.terms[e] = c;
        else {
            it->second = it->second + c;
            if (it->second.is_zero()) r.terms.erase(it);
        }
    }
    return r;
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly r = *this;
    for (auto& [e, c] : r.terms) c = -c;
    return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const { return *this + (-o); }

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
    MultiPoly r;
    for (auto& [ea, ca] : terms)
        for (auto& [eb, cb] : o.terms) {
            Exps e{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]};
            Scalar p = ca * cb;
            auto it = r.terms.find(e);
            if (it == r.terms.end()) {
                if (!p.is_zero()) r.terms[e] = p;
            } else {
                it->second = it->second + p;
                if (it->second.is_zero()) r.terms.erase(it);
            }
        }
    return r;
}

MultiPoly MultiPoly::operator*(const Scalar& c) const {
    MultiPoly r;
    if (c.is_zero()) return r;
    for (auto& [e, a] : terms) {
        Scalar p = a * c;
        if (!p.is_zero()) r.terms[e] = p;
    }
    return r;
}

MultiPoly MultiPoly::pow(int e) const {
    MultiPoly acc(Scalar(1));
    MultiPoly base = *this;
    while (e) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

MultiPoly MultiPoly::derivative(int v) const {
    MultiPoly r;
    for (auto& [e, c] : terms) {
        int d = e[size_t(v)];
        if (d == 0) continue;
        Exps e2 = e;
        e2[size_t(v)] = d - 1;
        Scalar nc = c * Scalar(long(d));
        if (!nc.is_zero()) r.terms[e2] = nc;
    }
    return r;
}

std::vector<MultiPoly> MultiPoly::coeffs_in(int v) const {
    int d = degree(v);
    std::vector<MultiPoly> out(size_t(std::max(d, 0)) + 1);
    for (auto& [e, c] : terms) {
        Exps e2 = e;
        int k = e2[size_t(v)];
        e2[size_t(v)] = 0;
        out[size_t(k)].terms[e2] = c;
    }
    return out;
}

MultiPoly MultiPoly::from_coeffs(int v, const std::vector<MultiPoly>& cs) {
    MultiPoly r;
    for (size_t k = 0; k < cs.size(); ++k)
        for (auto& [e, c] : cs[k].terms) {
            Exps e2 = e;
            e2[size_t(v)] += int(k);
            r.terms[e2] = c;
        }
    return r;
}

MultiPoly MultiPoly::subst(int v, const MultiPoly& s) const {
    auto cs = coeffs_in(v);
    MultiPoly acc;
    for (int k = int(cs.size()) - 1; k >= 0; --k) acc = acc * s + cs[size_t(k)];
    return acc;
}

MultiPoly MultiPoly::subst_scalar(int v, const Scalar& c) const {
    return subst(v, MultiPoly(c));
}

MultiPoly MultiPoly::lowest_form() const {
    int lo = INT32_MAX;
    for (auto& [e, c] : terms) lo = std::min(lo, e[0] + e[1] + e[2] + e[3]);
    MultiPoly r;
    for (auto& [e, c] : terms)
        if (e[0] + e[1] + e[2] + e[3] == lo) r.terms[e] = c;
    return r;
}

Exps MultiPoly::strip_monomial() {
    Exps mins{0, 0, 0, 0};
    if (terms.empty()) return mins;
    mins = terms.begin()->first;
    for (auto& [e, c] : terms)
        for (int v = 0; v < 4; ++v) mins[size_t(v)] = std::min(mins[size_t(v)], e[size_t(v)]);
    if (mins == Exps{0, 0, 0, 0}) return mins;
    std::map<Exps, Scalar> nt;
    for (auto& [e, c] : terms)
        nt[{e[0] - mins[0], e[1] - mins[1], e[2] - mins[2], e[3] - mins[3]}] = c;
    terms = std::move(nt);
    return mins;
}

std::string MultiPoly::str() const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
        auto& [e, c] = *it;
        if (!first) os << " + ";
        first = false;
        bool printed = false;
        if (c.is_rational()) {
            Rat q = c.to_rational();
            if (q != 1 || e == Exps{0, 0, 0, 0}) {
                os << rat_str(q);
                printed = true;
            }
        } else {
            os << "(" << c.str() << ")";
            printed = true;
        }
        for (int v = 0; v < 4; ++v) {
            if (e[size_t(v)] == 0) continue;
            if (printed) os << "*";
            os << var_name(v);
            if (e[size_t(v)] > 1) os << "^" << e[size_t(v)];
            printed = true;
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// division, gcd, squarefree

static bool mono_divides(const Exps& a, const Exps& b) {  // a | b
    for (int v = 0; v < 4; ++v)
        if (a[size_t(v)] > b[size_t(v)]) return false;
    return true;
}

MultiPoly mp_div_exact(const MultiPoly& a, const MultiPoly& b) {
    if (b.is_zero()) fail(ErrorKind::InternalError, "algebra", "division by zero polynomial");
    MultiPoly r = a, q;
    auto ltb = *b.terms.rbegin();
    Scalar lcb_inv = ltb.second.inv();
    while (!r.is_zero()) {
        auto ltr = *r.terms.rbegin();
        if (!mono_divides(ltb.first, ltr.first))
            fail(ErrorKind::InternalError, "algebra", "inexact polynomial division");
        Exps e{ltr.first[0] - ltb.first[0], ltr.first[1] - ltb.first[1],
               ltr.first[2] - ltb.first[2], ltr.first[3] - ltb.first[3]};
        MultiPoly t = MultiPoly::term(e, ltr.second * lcb_inv);
        q = q + t;
        r = r - t * b;
    }
    return q;
}

// pseudo-remainder of a by b in variable v
static MultiPoly mp_prem(const MultiPoly& a, const MultiPoly& b, int v) {
    int db = b.degree(v);
    auto bc = b.coeffs_in(v);
    MultiPoly lb = bc[size_t(db)];
    MultiPoly r = a;
    int guard = 0;
    while (true) {
        int dr = r.degree(v);
        if (dr < db || r.is_zero()) return r;
        auto rc = r.coeffs_in(v);
        MultiPoly lr = rc[size_t(dr)];
        MultiPoly shift = MultiPoly::variable(v, dr - db);
        r = r * lb - b * shift * lr;
        if (++guard > 10000) fail(ErrorKind::InternalError, "algebra", "prem loop");
    }
}

static MultiPoly mp_normalize(const MultiPoly& p) {
    if (p.is_zero()) return p;
    Scalar lc = p.terms.rbegin()->second;
    return p * lc.inv();
}

static MultiPoly mp_content(const MultiPoly& p, int v);

MultiPoly mp_gcd(const MultiPoly& a, const MultiPoly& b) {
    if (a.is_zero()) return mp_normalize(b);
    if (b.is_zero()) return mp_normalize(a);
    int v = -1;
    for (int u = 3; u >= 0; --u)
        if (a.degree(u) > 0 || b.degree(u) > 0) {
            v = u;
            break;
        }
    if (v < 0) return MultiPoly(Scalar(1));  // both nonzero constants
    MultiPoly ca = mp_content(a, v), cb = mp_content(b, v);
    MultiPoly pa = mp_div_exact(a, ca), pb = mp_div_exact(b, cb);
    MultiPoly cg = mp_gcd(ca, cb);
    MultiPoly f = pa, g = pb;
    if (f.degree(v) < g.degree(v)) std::swap(f, g);
    int guard = 0;
    while (!g.is_zero() && g.degree(v) > 0) {
        MultiPoly r = mp_prem(f, g, v);
        if (!r.is_zero()) r = mp_div_exact(r, mp_content(r, v));
        f = g;
        g = r;
        if (++guard > 1000) fail(ErrorKind::InternalError, "algebra", "gcd loop");
    }
    MultiPoly pg;
    if (g.is_zero()) {
        pg = f;
        pg = mp_div_exact(pg, mp_content(pg, v));
    } else {
        pg = MultiPoly(Scalar(1));  // gcd is content-free in v
    }
    return mp_normalize(cg * pg);
}

static MultiPoly mp_content(const MultiPoly& p, int v) {
    auto cs = p.coeffs_in(v);
    MultiPoly g;
    for (auto& c : cs) {
        if (c.is_zero()) continue;
        g = g.is_zero() ? mp_normalize(c) : mp_gcd(g, c);
        if (g.is_constant()) return MultiPoly(Scalar(1));
    }
    if (g.is_zero()) return MultiPoly(Scalar(1));
    return g;
}

MultiPoly mp_squarefree(const MultiPoly& p_in) {
    if (p_in.is_zero()) return p_in;
    MultiPoly p = p_in;
    Exps mono = p.strip_monomial();
    for (int v = 0; v < 4; ++v) {
        if (p.degree(v) <= 0) continue;
        MultiPoly d = p.derivative(v);
        MultiPoly g = mp_gcd(p, d);
        if (!g.is_constant()) p = mp_div_exact(p, g);
    }
    for (int v = 0; v < 4; ++v)
        if (mono[size_t(v)] > 0) p = p * MultiPoly::variable(v, 1);
    return mp_normalize(p);
}

std::pair<MultiPoly, MultiPoly> squarefree_and_gcd(const MultiPoly& p, const MultiPoly& q,
                                                   int var) {
    MultiPoly g = mp_gcd(p, q);
    MultiPoly sf = p;
    if (!sf.is_zero()) {
        Exps mono = sf.strip_monomial();
        MultiPoly d = sf.derivative(var);
        if (!d.is_zero()) {
            MultiPoly h = mp_gcd(sf, d);
            if (!h.is_constant()) sf = mp_div_exact(sf, h);
        }
        for (int v = 0; v < 4; ++v)
            if (mono[size_t(v)] > 0) sf = sf * MultiPoly::variable(v, 1);
        sf = mp_normalize(sf);
    }
    return {g, sf};
}

// ---------------------------------------------------------------------------
// resultant via Bareiss on the Sylvester matrix

static MultiPoly bareiss_det(std::vector<std::vector<MultiPoly>>& m) {
    size_t n = m.size();
    if (n == 0) return MultiPoly(Scalar(1));
    MultiPoly prev(Scalar(1));
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            size_t swap_row = k + 1;
            while (swap_row < n && m[swap_row][k].is_zero()) ++swap_row;
            if (swap_row == n) return MultiPoly();  // zero column: determinant 0
            std::swap(m[k], m[swap_row]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j) {
                MultiPoly num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                m[i][j] = mp_div_exact(num, prev);
            }
            m[i][k] = MultiPoly();
        }
        prev = m[k][k];
    }
    MultiPoly det = m[n - 1][n - 1];
    return sign < 0 ? -det : det;
}

MultiPoly resultant_any(const MultiPoly& p, const MultiPoly& q, int var) {
    int m = p.degree(var), n = q.degree(var);
    if (m < 0 || n < 0) return MultiPoly();  // resultant with the zero polynomial
    if (m == 0 && n == 0) return MultiPoly(Scalar(1));
    if (m == 0) return p.pow(n);
    if (n == 0) return q.pow(m);
    auto pc = p.coeffs_in(var), qc = q.coeffs_in(var);
    size_t N = size_t(m + n);
    std::vector<std::vector<MultiPoly>> M(N, std::vector<MultiPoly>(N));
    for (int r = 0; r < n; ++r)
        for (int j = 0; j <= m; ++j) M[size_t(r)][size_t(r + j)] = pc[size_t(m - j)];
    for (int r = 0; r < m; ++r)
        for (int j = 0; j <= n; ++j) M[size_t(n + r)][size_t(r + j)] = qc[size_t(n - j)];
    return bareiss_det(M);
}

MultiPoly resultant(const MultiPoly& p, const MultiPoly& q, int var) {
    if (p.degree(var) <= 0 || q.degree(var) <= 0)
        fail(ErrorKind::InvalidElimination, "algebra",
             std::string("resultant arguments must have positive degree in ") + var_name(var),
             "eliminate a variable both polynomials involve");
    return resultant_any(p, q, var);
}

}  // namespace carrousel
