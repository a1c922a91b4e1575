#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace carrousel {

using Rat = mpq_class;
using Int = mpz_class;

// Module-tagged failure kinds. Every error a pipeline stage can raise maps to
// one of these; the CLI translates kinds to exit codes.
enum class ErrorKind {
    MalformedExpression,
    UnknownVariable,
    InvalidElimination,
    IsolationFailure,
    TruncationTooShort,
    ExpansionBug,
    InconsistentBranchSet,
    StaleLadder,
    HypothesisViolation,
    NonWeierstrass,
    ClusteringError,
    NeedsHigherTruncation,
    InvalidTrunk,
    ProbeInconclusive,
    InternalError,
};

struct Error : std::runtime_error {
    ErrorKind kind;
    std::string module_name;
    std::string hint;
    Error(ErrorKind k, std::string mod, const std::string& what, std::string h = "")
        : std::runtime_error(what), kind(k), module_name(std::move(mod)), hint(std::move(h)) {}
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& mod, const std::string& what,
                              const std::string& hint = "") {
    throw Error(k, mod, what, hint);
}

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::MalformedExpression: return "malformed-expression";
        case ErrorKind::UnknownVariable: return "unknown-variable";
        case ErrorKind::InvalidElimination: return "invalid-elimination";
        case ErrorKind::IsolationFailure: return "isolation-failure";
        case ErrorKind::TruncationTooShort: return "truncation-too-short";
        case ErrorKind::ExpansionBug: return "expansion-bug";
        case ErrorKind::InconsistentBranchSet: return "inconsistent-branch-set";
        case ErrorKind::StaleLadder: return "stale-ladder";
        case ErrorKind::HypothesisViolation: return "hypothesis-violation";
        case ErrorKind::NonWeierstrass: return "non-weierstrass";
        case ErrorKind::ClusteringError: return "clustering-error";
        case ErrorKind::NeedsHigherTruncation: return "needs-higher-truncation";
        case ErrorKind::InvalidTrunk: return "invalid-trunk";
        case ErrorKind::ProbeInconclusive: return "probe-inconclusive";
        case ErrorKind::InternalError: return "internal-error";
    }
    return "internal-error";
}

inline Rat rat(long n, long d = 1) { return Rat(n, d); }

inline Int num(const Rat& r) { return r.get_num(); }
inline Int den(const Rat& r) { return r.get_den(); }

inline Int ilcm(const Int& a, const Int& b) {
    Int g, l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

inline Int igcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline long to_long(const Int& v) {
    if (!v.fits_slong_p()) fail(ErrorKind::InternalError, "common", "integer out of range");
    return v.get_si();
}

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

// Farey mediant of two reduced fractions; mpq_class canonicalizes on construction.
inline Rat mediant(const Rat& a, const Rat& b) {
    Rat m(num(a) + num(b), den(a) + den(b));
    m.canonicalize();
    return m;
}

inline Rat rat_min(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline Rat rat_max(const Rat& a, const Rat& b) { return a > b ? a : b; }

// Largest rational p/q with q <= qmax close to v (continued-fraction convergents).
Rat snap_to_rational(double v, long max_den, double* err = nullptr);

std::string rat_str(const Rat& r);

}  // namespace carrousel
