#pragma once

#include <gmpxx.h>

#include <string>

#include "nctorus/errors.hpp"

namespace nctorus {

using Int = mpz_class;
using Rat = mpq_class;

inline Rat parse_rational(const std::string& text) {
    try {
        Rat r(text);
        if (r.get_den() == 0) throw ParseError("zero denominator in \"" + text + "\"");
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw ParseError("not a rational: \"" + text + "\"");
    }
}

inline std::string format_rational(const Rat& r) { return r.get_str(); }

inline int sign_of(const Rat& r) { return sgn(r); }

// Largest integer <= r.
inline Int floor_rat(const Rat& r) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    return q;
}

inline Int gcd_int(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int lcm_int(const Int& a, const Int& b) {
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

} // namespace nctorus
