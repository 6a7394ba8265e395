#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "nctorus/errors.hpp"
#include "nctorus/rational.hpp"
#include "nctorus/unipoly.hpp"

namespace nctorus {

// A real number field Q(alpha) presented by a monic minimal polynomial and
// a rational interval isolating one real root (the chosen embedding).
//
// Irreducibility is decidable cheaply only for degree <= 3 (absence of
// rational roots); higher degrees are accepted as declared and
// cross-checked at runtime: an inversion that meets a nontrivial gcd with
// the minimal polynomial raises ReducibleFieldSpec.
class NumberFieldSpec {
public:
    NumberFieldSpec(UniPoly minimal_polynomial, Rat lo, Rat hi)
        : minpoly_(trim(std::move(minimal_polynomial))), lo_(std::move(lo)), hi_(std::move(hi)) {
        validate();
    }

    const UniPoly& minpoly() const { return minpoly_; }
    int degree() const { return nctorus::degree(minpoly_); }
    const Rat& lo() const { return lo_; }
    const Rat& hi() const { return hi_; }

    bool operator==(const NumberFieldSpec& o) const {
        return minpoly_ == o.minpoly_ && lo_ == o.lo_ && hi_ == o.hi_;
    }

    // Exact sign of a0 + a1*alpha + ... : bound the value over the isolating
    // interval and bisect until the bound excludes 0. Terminates for any
    // genuinely irreducible minimal polynomial.
    int sign_of_element(const std::vector<Rat>& coeffs, int max_steps = 4096) const {
        UniPoly a = trim(UniPoly(coeffs.begin(), coeffs.end()));
        if (is_zero(a)) return 0;
        if (degree() == 1) return sign_of(eval_poly(a, -minpoly_[0]));
        Rat lo = lo_, hi = hi_;
        int slo = sign_of(eval_poly(minpoly_, lo));
        for (int step = 0; step < max_steps; ++step) {
            auto [blo, bhi] = eval_poly_interval(a, lo, hi);
            if (sign_of(blo) > 0) return 1;
            if (sign_of(bhi) < 0) return -1;
            const Rat mid = (lo + hi) / 2;
            const int smid = sign_of(eval_poly(minpoly_, mid));
            if (smid == 0)
                throw ReducibleFieldSpec("minimal polynomial has the rational root " +
                                         format_rational(mid));
            if (smid == slo) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        throw ReducibleFieldSpec(
            "sign refinement did not converge; the declared minimal polynomial "
            "is likely reducible");
    }

    // Rational interval of width <= tol enclosing alpha.
    std::pair<Rat, Rat> refine_root(const Rat& tol) const {
        Rat lo = lo_, hi = hi_;
        int slo = sign_of(eval_poly(minpoly_, lo));
        while (hi - lo > tol) {
            const Rat mid = (lo + hi) / 2;
            const int smid = sign_of(eval_poly(minpoly_, mid));
            if (smid == 0) return {mid, mid};
            if (smid == slo) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return {lo, hi};
    }

    double root_approx() const {
        auto [lo, hi] = refine_root(Rat(1, 1L << 40));
        return (lo.get_d() + hi.get_d()) / 2;
    }

private:
    void validate() const {
        if (minpoly_.size() < 2) throw BadFieldSpec("minimal polynomial must have degree >= 1");
        if (minpoly_.back() != 1) throw BadFieldSpec("minimal polynomial must be monic");
        if (lo_ >= hi_) throw BadFieldSpec("root interval is empty");
        const UniPoly g = gcd_poly(minpoly_, derivative(minpoly_));
        if (nctorus::degree(g) > 0) throw BadFieldSpec("minimal polynomial is not square-free");
        if (eval_poly(minpoly_, lo_) == 0 || eval_poly(minpoly_, hi_) == 0)
            throw BadFieldSpec("root interval endpoints must not be roots");
        if (sign_of(eval_poly(minpoly_, lo_)) == sign_of(eval_poly(minpoly_, hi_)))
            throw BadFieldSpec("minimal polynomial does not change sign on the interval");
        if (sturm_root_count(minpoly_, lo_, hi_) != 1)
            throw BadFieldSpec("root interval must isolate exactly one real root");
        if (degree() >= 2 && degree() <= 3 && has_rational_root())
            throw BadFieldSpec("minimal polynomial has a rational root, hence is reducible");
    }

    // Rational root test on the primitive integer model of the polynomial.
    bool has_rational_root() const {
        Int den = 1;
        for (const auto& c : minpoly_) den = lcm_int(den, c.get_den());
        std::vector<Int> ic;
        for (const auto& c : minpoly_) ic.push_back(Int(c * den));
        const Int c0 = abs(ic.front());
        const Int cd = abs(ic.back());
        if (c0 == 0) return true; // root 0
        for (const Int& p : small_divisors(c0))
            for (const Int& q : small_divisors(cd)) {
                for (int s : {1, -1}) {
                    const Rat cand(p * s, q);
                    Rat c = cand;
                    c.canonicalize();
                    if (eval_poly(minpoly_, c) == 0) return true;
                }
            }
        return false;
    }

    static std::vector<Int> small_divisors(const Int& n) {
        std::vector<Int> divs;
        for (Int d = 1; d * d <= n; ++d) {
            if (n % d == 0) {
                divs.push_back(d);
                divs.push_back(n / d);
            }
            if (d > 1000000) break; // desk-scale constants only
        }
        return divs;
    }

    UniPoly minpoly_;
    Rat lo_, hi_;
};

using FieldSpecPtr = std::shared_ptr<const NumberFieldSpec>;

inline bool same_spec(const FieldSpecPtr& a, const FieldSpecPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

} // namespace nctorus
