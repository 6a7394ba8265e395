#pragma once

#include <utility>
#include <vector>

#include "nctorus/rational.hpp"

namespace nctorus {

// Dense univariate polynomial over Q, coefficient i belongs to x^i.
// The zero polynomial is the empty vector; nonzero polynomials keep a
// nonzero leading coefficient.
using UniPoly = std::vector<Rat>;

inline UniPoly trim(UniPoly p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
}

inline bool is_zero(const UniPoly& p) { return p.empty(); }

inline int degree(const UniPoly& p) { return static_cast<int>(p.size()) - 1; }

inline Rat eval_poly(const UniPoly& p, const Rat& x) {
    Rat acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

inline UniPoly derivative(const UniPoly& p) {
    UniPoly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(Rat(static_cast<long>(i)) * p[i]);
    return trim(std::move(d));
}

inline UniPoly add_poly(const UniPoly& a, const UniPoly& b) {
    UniPoly r(std::max(a.size(), b.size()), Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return trim(std::move(r));
}

inline UniPoly scale_poly(const UniPoly& a, const Rat& c) {
    if (c == 0) return {};
    UniPoly r = a;
    for (auto& x : r) x *= c;
    return r;
}

inline UniPoly sub_poly(const UniPoly& a, const UniPoly& b) {
    return add_poly(a, scale_poly(b, Rat(-1)));
}

inline UniPoly mul_poly(const UniPoly& a, const UniPoly& b) {
    if (is_zero(a) || is_zero(b)) return {};
    UniPoly r(a.size() + b.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return trim(std::move(r));
}

// Euclidean division: a = q*b + r with deg r < deg b. Requires b != 0.
inline std::pair<UniPoly, UniPoly> divmod_poly(const UniPoly& a, const UniPoly& b) {
    UniPoly r = a;
    UniPoly q(a.size() > b.size() ? a.size() - b.size() + 1 : 1, Rat(0));
    const Rat lead = b.back();
    while (!is_zero(r) && r.size() >= b.size()) {
        const std::size_t shift = r.size() - b.size();
        const Rat c = r.back() / lead;
        q[shift] = c;
        for (std::size_t i = 0; i < b.size(); ++i) r[shift + i] -= c * b[i];
        r = trim(std::move(r));
    }
    return {trim(std::move(q)), std::move(r)};
}

inline UniPoly make_monic(UniPoly p) {
    if (is_zero(p)) return p;
    const Rat lead = p.back();
    for (auto& c : p) c /= lead;
    return p;
}

inline UniPoly gcd_poly(UniPoly a, UniPoly b) {
    while (!is_zero(b)) {
        auto [q, r] = divmod_poly(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(std::move(a));
}

// Extended Euclid: returns (g, u, v) monic g with u*a + v*b = g.
inline std::tuple<UniPoly, UniPoly, UniPoly> extended_gcd_poly(UniPoly a, UniPoly b) {
    UniPoly u0{Rat(1)}, v0{}, u1{}, v1{Rat(1)};
    while (!is_zero(b)) {
        auto [q, r] = divmod_poly(a, b);
        UniPoly u2 = sub_poly(u0, mul_poly(q, u1));
        UniPoly v2 = sub_poly(v0, mul_poly(q, v1));
        a = std::move(b);
        b = std::move(r);
        u0 = std::move(u1);
        v0 = std::move(v1);
        u1 = std::move(u2);
        v1 = std::move(v2);
    }
    if (!is_zero(a)) {
        const Rat lead = a.back();
        a = make_monic(std::move(a));
        u0 = scale_poly(u0, 1 / lead);
        v0 = scale_poly(v0, 1 / lead);
    }
    return {std::move(a), std::move(u0), std::move(v0)};
}

// Number of distinct real roots of a square-free p in the open interval
// (lo, hi), by Sturm's theorem.
inline int sturm_root_count(const UniPoly& p, const Rat& lo, const Rat& hi) {
    std::vector<UniPoly> chain{p, derivative(p)};
    while (!is_zero(chain.back())) {
        const auto& a = chain[chain.size() - 2];
        const auto& b = chain.back();
        auto [q, r] = divmod_poly(a, b);
        chain.push_back(scale_poly(r, Rat(-1)));
    }
    chain.pop_back();
    auto variations = [&](const Rat& x) {
        int count = 0, prev = 0;
        for (const auto& f : chain) {
            const int s = sign_of(eval_poly(f, x));
            if (s != 0) {
                if (prev != 0 && s != prev) ++count;
                prev = s;
            }
        }
        return count;
    };
    return variations(lo) - variations(hi);
}

// Interval Horner: bounds of p over [lo, hi].
inline std::pair<Rat, Rat> eval_poly_interval(const UniPoly& p, const Rat& lo, const Rat& hi) {
    Rat alo = 0, ahi = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) {
        // [alo, ahi] * [lo, hi]
        const Rat c[4] = {alo * lo, alo * hi, ahi * lo, ahi * hi};
        Rat mn = c[0], mx = c[0];
        for (int i = 1; i < 4; ++i) {
            if (c[i] < mn) mn = c[i];
            if (c[i] > mx) mx = c[i];
        }
        alo = mn + *it;
        ahi = mx + *it;
    }
    return {alo, ahi};
}

} // namespace nctorus
