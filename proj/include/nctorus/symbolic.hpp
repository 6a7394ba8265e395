#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "nctorus/rational.hpp"

namespace nctorus {

// Indeterminate t_{ij}, 1 <= i < j, standing for the (i,j) entry of a
// generic skew-symmetric matrix.
struct SymVar {
    int i = 0;
    int j = 0;
    auto operator<=>(const SymVar&) const = default;
};

// Product of indeterminate powers, kept sorted by variable with exponents
// >= 1. The empty monomial is the constant 1.
struct Monomial {
    std::vector<std::pair<SymVar, int>> factors;

    int total_degree() const {
        int d = 0;
        for (const auto& [v, e] : factors) d += e;
        return d;
    }

    bool operator==(const Monomial&) const = default;

    std::string label() const {
        if (factors.empty()) return "1";
        std::string s;
        for (const auto& [v, e] : factors) {
            if (!s.empty()) s += "*";
            s += "t" + std::to_string(v.i) + std::to_string(v.j);
            if (e > 1) s += "^" + std::to_string(e);
        }
        return s;
    }
};

// Graded lexicographic order: total degree first, ties broken along the
// (i,j)-sorted variable sequence with the earlier variable winning, so that
// t12 < t13 < ... < t34 and t12*t34 < t13*t24.
struct MonomialOrder {
    bool operator()(const Monomial& a, const Monomial& b) const {
        const int da = a.total_degree(), db = b.total_degree();
        if (da != db) return da < db;
        std::size_t ia = 0, ib = 0;
        while (ia < a.factors.size() && ib < b.factors.size()) {
            const auto& [va, ea] = a.factors[ia];
            const auto& [vb, eb] = b.factors[ib];
            if (va != vb) return va < vb; // owning the earlier variable ranks first
            if (ea != eb) return ea > eb;
            ++ia;
            ++ib;
        }
        return false; // equal degree and identical factor lists
    }
};

// Multivariate polynomial over Q in the t_{ij}.
class SymbolicPoly {
public:
    SymbolicPoly() = default;

    explicit SymbolicPoly(const Rat& c) {
        if (c != 0) terms_[Monomial{}] = c;
    }

    static SymbolicPoly variable(int i, int j) {
        SymbolicPoly p;
        p.terms_[Monomial{{{SymVar{i, j}, 1}}}] = 1;
        return p;
    }

    const std::map<Monomial, Rat, MonomialOrder>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.factors.empty());
    }

    Rat constant_value() const {
        if (terms_.empty()) return 0;
        return terms_.begin()->second;
    }

    SymbolicPoly operator+(const SymbolicPoly& o) const {
        SymbolicPoly r = *this;
        for (const auto& [m, c] : o.terms_) r.add_term(m, c);
        return r;
    }

    SymbolicPoly operator-(const SymbolicPoly& o) const {
        SymbolicPoly r = *this;
        for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
        return r;
    }

    SymbolicPoly operator-() const {
        SymbolicPoly r;
        for (const auto& [m, c] : terms_) r.terms_[m] = -c;
        return r;
    }

    SymbolicPoly operator*(const SymbolicPoly& o) const {
        SymbolicPoly r;
        for (const auto& [ma, ca] : terms_)
            for (const auto& [mb, cb] : o.terms_) r.add_term(mul_monomial(ma, mb), ca * cb);
        return r;
    }

    bool operator==(const SymbolicPoly& o) const { return terms_ == o.terms_; }

private:
    void add_term(const Monomial& m, const Rat& c) {
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            if (c != 0) terms_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    static Monomial mul_monomial(const Monomial& a, const Monomial& b) {
        Monomial r;
        std::size_t ia = 0, ib = 0;
        while (ia < a.factors.size() || ib < b.factors.size()) {
            if (ib == b.factors.size() ||
                (ia < a.factors.size() && a.factors[ia].first < b.factors[ib].first)) {
                r.factors.push_back(a.factors[ia++]);
            } else if (ia == a.factors.size() || b.factors[ib].first < a.factors[ia].first) {
                r.factors.push_back(b.factors[ib++]);
            } else {
                r.factors.emplace_back(a.factors[ia].first,
                                       a.factors[ia].second + b.factors[ib].second);
                ++ia;
                ++ib;
            }
        }
        return r;
    }

    std::map<Monomial, Rat, MonomialOrder> terms_;
};

} // namespace nctorus
