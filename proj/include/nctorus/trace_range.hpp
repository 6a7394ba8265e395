#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nctorus/errors.hpp"
#include "nctorus/group_action.hpp"
#include "nctorus/matrix.hpp"
#include "nctorus/skew_matrix.hpp"
#include "nctorus/so_nn.hpp"

namespace nctorus {

// Row Hermite normal form: echelon rows, positive pivots, entries above each
// pivot reduced into [0, pivot). Zero rows are dropped. The result is the
// canonical basis of the row lattice.
inline IntMatrix hermite_normal_form(IntMatrix m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        // clear the column below `row` by gcd row operations
        while (true) {
            std::size_t best = rows;
            for (std::size_t i = row; i < rows; ++i) {
                if (m(i, col) == 0) continue;
                if (best == rows || cmp(abs(m(i, col)), abs(m(best, col))) < 0) best = i;
            }
            if (best == rows) break; // column is zero from `row` down
            if (best != row)
                for (std::size_t j = 0; j < cols; ++j) std::swap(m(row, j), m(best, j));
            bool cleared = true;
            for (std::size_t i = row + 1; i < rows; ++i) {
                if (m(i, col) == 0) continue;
                Int q;
                mpz_fdiv_q(q.get_mpz_t(), m(i, col).get_mpz_t(), m(row, col).get_mpz_t());
                for (std::size_t j = 0; j < cols; ++j) m(i, j) -= q * m(row, j);
                if (m(i, col) != 0) cleared = false;
            }
            if (cleared) break;
        }
        if (m(row, col) == 0) continue;
        if (m(row, col) < 0)
            for (std::size_t j = 0; j < cols; ++j) m(row, j) = -m(row, j);
        for (std::size_t i = 0; i < row; ++i) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), m(i, col).get_mpz_t(), m(row, col).get_mpz_t());
            if (q != 0)
                for (std::size_t j = 0; j < cols; ++j) m(i, j) -= q * m(row, j);
        }
        ++row;
    }
    IntMatrix out(row, cols);
    for (std::size_t i = 0; i < row; ++i)
        for (std::size_t j = 0; j < cols; ++j) out(i, j) = m(i, j);
    return out;
}

// Finitely generated Z-submodule of the scalar space, held as denominator D
// and an HNF integer lattice over the canonical Q-basis labels. Two equal
// submodules produce bit-identical representations.
class ZModuleRange {
public:
    const ScalarContext& context() const { return ctx_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<Scalar>& basis_scalars() const { return basis_scalars_; }
    const Int& denominator() const { return den_; }
    const IntMatrix& lattice() const { return lattice_; }
    std::size_t rank() const { return lattice_.rows(); }

    // The scalar represented by a lattice row.
    Scalar row_scalar(std::size_t i) const {
        Scalar acc = Scalar::zero(ctx_);
        for (std::size_t j = 0; j < labels_.size(); ++j) {
            if (lattice_(i, j) == 0) continue;
            acc = acc + Scalar::from_rational_in(ctx_, Rat(lattice_(i, j))) * basis_scalars_[j];
        }
        return acc * Scalar::from_rational_in(ctx_, Rat(1, den_));
    }

    std::vector<Scalar> generators() const {
        std::vector<Scalar> g;
        for (std::size_t i = 0; i < rank(); ++i) g.push_back(row_scalar(i));
        return g;
    }

    bool operator==(const ZModuleRange& o) const {
        return ctx_ == o.ctx_ && labels_ == o.labels_ && den_ == o.den_ && lattice_ == o.lattice_;
    }

    friend ZModuleRange span_impl(const std::vector<Scalar>&, const ScalarContext&,
                                  const std::vector<std::string>*, const std::vector<Scalar>*);

private:
    ScalarContext ctx_;
    std::vector<std::string> labels_;
    std::vector<Scalar> basis_scalars_;
    Int den_ = 1;
    IntMatrix lattice_;
};

namespace detail {

// Canonical label set and basis scalars of a generator list.
inline void basis_of(const std::vector<Scalar>& gens, const ScalarContext& ctx,
                     std::vector<std::string>& labels, std::vector<Scalar>& basis) {
    switch (ctx.mode) {
        case ScalarMode::Rational:
            labels = {"1"};
            basis = {Scalar::one(ctx)};
            return;
        case ScalarMode::Field: {
            const int d = ctx.field->degree();
            const Scalar alpha = Scalar::field_generator(ctx);
            Scalar power = Scalar::one(ctx);
            for (int i = 0; i < d; ++i) {
                labels.push_back(i == 0 ? "1" : (i == 1 ? "a" : "a^" + std::to_string(i)));
                basis.push_back(power);
                power = power * alpha;
            }
            return;
        }
        case ScalarMode::Symbolic: {
            std::map<Monomial, bool, MonomialOrder> monomials;
            monomials[Monomial{}] = true; // keep 1 in the label universe
            for (const auto& g : gens)
                for (const auto& [m, c] : g.as_symbolic().terms()) monomials[m] = true;
            for (const auto& [m, used] : monomials) {
                labels.push_back(m.label());
                SymbolicPoly p(Rat(1));
                for (const auto& [v, e] : m.factors)
                    for (int k = 0; k < e; ++k) p = p * SymbolicPoly::variable(v.i, v.j);
                basis.push_back(Scalar(p));
            }
            return;
        }
    }
}

inline std::vector<Rat> coords_on(const Scalar& g, const std::vector<std::string>& labels,
                                  const ScalarContext& ctx) {
    std::vector<Rat> c(labels.size(), Rat(0));
    switch (ctx.mode) {
        case ScalarMode::Rational:
            c[0] = g.as_rational();
            return c;
        case ScalarMode::Field: {
            const auto& coeffs = g.as_field().coeffs;
            for (std::size_t i = 0; i < coeffs.size(); ++i) c[i] = coeffs[i];
            return c;
        }
        case ScalarMode::Symbolic: {
            for (const auto& [m, coeff] : g.as_symbolic().terms()) {
                const auto it = std::find(labels.begin(), labels.end(), m.label());
                if (it == labels.end())
                    throw LabelMismatch("generator monomial " + m.label() +
                                        " outside the label set");
                c[static_cast<std::size_t>(it - labels.begin())] = coeff;
            }
            return c;
        }
    }
    throw Error("INTERNAL", "bad mode");
}

} // namespace detail

// Canonical HNF span of a generator list. The optional label universe lets
// callers place several ranges over one shared basis.
inline ZModuleRange span_impl(const std::vector<Scalar>& generators, const ScalarContext& ctx,
                              const std::vector<std::string>* fixed_labels,
                              const std::vector<Scalar>* fixed_basis) {
    for (const auto& g : generators)
        if (!(g.context() == ctx)) throw ModeMismatch("generators must share one mode");
    ZModuleRange r;
    r.ctx_ = ctx;
    if (fixed_labels) {
        r.labels_ = *fixed_labels;
        r.basis_scalars_ = *fixed_basis;
    } else {
        detail::basis_of(generators, ctx, r.labels_, r.basis_scalars_);
    }
    std::vector<std::vector<Rat>> coords;
    for (const auto& g : generators) {
        if (g.is_zero()) continue;
        coords.push_back(detail::coords_on(g, r.labels_, ctx));
    }
    Int den = 1;
    for (const auto& row : coords)
        for (const auto& c : row) den = lcm_int(den, c.get_den());
    IntMatrix m(coords.size(), r.labels_.size());
    for (std::size_t i = 0; i < coords.size(); ++i)
        for (std::size_t j = 0; j < r.labels_.size(); ++j) m(i, j) = Int(coords[i][j] * den);
    IntMatrix hnf = hermite_normal_form(std::move(m));
    // minimal denominator: cancel the common content against D
    Int content = den;
    for (std::size_t i = 0; i < hnf.rows(); ++i)
        for (std::size_t j = 0; j < hnf.cols(); ++j) content = gcd_int(content, hnf(i, j));
    if (hnf.rows() == 0) {
        den = 1;
    } else if (content > 1) {
        for (std::size_t i = 0; i < hnf.rows(); ++i)
            for (std::size_t j = 0; j < hnf.cols(); ++j) hnf(i, j) /= content;
        den /= content;
    }
    r.den_ = den;
    r.lattice_ = std::move(hnf);
    return r;
}

inline ZModuleRange span(const std::vector<Scalar>& generators) {
    if (generators.empty()) throw DimensionMismatch("span needs at least one generator");
    return span_impl(generators, generators.front().context(), nullptr, nullptr);
}

inline bool range_equal(const ZModuleRange& r1, const ZModuleRange& r2) {
    if (!(r1.context() == r2.context())) throw ModeMismatch("ranges in different modes");
    if (r1.labels() != r2.labels()) throw LabelMismatch("ranges over different bases");
    if (r1.rank() != r2.rank()) return false;
    const Int l = lcm_int(r1.denominator(), r2.denominator());
    const Int f1 = l / r1.denominator(), f2 = l / r2.denominator();
    for (std::size_t i = 0; i < r1.rank(); ++i)
        for (std::size_t j = 0; j < r1.labels().size(); ++j)
            if (r1.lattice()(i, j) * f1 != r2.lattice()(i, j) * f2) return false;
    return true;
}

// lambda * R as a Z-module, recanonicalized. Rational lambda works in every
// mode; irrational lambda needs field mode.
inline ZModuleRange scale_range(const ZModuleRange& r, const Scalar& lambda) {
    if (lambda.is_zero()) throw ZeroScale("scaling by zero");
    const auto& ctx = r.context();
    Scalar factor = Scalar::zero(ctx);
    if (lambda.is_rational_value()) {
        factor = Scalar::from_rational_in(ctx, lambda.rational_value());
    } else {
        if (ctx.mode == ScalarMode::Symbolic)
            throw UnsupportedInSymbolicMode("irrational scaling of a symbolic range");
        if (!(lambda.context() == ctx)) throw ModeMismatch("lambda mode differs from range mode");
        factor = lambda;
    }
    std::vector<Scalar> gens;
    for (std::size_t i = 0; i < r.rank(); ++i) gens.push_back(r.row_scalar(i) * factor);
    if (gens.empty()) return r;
    return span_impl(gens, ctx, nullptr, nullptr);
}

// Tr(K0) of the torus: the span of 1 and every pfaffian minor of theta.
inline ZModuleRange torus_range(const SkewMatrix& theta) {
    std::vector<Scalar> gens{Scalar::one(theta.context())};
    for (const auto& [I, pf] : all_pfaffian_minors(theta)) gens.push_back(pf);
    return span(gens);
}

struct OrbifoldRangeReport {
    ZModuleRange lower;
    ZModuleRange upper;
    bool decided = false;
    std::vector<IndexTuple> admitted_minors;
    long order = 1;
};

// Sandwich for the orbifold trace range: the lower bound collects 1/N and
// the admitted minors over N, the upper bound is (1/N) times the torus
// range. decided means the two coincide, which pins the range exactly.
inline OrbifoldRangeReport orbifold_range_bounds(const SkewMatrix& theta,
                                                 const CyclicAction& act) {
    if (!(act.theta == theta)) throw InvariantViolation("action built over a different theta");
    const auto& ctx = theta.context();
    const long N = act.order;
    const Scalar inv_n = Scalar::from_rational_in(ctx, Rat(1, N));

    const auto minors = all_pfaffian_minors(theta);
    std::vector<Scalar> upper_gens{inv_n};
    std::vector<Scalar> lower_gens{inv_n};
    OrbifoldRangeReport report;
    for (const auto& [I, pf] : minors) {
        upper_gens.push_back(pf * inv_n);
        if (extension_condition(act.W, I)) {
            report.admitted_minors.push_back(I);
            lower_gens.push_back(pf * inv_n);
        }
    }
    // shared label universe so the two spans are directly comparable
    std::vector<std::string> labels;
    std::vector<Scalar> basis;
    detail::basis_of(upper_gens, ctx, labels, basis);
    report.upper = span_impl(upper_gens, ctx, &labels, &basis);
    report.lower = span_impl(lower_gens, ctx, &labels, &basis);
    report.decided = range_equal(report.lower, report.upper);
    report.order = N;
    return report;
}

struct MoritaSearchResult {
    enum class Status { Found, NotFound, Unknown };
    Status status = Status::Unknown;
    std::optional<Scalar> lambda;
};

// Bounded search for lambda > 0 with R1 = lambda * R2. Any lambda with
// lambda*b2_1 in R1 has the form (sum c_i b1_i)/b2_1; candidates are
// enumerated by ascending L1 norm of c and verified exactly, so a returned
// lambda is never a false positive. Exhaustion is reported as Unknown, never
// as NotFound; NotFound is reserved for the rank obstruction.
inline MoritaSearchResult morita_lambda_search(const ZModuleRange& r1, const ZModuleRange& r2,
                                               long coeff_bound = 10) {
    if (r1.context().mode == ScalarMode::Symbolic || r2.context().mode == ScalarMode::Symbolic)
        throw UnsupportedInSymbolicMode("lambda search needs a numeric mode");
    if (!(r1.context() == r2.context()))
        throw ModeMismatch("ranges live in different scalar modes or fields");
    if (r1.rank() != r2.rank()) return {MoritaSearchResult::Status::NotFound, std::nullopt};
    if (r1.rank() == 0)
        return {MoritaSearchResult::Status::Found, Scalar::one(r1.context())};

    const std::size_t r = r1.rank();
    std::vector<Scalar> b1;
    for (std::size_t i = 0; i < r; ++i) b1.push_back(r1.row_scalar(i));
    const Scalar b2_inv = r2.row_scalar(0).invert();

    std::vector<long> c(r, 0);
    // enumerate all c with L1 norm m, lexicographically, for m = 1, 2, ...
    auto try_candidate = [&](const std::vector<long>& coeffs) -> std::optional<Scalar> {
        Scalar num = Scalar::zero(r1.context());
        for (std::size_t i = 0; i < r; ++i) {
            if (coeffs[i] == 0) continue;
            num = num + Scalar::from_rational_in(r1.context(), Rat(coeffs[i])) * b1[i];
        }
        if (num.is_zero()) return std::nullopt;
        const Scalar lambda = num * b2_inv;
        if (lambda.sign() <= 0) return std::nullopt;
        if (range_equal(r1, scale_range(r2, lambda))) return lambda;
        return std::nullopt;
    };

    std::vector<std::vector<long>> shell;
    auto enumerate = [&](auto&& self, std::size_t pos, long remaining) -> void {
        if (pos == r) {
            if (remaining == 0) shell.push_back(c);
            return;
        }
        for (long v = -std::min(coeff_bound, remaining); v <= std::min(coeff_bound, remaining);
             ++v) {
            c[pos] = v;
            self(self, pos + 1, remaining - std::abs(v));
        }
        c[pos] = 0;
    };
    for (long m = 1; m <= coeff_bound * static_cast<long>(r); ++m) {
        shell.clear();
        enumerate(enumerate, 0, m);
        for (const auto& coeffs : shell)
            if (auto lambda = try_candidate(coeffs))
                return {MoritaSearchResult::Status::Found, std::move(lambda)};
    }
    return {MoritaSearchResult::Status::Unknown, std::nullopt};
}

// ---- continued fractions of quadratic irrationals --------------------

enum class OrbitAnswer { Equal, Different, Unknown };

namespace detail {

inline Int floor_scalar(const Scalar& x) {
    if (x.mode() == ScalarMode::Rational) return floor_rat(x.as_rational());
    const auto& f = x.as_field();
    Rat width = f.spec->hi() - f.spec->lo();
    Rat vlo, vhi;
    UniPoly p = trim(UniPoly(f.coeffs.begin(), f.coeffs.end()));
    for (int step = 0; step < 512; ++step) {
        auto [rlo, rhi] = f.spec->refine_root(width);
        std::tie(vlo, vhi) = eval_poly_interval(p, rlo, rhi);
        if (vhi - vlo < Rat(1, 4)) break;
        width /= 2;
    }
    Int m = floor_rat(vlo);
    const auto above = [&](const Int& k) {
        return (x - Scalar::from_rational_in(x.context(), Rat(k))).sign() >= 0;
    };
    while (!above(m)) m -= 1;
    while (above(m + 1)) m += 1;
    return m;
}

inline std::string cf_key(const Scalar& x) {
    std::string k;
    for (const auto& c : x.as_field().coeffs) k += format_rational(c) + "|";
    return k;
}

// Partial quotients of the periodic cycle of a quadratic irrational, or
// nullopt when the cap is hit.
inline std::optional<std::vector<Int>> periodic_cycle(Scalar x, int cap) {
    std::map<std::string, int> seen;
    std::vector<Int> partials;
    for (int step = 0; step < cap; ++step) {
        const std::string key = cf_key(x);
        const auto it = seen.find(key);
        if (it != seen.end())
            return std::vector<Int>(partials.begin() + it->second, partials.end());
        seen.emplace(key, step);
        const Int a = floor_scalar(x);
        partials.push_back(a);
        const Scalar frac = x - Scalar::from_rational_in(x.context(), Rat(a));
        x = frac.invert();
    }
    return std::nullopt;
}

inline bool cyclic_equal(const std::vector<Int>& a, const std::vector<Int>& b) {
    if (a.size() != b.size()) return false;
    if (a.empty()) return true;
    std::vector<Int> doubled = a;
    doubled.insert(doubled.end(), a.begin(), a.end());
    return std::search(doubled.begin(), doubled.end(), b.begin(), b.end()) != doubled.end();
}

} // namespace detail

// GL(2,Z)-orbit equality of real quadratic irrationals, via the classical
// criterion: two quadratic irrationals are equivalent iff their continued
// fraction expansions share the same periodic cycle up to rotation.
// Rationals form a single orbit and always compare equal.
inline OrbitAnswer gl2_orbit_equal(const Scalar& theta1, const Scalar& theta2,
                                   int iteration_cap = 1000) {
    const auto kind = [](const Scalar& x) -> int {
        if (x.mode() == ScalarMode::Symbolic)
            throw MixedKinds("orbit test needs numeric scalars");
        if (x.is_rational_value()) return 0;
        if (x.as_field().spec->degree() != 2)
            throw MixedKinds("orbit test supports quadratic irrationals only");
        return 1;
    };
    const int k1 = kind(theta1), k2 = kind(theta2);
    if (k1 != k2) throw MixedKinds("one input is rational, the other irrational");
    if (k1 == 0) return OrbitAnswer::Equal; // GL(2,Z) is transitive on Q
    if (!same_spec(theta1.as_field().spec, theta2.as_field().spec))
        throw MixedKinds("inputs lie in different quadratic fields");
    const auto c1 = detail::periodic_cycle(theta1, iteration_cap);
    const auto c2 = detail::periodic_cycle(theta2, iteration_cap);
    if (!c1 || !c2) return OrbitAnswer::Unknown;
    return detail::cyclic_equal(*c1, *c2) ? OrbitAnswer::Equal : OrbitAnswer::Different;
}

} // namespace nctorus
