#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "nctorus/errors.hpp"
#include "nctorus/matrix.hpp"
#include "nctorus/scalar.hpp"

namespace nctorus {

// Strictly increasing 1-based indices of even cardinality, selecting the
// rows and columns of a pfaffian minor.
struct IndexTuple {
    std::vector<int> indices;

    IndexTuple() = default;
    explicit IndexTuple(std::vector<int> idx) : indices(std::move(idx)) {
        if (indices.size() % 2 != 0) throw BadIndexTuple("index tuple must have even size");
        for (std::size_t k = 0; k < indices.size(); ++k) {
            if (indices[k] < 1) throw BadIndexTuple("indices are 1-based");
            if (k > 0 && indices[k] <= indices[k - 1])
                throw BadIndexTuple("indices must be strictly increasing");
        }
    }

    std::size_t size() const { return indices.size(); }

    std::string label() const {
        std::string s;
        for (std::size_t k = 0; k < indices.size(); ++k)
            s += (k ? "," : "") + std::to_string(indices[k]);
        return s;
    }

    // Order by size, then lexicographically; the canonical enumeration order.
    bool operator<(const IndexTuple& o) const {
        if (indices.size() != o.indices.size()) return indices.size() < o.indices.size();
        return indices < o.indices;
    }
    bool operator==(const IndexTuple&) const = default;
};

// n x n skew-symmetric matrix over Scalar.
class SkewMatrix {
public:
    SkewMatrix(std::size_t n, ScalarContext ctx)
        : n_(n), ctx_(std::move(ctx)), entries_(n, n, Scalar::zero(ctx_)) {}

    static SkewMatrix from_upper(std::size_t n, const ScalarContext& ctx,
                                 const std::map<std::pair<int, int>, Scalar>& upper) {
        SkewMatrix m(n, ctx);
        for (const auto& [ij, v] : upper) m.set_upper(ij.first, ij.second, v);
        return m;
    }

    // Generic skew matrix with independent indeterminate entries t_{ij}.
    static SkewMatrix generic(std::size_t n) {
        SkewMatrix m(n, ScalarContext::symbolic());
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t j = i + 1; j <= n; ++j)
                m.set_upper(static_cast<int>(i), static_cast<int>(j),
                            Scalar::symbolic_entry(static_cast<int>(i), static_cast<int>(j)));
        return m;
    }

    std::size_t n() const { return n_; }
    const ScalarContext& context() const { return ctx_; }

    const Scalar& at(std::size_t i, std::size_t j) const { return entries_(i, j); }

    // Sets entries (i,j) and (j,i) from a 1-based upper position.
    void set_upper(int i, int j, const Scalar& v) {
        if (i < 1 || j <= i || static_cast<std::size_t>(j) > n_)
            throw BadIndexTuple("needs 1 <= i < j <= n");
        if (!(v.context() == ctx_)) throw ModeMismatch("entry mode differs from matrix mode");
        entries_(i - 1, j - 1) = v;
        entries_(j - 1, i - 1) = -v;
    }

    const ScalarMatrix& as_matrix() const { return entries_; }

    SkewMatrix submatrix(const IndexTuple& I) const {
        check_tuple(I);
        SkewMatrix s(I.size(), ctx_);
        for (std::size_t a = 0; a < I.size(); ++a)
            for (std::size_t b = 0; b < I.size(); ++b)
                s.entries_(a, b) = entries_(I.indices[a] - 1, I.indices[b] - 1);
        return s;
    }

    SkewMatrix block(std::size_t r0, std::size_t count) const {
        SkewMatrix s(count, ctx_);
        for (std::size_t a = 0; a < count; ++a)
            for (std::size_t b = 0; b < count; ++b) s.entries_(a, b) = entries_(r0 + a, r0 + b);
        return s;
    }

    SkewMatrix operator+(const SkewMatrix& o) const {
        if (n_ != o.n_) throw DimensionMismatch("skew matrix sum shape");
        SkewMatrix r(n_, ctx_);
        r.entries_ = entries_ + o.entries_;
        return r;
    }

    bool operator==(const SkewMatrix& o) const {
        if (n_ != o.n_) return false;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                if (!(entries_(i, j) == o.entries_(i, j))) return false;
        return true;
    }

    void check_tuple(const IndexTuple& I) const {
        if (!I.indices.empty() && static_cast<std::size_t>(I.indices.back()) > n_)
            throw BadIndexTuple("index exceeds dimension");
    }

private:
    std::size_t n_;
    ScalarContext ctx_;
    ScalarMatrix entries_;
};

// The matrix Z with every entry above the diagonal equal to 1.
inline SkewMatrix standard_Z(std::size_t n, const ScalarContext& ctx) {
    if (n < 2) throw DimensionMismatch("Z needs n >= 2");
    SkewMatrix z(n, ctx);
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = i + 1; j <= n; ++j)
            z.set_upper(static_cast<int>(i), static_cast<int>(j), Scalar::one(ctx));
    return z;
}

namespace detail {

// Sign of the permutation (a1 b1 a2 b2 ...) listing a perfect matching.
inline int matching_sign(const std::vector<int>& flat) {
    int inversions = 0;
    for (std::size_t i = 0; i < flat.size(); ++i)
        for (std::size_t j = i + 1; j < flat.size(); ++j)
            if (flat[i] > flat[j]) ++inversions;
    return inversions % 2 == 0 ? 1 : -1;
}

inline void matchings_rec(const SkewMatrix& A, std::vector<int>& free, std::vector<int>& flat,
                          Scalar& acc) {
    if (free.empty()) {
        Scalar prod = Scalar::one(A.context());
        for (std::size_t k = 0; k + 1 < flat.size(); k += 2)
            prod = prod * A.at(flat[k], flat[k + 1]);
        if (matching_sign(flat) < 0) prod = -prod;
        acc = acc + prod;
        return;
    }
    const int a = free.front();
    for (std::size_t t = 1; t < free.size(); ++t) {
        const int b = free[t];
        std::vector<int> rest;
        rest.reserve(free.size() - 2);
        for (std::size_t s = 1; s < free.size(); ++s)
            if (s != t) rest.push_back(free[s]);
        flat.push_back(a);
        flat.push_back(b);
        matchings_rec(A, rest, flat, acc);
        flat.pop_back();
        flat.pop_back();
    }
}

} // namespace detail

// Pfaffian as the signed sum over perfect matchings,
// sum_xi (-1)^{|xi|} prod_s A(xi(2s-1), xi(2s)).
inline Scalar pfaffian_matching_sum(const SkewMatrix& A) {
    const std::size_t n = A.n();
    if (n == 0) return Scalar::one(A.context());
    if (n % 2 != 0) throw OddDimension("pfaffian of odd dimension");
    std::vector<int> free(n);
    for (std::size_t i = 0; i < n; ++i) free[i] = static_cast<int>(i);
    std::vector<int> flat;
    Scalar acc = Scalar::zero(A.context());
    detail::matchings_rec(A, free, flat, acc);
    return acc;
}

namespace detail {

inline Scalar pfaffian_masked(const SkewMatrix& A, std::uint64_t mask,
                              std::unordered_map<std::uint64_t, Scalar>& memo) {
    if (mask == 0) return Scalar::one(A.context());
    const auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    // expand along the row of the lowest index in the mask
    const int i = __builtin_ctzll(mask);
    Scalar acc = Scalar::zero(A.context());
    int sign = 1;
    for (int j = i + 1; j < static_cast<int>(A.n()); ++j) {
        if (!(mask >> j & 1)) continue;
        if (!A.at(i, j).is_zero()) {
            const std::uint64_t rest = mask & ~(1ULL << i) & ~(1ULL << j);
            Scalar term = A.at(i, j) * pfaffian_masked(A, rest, memo);
            acc = sign > 0 ? acc + term : acc - term;
        }
        sign = -sign;
    }
    memo.emplace(mask, acc);
    return acc;
}

} // namespace detail

// Pfaffian by recursive expansion along the first row, memoized over index
// subsets. Independent of the matching-sum route; the two are cross-checked
// in the test suite.
inline Scalar pfaffian_expansion(const SkewMatrix& A) {
    const std::size_t n = A.n();
    if (n == 0) return Scalar::one(A.context());
    if (n % 2 != 0) throw OddDimension("pfaffian of odd dimension");
    if (n > 63) throw DimensionMismatch("dimension too large");
    std::unordered_map<std::uint64_t, Scalar> memo;
    return detail::pfaffian_masked(A, n == 64 ? ~0ULL : (1ULL << n) - 1, memo);
}

inline Scalar pfaffian(const SkewMatrix& A) { return pfaffian_expansion(A); }

inline Scalar pfaffian_minor(const SkewMatrix& A, const IndexTuple& I) {
    return pfaffian_expansion(A.submatrix(I));
}

// All 2^{n-1} - 1 pfaffian minors, one per even-size index tuple, computed
// from a single memo table.
inline std::map<IndexTuple, Scalar> all_pfaffian_minors(const SkewMatrix& A) {
    const std::size_t n = A.n();
    if (n > 24) throw DimensionMismatch("minor enumeration capped at n = 24");
    std::unordered_map<std::uint64_t, Scalar> memo;
    std::map<IndexTuple, Scalar> out;
    for (std::uint64_t mask = 1; mask < (1ULL << n); ++mask) {
        const int pc = __builtin_popcountll(mask);
        if (pc == 0 || pc % 2 != 0) continue;
        std::vector<int> idx;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) idx.push_back(static_cast<int>(i + 1));
        out.emplace(IndexTuple(idx), detail::pfaffian_masked(A, mask, memo));
    }
    return out;
}

// Least t in [1, t_max] such that every pfaffian minor of theta + t*Z is
// strictly positive. The sign test needs a numeric mode.
inline std::optional<long> find_positive_t(const SkewMatrix& theta, long t_max) {
    if (theta.context().mode == ScalarMode::Symbolic)
        throw UnsupportedInSymbolicMode("positivity needs a numeric mode");
    const SkewMatrix z = standard_Z(theta.n(), theta.context());
    for (long t = 1; t <= t_max; ++t) {
        SkewMatrix shifted = theta;
        for (std::size_t i = 1; i <= theta.n(); ++i)
            for (std::size_t j = i + 1; j <= theta.n(); ++j) {
                const Scalar v = theta.at(i - 1, j - 1) +
                                 Scalar::from_rational_in(theta.context(), Rat(t));
                shifted.set_upper(static_cast<int>(i), static_cast<int>(j), v);
            }
        bool all_positive = true;
        for (const auto& [I, pf] : all_pfaffian_minors(shifted)) {
            if (pf.sign() <= 0) {
                all_positive = false;
                break;
            }
        }
        if (all_positive) return t;
    }
    return std::nullopt;
}

} // namespace nctorus
