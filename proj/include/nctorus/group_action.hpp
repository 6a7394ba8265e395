#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "nctorus/errors.hpp"
#include "nctorus/matrix.hpp"
#include "nctorus/skew_matrix.hpp"

namespace nctorus {

// Exact phase exponent x, standing for e(x) = e^{2 pi i x}. Reduction mod 1
// happens only in numeric comparisons.
struct PhaseExponent {
    Scalar value;
};

inline bool check_theta_symplectic(const IntMatrix& W, const SkewMatrix& theta) {
    if (W.rows() != theta.n() || W.cols() != theta.n())
        throw DimensionMismatch("W does not match theta");
    const ScalarMatrix Ws = lift_int_matrix(W, theta.context());
    const ScalarMatrix lhs = Ws.transpose() * theta.as_matrix() * Ws;
    for (std::size_t i = 0; i < theta.n(); ++i)
        for (std::size_t j = 0; j < theta.n(); ++j)
            if (!(lhs(i, j) == theta.at(i, j))) return false;
    return true;
}

// Least N <= max_order with W^N = id; nullopt means no finite order within
// the cap.
inline std::optional<long> order_of(const IntMatrix& W, long max_order = 24) {
    const Int d = det_bareiss(W);
    if (d != 1 && d != -1) throw NotUnimodular("order needs det = +-1");
    const IntMatrix id = int_identity(W.rows());
    IntMatrix acc = W;
    for (long k = 1; k <= max_order; ++k) {
        if (acc == id) return k;
        acc = acc * W;
    }
    return std::nullopt;
}

// True iff no nonidentity power of W fixes a nonzero integer vector:
// det(W^k - id) != 0 for 0 < k < N.
inline bool free_outside_origin(const IntMatrix& W, long N) {
    const IntMatrix id = int_identity(W.rows());
    IntMatrix acc = W;
    for (long k = 1; k < N; ++k) {
        if (det_bareiss(acc - id) == 0) return false;
        acc = acc * W;
    }
    return true;
}

// A finite cyclic group of theta-symplectic matrices, presented by its
// generator. Construction verifies W^t theta W = theta, the order, and
// det W = +-1.
struct CyclicAction {
    IntMatrix W;
    SkewMatrix theta;
    long order;

    CyclicAction(IntMatrix w, SkewMatrix th, long ord)
        : W(std::move(w)), theta(std::move(th)), order(ord) {
        if (order < 1) throw InvariantViolation("order must be positive");
        if (!check_theta_symplectic(W, theta))
            throw InvariantViolation("W is not theta-symplectic");
        const auto actual = order_of(W, order);
        if (!actual || *actual != order)
            throw InvariantViolation("declared order is not the order of W");
    }

    static CyclicAction from_generator(IntMatrix w, SkewMatrix th, long max_order = 24) {
        const auto ord = order_of(w, max_order);
        if (!ord) throw InvariantViolation("generator has no finite order within the cap");
        return CyclicAction(std::move(w), std::move(th), *ord);
    }
};

// Exponent and monomial vector of alpha(U_i) =
// e(sum_{k=2..n} sum_{j<k} a_{ki} a_{ji} theta_{jk}) U_1^{a_{1i}} ... U_n^{a_{ni}},
// where a_{.i} is column i of W.
inline std::pair<PhaseExponent, std::vector<Int>> alpha_phase_exponent(const CyclicAction& act,
                                                                       int i) {
    const std::size_t n = act.theta.n();
    if (i < 1 || static_cast<std::size_t>(i) > n) throw BadIndexTuple("generator index");
    const auto& ctx = act.theta.context();
    Scalar expo = Scalar::zero(ctx);
    for (std::size_t k = 2; k <= n; ++k)
        for (std::size_t j = 1; j < k; ++j) {
            const Int c = act.W(k - 1, i - 1) * act.W(j - 1, i - 1);
            if (c != 0)
                expo = expo + Scalar::from_rational_in(ctx, Rat(c)) * act.theta.at(j - 1, k - 1);
        }
    std::vector<Int> column(n);
    for (std::size_t r = 0; r < n; ++r) column[r] = act.W(r, i - 1);
    return {PhaseExponent{expo}, column};
}

// omega_theta(x, y) = e(<-theta x, y>), the defining 2-cocycle of the torus.
inline PhaseExponent cocycle_omega(const SkewMatrix& theta, const std::vector<Int>& x,
                                   const std::vector<Int>& y) {
    const std::size_t n = theta.n();
    if (x.size() != n || y.size() != n) throw DimensionMismatch("vector length");
    const auto& ctx = theta.context();
    Scalar acc = Scalar::zero(ctx);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Int c = -x[j] * y[i];
            if (c != 0) acc = acc + Scalar::from_rational_in(ctx, Rat(c)) * theta.at(i, j);
        }
    return {acc};
}

// The halved convention e(<-theta x, y>/2) used alongside sigma_{2p}theta;
// kept as a distinct constructor because the two conventions differ by an
// honest factor of two.
inline PhaseExponent cocycle_omega_half(const SkewMatrix& theta, const std::vector<Int>& x,
                                        const std::vector<Int>& y) {
    Scalar full = cocycle_omega(theta, x, y).value;
    return {full * Scalar::from_rational_in(theta.context(), Rat(1, 2))};
}

// omega'_theta((x, W^s), (y, W^t)) = omega_theta(x, W^s y) on Z^n x F.
inline PhaseExponent cocycle_omega_prime(const SkewMatrix& theta, const IntMatrix& W,
                                         const std::vector<Int>& x, long s,
                                         const std::vector<Int>& y, long /*t*/) {
    const IntMatrix Ws = int_power(W, s);
    std::vector<Int> wy(y.size(), Int(0));
    for (std::size_t i = 0; i < y.size(); ++i)
        for (std::size_t j = 0; j < y.size(); ++j) wy[i] += Ws(i, j) * y[j];
    return cocycle_omega(theta, x, wy);
}

// The four block relations equivalent to W^t theta W = theta for
// block-diagonal W = diag(W1, W4) with W1 of size 2p.
inline bool compatibility_check(const IntMatrix& W, const SkewMatrix& theta, std::size_t p) {
    const std::size_t n = theta.n();
    const std::size_t twop = 2 * p;
    if (W.rows() != n || W.cols() != n) throw DimensionMismatch("W does not match theta");
    if (twop > n) throw BadP("2p exceeds n");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if ((i < twop) != (j < twop) && W(i, j) != 0)
                throw NotBlockDiagonal("W has off-diagonal blocks");
    const std::size_t q = n - twop;
    const auto& ctx = theta.context();
    const ScalarMatrix th = theta.as_matrix();
    const ScalarMatrix W1 = lift_int_matrix(W.submatrix(0, 0, twop, twop), ctx);
    const ScalarMatrix W4 = lift_int_matrix(W.submatrix(twop, twop, q, q), ctx);
    const ScalarMatrix th11 = th.submatrix(0, 0, twop, twop);
    const ScalarMatrix th12 = th.submatrix(0, twop, twop, q);
    const ScalarMatrix th21 = th.submatrix(twop, 0, q, twop);
    const ScalarMatrix th22 = th.submatrix(twop, twop, q, q);
    const auto equal = [](const ScalarMatrix& a, const ScalarMatrix& b) {
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j)
                if (!(a(i, j) == b(i, j))) return false;
        return true;
    };
    return equal(W1.transpose() * th11 * W1, th11) && equal(W1.transpose() * th12 * W4, th12) &&
           equal(W4.transpose() * th21 * W1, th21) && equal(W4.transpose() * th22 * W4, th22);
}

// Element c * U_1^{v_1} ... U_n^{v_n} of the twisted group algebra, stored
// as the exact phase exponent of c and the exponent vector. Products
// reorder via U_k U_j = e(theta_{jk}) U_j U_k.
struct TwistedMonomial {
    Scalar exponent;
    std::vector<Int> vector;
};

inline TwistedMonomial twisted_product(const SkewMatrix& theta, const TwistedMonomial& a,
                                       const TwistedMonomial& b) {
    const std::size_t n = theta.n();
    const auto& ctx = theta.context();
    // moving U_j^{b_j} left past U_k^{a_k} for k > j picks up e(a_k b_j theta_{jk})
    Scalar cross = Scalar::zero(ctx);
    for (std::size_t k = 2; k <= n; ++k)
        for (std::size_t j = 1; j < k; ++j) {
            const Int c = a.vector[k - 1] * b.vector[j - 1];
            if (c != 0)
                cross = cross + Scalar::from_rational_in(ctx, Rat(c)) * theta.at(j - 1, k - 1);
        }
    TwistedMonomial r{a.exponent + b.exponent + cross, a.vector};
    for (std::size_t i = 0; i < n; ++i) r.vector[i] += b.vector[i];
    return r;
}

inline TwistedMonomial twisted_inverse(const SkewMatrix& theta, const TwistedMonomial& a) {
    TwistedMonomial inv{-a.exponent, a.vector};
    for (auto& v : inv.vector) v = -v;
    // cancel the reordering phase of a * a^{-1}
    const auto& ctx = theta.context();
    Scalar cross = Scalar::zero(ctx);
    for (std::size_t k = 2; k <= theta.n(); ++k)
        for (std::size_t j = 1; j < k; ++j) {
            const Int c = a.vector[k - 1] * inv.vector[j - 1];
            if (c != 0)
                cross = cross + Scalar::from_rational_in(ctx, Rat(c)) * theta.at(j - 1, k - 1);
        }
    inv.exponent = inv.exponent - cross;
    return inv;
}

// alpha applied to a normal-ordered monomial: apply eq. alpha(U_i) to each
// factor and reorder back to normal form.
inline TwistedMonomial apply_alpha(const CyclicAction& act, const TwistedMonomial& m) {
    const std::size_t n = act.theta.n();
    const auto& ctx = act.theta.context();
    TwistedMonomial acc{m.exponent, std::vector<Int>(n, Int(0))};
    for (std::size_t i = 1; i <= n; ++i) {
        Int e = m.vector[i - 1];
        if (e == 0) continue;
        auto [phase, column] = alpha_phase_exponent(act, static_cast<int>(i));
        TwistedMonomial gen{phase.value, column};
        if (e < 0) {
            gen = twisted_inverse(act.theta, gen);
            e = -e;
        }
        for (Int k = 0; k < e; ++k) acc = twisted_product(act.theta, acc, gen);
    }
    return acc;
}

} // namespace nctorus
