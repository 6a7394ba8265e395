#pragma once

#include <utility>
#include <vector>

#include "nctorus/errors.hpp"
#include "nctorus/matrix.hpp"
#include "nctorus/skew_matrix.hpp"

namespace nctorus {

// Permutation of {1..n}; images[k-1] = Sigma(k).
struct Permutation {
    std::vector<int> images;

    explicit Permutation(std::vector<int> im) : images(std::move(im)) {
        std::vector<bool> seen(images.size(), false);
        for (int v : images) {
            if (v < 1 || static_cast<std::size_t>(v) > images.size() || seen[v - 1])
                throw InvariantViolation("not a permutation");
            seen[v - 1] = true;
        }
    }

    std::size_t n() const { return images.size(); }
    int operator()(int k) const { return images[k - 1]; }

    // Matrix R with R(k, Sigma(k)) = 1, so that (R theta R^t)_{km} =
    // theta_{Sigma(k) Sigma(m)}: conjugating by rho(R) moves the selected
    // rows and columns of theta into the leading block.
    IntMatrix matrix() const {
        IntMatrix r(n(), n(), Int(0));
        for (std::size_t k = 1; k <= n(); ++k) r(k - 1, images[k - 1] - 1) = 1;
        return r;
    }
};

// Element of SO(n,n|Z) in 2x2 block form (A B; C D). Construction verifies
// the three defining relations and determinant 1.
class BlockElement {
public:
    BlockElement(IntMatrix A, IntMatrix B, IntMatrix C, IntMatrix D)
        : n_(A.rows()), A_(std::move(A)), B_(std::move(B)), C_(std::move(C)), D_(std::move(D)) {
        verify();
    }

    std::size_t n() const { return n_; }
    const IntMatrix& A() const { return A_; }
    const IntMatrix& B() const { return B_; }
    const IntMatrix& C() const { return C_; }
    const IntMatrix& D() const { return D_; }

    IntMatrix full() const {
        IntMatrix m(2 * n_, 2 * n_, Int(0));
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) {
                m(i, j) = A_(i, j);
                m(i, n_ + j) = B_(i, j);
                m(n_ + i, j) = C_(i, j);
                m(n_ + i, n_ + j) = D_(i, j);
            }
        return m;
    }

    bool operator==(const BlockElement& o) const {
        return A_ == o.A_ && B_ == o.B_ && C_ == o.C_ && D_ == o.D_;
    }

private:
    void verify() const {
        if (A_.rows() != n_ || A_.cols() != n_ || B_.rows() != n_ || B_.cols() != n_ ||
            C_.rows() != n_ || C_.cols() != n_ || D_.rows() != n_ || D_.cols() != n_)
            throw DimensionMismatch("block sizes must agree");
        const IntMatrix At = A_.transpose(), Bt = B_.transpose(), Ct = C_.transpose(),
                        Dt = D_.transpose();
        if (!is_zero_matrix(At * C_ + Ct * A_))
            throw InvariantViolation("A^t C + C^t A != 0");
        if (!is_zero_matrix(Bt * D_ + Dt * B_))
            throw InvariantViolation("B^t D + D^t B != 0");
        if (!(At * D_ + Ct * B_ == int_identity(n_)))
            throw InvariantViolation("A^t D + C^t B != id");
        if (det_bareiss(full()) != 1) throw InvariantViolation("determinant != 1");
    }

    std::size_t n_;
    IntMatrix A_, B_, C_, D_;
};

inline BlockElement identity_element(std::size_t n) {
    return BlockElement(int_identity(n), IntMatrix(n, n, Int(0)), IntMatrix(n, n, Int(0)),
                        int_identity(n));
}

// rho(R) = (R, 0; 0, (R^{-1})^t) for R in GL(n,Z).
inline BlockElement make_rho(const IntMatrix& R) {
    const std::size_t n = R.rows();
    if (R.cols() != n) throw DimensionMismatch("rho needs a square matrix");
    const Int d = det_bareiss(R);
    if (d != 1 && d != -1) throw NotUnimodular("rho needs det = +-1");
    return BlockElement(R, IntMatrix(n, n, Int(0)), IntMatrix(n, n, Int(0)),
                        invert_unimodular(R).transpose());
}

// mu(N) = (id, N; 0, id) for integral skew-symmetric N.
inline BlockElement make_mu(const IntMatrix& N) {
    const std::size_t n = N.rows();
    if (N.cols() != n) throw DimensionMismatch("mu needs a square matrix");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (N(i, j) != -N(j, i)) throw NotSkewIntegral("mu needs a skew matrix");
    return BlockElement(int_identity(n), N, IntMatrix(n, n, Int(0)), int_identity(n));
}

// sigma_{2p}: swaps the first 2p coordinates with their duals; self-inverse.
inline BlockElement make_sigma(std::size_t n, std::size_t p) {
    if (p < 1 || 2 * p > n) throw BadP("needs 1 <= 2p <= n");
    IntMatrix A(n, n, Int(0)), B(n, n, Int(0));
    for (std::size_t i = 0; i < n; ++i) {
        if (i < 2 * p)
            B(i, i) = 1;
        else
            A(i, i) = 1;
    }
    return BlockElement(A, B, B, A);
}

inline BlockElement compose(const BlockElement& g, const BlockElement& h) {
    if (g.n() != h.n()) throw DimensionMismatch("composing different dimensions");
    return BlockElement(g.A() * h.A() + g.B() * h.C(), g.A() * h.B() + g.B() * h.D(),
                        g.C() * h.A() + g.D() * h.C(), g.C() * h.B() + g.D() * h.D());
}

// Fractional-linear action g theta = (A theta + B)(C theta + D)^{-1}.
// Needs a numeric mode; the result is verified skew-symmetric.
inline SkewMatrix act_on_theta(const BlockElement& g, const SkewMatrix& theta) {
    if (theta.context().mode == ScalarMode::Symbolic)
        throw UnsupportedInSymbolicMode("the action inverts C theta + D");
    if (g.n() != theta.n()) throw DimensionMismatch("dimension mismatch");
    const auto& ctx = theta.context();
    const ScalarMatrix A = lift_int_matrix(g.A(), ctx), B = lift_int_matrix(g.B(), ctx),
                       C = lift_int_matrix(g.C(), ctx), D = lift_int_matrix(g.D(), ctx);
    const ScalarMatrix denom = C * theta.as_matrix() + D;
    const auto inv = invert_scalar(denom, ctx);
    if (!inv) throw ActionUndefined("C theta + D is singular");
    const ScalarMatrix result = (A * theta.as_matrix() + B) * (*inv);
    SkewMatrix out(theta.n(), ctx);
    for (std::size_t i = 0; i < theta.n(); ++i)
        for (std::size_t j = i + 1; j < theta.n(); ++j) {
            if (!(result(i, j) == -result(j, i)))
                throw InvariantViolation("action result is not skew-symmetric");
            out.set_upper(static_cast<int>(i + 1), static_cast<int>(j + 1), result(i, j));
        }
    for (std::size_t i = 0; i < theta.n(); ++i)
        if (!result(i, i).is_zero())
            throw InvariantViolation("action result has a nonzero diagonal");
    return out;
}

// Sigma with Sigma(k) = i_k for k <= 2p, followed by the complement of I in
// increasing order.
inline Permutation canonical_sigma_permutation(const IndexTuple& I, std::size_t n) {
    if (!I.indices.empty() && static_cast<std::size_t>(I.indices.back()) > n)
        throw BadIndexTuple("index exceeds dimension");
    std::vector<int> images = I.indices;
    std::vector<bool> used(n + 1, false);
    for (int v : I.indices) used[v] = true;
    for (std::size_t v = 1; v <= n; ++v)
        if (!used[v]) images.push_back(static_cast<int>(v));
    return Permutation(images);
}

// g_{I,Sigma} = sigma_{2p} rho(R_I^Sigma) with the canonical Sigma.
inline BlockElement make_g_I_sigma(const IndexTuple& I, std::size_t n) {
    if (I.indices.empty()) throw BadIndexTuple("index tuple must be nonempty");
    const auto sigma = make_sigma(n, I.size() / 2);
    const auto rho = make_rho(canonical_sigma_permutation(I, n).matrix());
    return compose(sigma, rho);
}

// Decides whether g_{I,Sigma} <W> g_{I,Sigma}^{-1} lies in the subgroup
// generated by the rho(R): equivalently, whether V = R W^t R^{-1} is
// block-diagonal with blocks of sizes 2p and q = n - 2p. Block-diagonality
// is closed under powers, so checking the generator W suffices for the
// whole cyclic group.
inline bool extension_condition(const IntMatrix& W, const IndexTuple& I) {
    const std::size_t n = W.rows();
    if (W.cols() != n) throw DimensionMismatch("W must be square");
    const Int d = det_bareiss(W);
    if (d != 1 && d != -1) throw NotUnimodular("W must be in GL(n,Z)");
    if (!I.indices.empty() && static_cast<std::size_t>(I.indices.back()) > n)
        throw BadIndexTuple("index exceeds dimension");
    const std::size_t twop = I.size();
    const IntMatrix R = canonical_sigma_permutation(I, n).matrix();
    const IntMatrix V = R * W.transpose() * invert_unimodular(R);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const bool upper_block = i < twop;
            const bool col_upper = j < twop;
            if (upper_block != col_upper && V(i, j) != 0) return false;
        }
    return true;
}

} // namespace nctorus
