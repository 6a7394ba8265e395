#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "nctorus/errors.hpp"
#include "nctorus/matrix.hpp"
#include "nctorus/skew_matrix.hpp"

namespace nctorus {

using Complex = std::complex<double>;

inline Complex unit_phase(double x) {
    return std::polar(1.0, 2.0 * std::numbers::pi * x);
}

// Exact geometry of the fundamental module on S(R^p x Z^q): the matrix T11
// with T11^t J0 T11 = theta11, the embedding maps T and S, and double caches
// for the grid layer. The T11 construction and its determinant identity are
// exact; only the grid operations are approximate.
class ModuleGeometry {
public:
    ModuleGeometry(const SkewMatrix& theta, std::size_t p) : theta_(theta.as_matrix()), p_(p) {
        ctx_ = theta.context();
        if (ctx_.mode == ScalarMode::Symbolic)
            throw UnsupportedInSymbolicMode("geometry needs a numeric mode");
        n_ = theta.n();
        if (p < 1 || 2 * p > n_) throw BadP("needs 1 <= 2p <= n");
        q_ = n_ - 2 * p;
        const SkewMatrix th11 = theta.block(0, 2 * p);
        if (pfaffian_expansion(th11).is_zero())
            throw SingularBlock("theta11 has vanishing pfaffian");
        build_t11(th11);
        verify_exact(th11);
        cache_doubles();
    }

    std::size_t n() const { return n_; }
    std::size_t p() const { return p_; }
    std::size_t q() const { return q_; }
    const ScalarContext& context() const { return ctx_; }
    const ScalarMatrix& t11() const { return t11_; }
    const ScalarMatrix& t11_inverse() const { return t11_inv_; }

    // The (2p+2q) x n embedding matrix T = (T11 0; 0 id_q; theta21 theta22/2).
    ScalarMatrix embedding_T() const {
        ScalarMatrix t(2 * p_ + 2 * q_, n_, Scalar::zero(ctx_));
        for (std::size_t i = 0; i < 2 * p_; ++i)
            for (std::size_t j = 0; j < 2 * p_; ++j) t(i, j) = t11_(i, j);
        for (std::size_t i = 0; i < q_; ++i) t(2 * p_ + i, 2 * p_ + i) = Scalar::one(ctx_);
        const Scalar half = Scalar::from_rational_in(ctx_, Rat(1, 2));
        for (std::size_t i = 0; i < q_; ++i) {
            for (std::size_t j = 0; j < 2 * p_; ++j)
                t(2 * p_ + q_ + i, j) = theta_(2 * p_ + i, j); // theta21
            for (std::size_t j = 0; j < q_; ++j)
                t(2 * p_ + q_ + i, 2 * p_ + j) = theta_(2 * p_ + i, 2 * p_ + j) * half;
        }
        return t;
    }

    // S = (J0 (T11^t)^{-1}, -J0 (T11^t)^{-1} theta21^t; 0 id_q; 0 theta22^t/2).
    ScalarMatrix embedding_S() const {
        ScalarMatrix s(2 * p_ + 2 * q_, n_, Scalar::zero(ctx_));
        const ScalarMatrix j0t_inv = j0_exact() * t11_inv_.transpose();
        for (std::size_t i = 0; i < 2 * p_; ++i)
            for (std::size_t j = 0; j < 2 * p_; ++j) s(i, j) = j0t_inv(i, j);
        // -J0 (T11^t)^{-1} theta21^t
        ScalarMatrix th21(q_, 2 * p_, Scalar::zero(ctx_));
        for (std::size_t i = 0; i < q_; ++i)
            for (std::size_t j = 0; j < 2 * p_; ++j) th21(i, j) = theta_(2 * p_ + i, j);
        const ScalarMatrix upper_right = j0t_inv * th21.transpose();
        for (std::size_t i = 0; i < 2 * p_; ++i)
            for (std::size_t j = 0; j < q_; ++j) s(i, 2 * p_ + j) = -upper_right(i, j);
        for (std::size_t i = 0; i < q_; ++i) s(2 * p_ + i, 2 * p_ + i) = Scalar::one(ctx_);
        const Scalar half = Scalar::from_rational_in(ctx_, Rat(1, 2));
        for (std::size_t i = 0; i < q_; ++i)
            for (std::size_t j = 0; j < q_; ++j)
                s(2 * p_ + q_ + i, 2 * p_ + j) = theta_(2 * p_ + j, 2 * p_ + i) * half; // theta22^t/2
        return s;
    }

    ScalarMatrix j0_exact() const {
        ScalarMatrix j(2 * p_, 2 * p_, Scalar::zero(ctx_));
        for (std::size_t i = 0; i < p_; ++i) {
            j(i, p_ + i) = Scalar::one(ctx_);
            j(p_ + i, i) = -Scalar::one(ctx_);
        }
        return j;
    }

    // ---- double-precision views used by the grid layer ----

    // u = T11 l1 split into translation (first p) and modulation (last p).
    void continuous_parts(const std::vector<long>& l1, std::vector<double>& translation,
                          std::vector<double>& modulation) const {
        translation.assign(p_, 0.0);
        modulation.assign(p_, 0.0);
        for (std::size_t i = 0; i < 2 * p_; ++i) {
            double acc = 0;
            for (std::size_t j = 0; j < 2 * p_; ++j) acc += t11d_[i * 2 * p_ + j] * l1[j];
            if (i < p_)
                translation[i] = acc;
            else
                modulation[i - p_] = acc;
        }
    }

    // w = theta21 l1 + (theta22/2) l2, the discrete modulation exponents.
    std::vector<double> discrete_modulation(const std::vector<long>& l1,
                                            const std::vector<long>& l2) const {
        std::vector<double> w(q_, 0.0);
        for (std::size_t i = 0; i < q_; ++i) {
            double acc = 0;
            for (std::size_t j = 0; j < 2 * p_; ++j) acc += th21d_[i * 2 * p_ + j] * l1[j];
            for (std::size_t j = 0; j < q_; ++j) acc += 0.5 * th22d_[i * q_ + j] * l2[j];
            w[i] = acc;
        }
        return w;
    }

    // <T(l), J' T(l)> = u . J0' u + l2 . w.
    double quadratic_exponent(const std::vector<long>& l1, const std::vector<long>& l2) const {
        std::vector<double> u(2 * p_, 0.0);
        for (std::size_t i = 0; i < 2 * p_; ++i)
            for (std::size_t j = 0; j < 2 * p_; ++j) u[i] += t11d_[i * 2 * p_ + j] * l1[j];
        double v = 0;
        for (std::size_t i = 0; i < p_; ++i) v += u[i] * u[p_ + i];
        const auto w = discrete_modulation(l1, l2);
        for (std::size_t i = 0; i < q_; ++i) v += static_cast<double>(l2[i]) * w[i];
        return v;
    }

    double t11_entry(std::size_t i, std::size_t j) const { return t11d_[i * 2 * p_ + j]; }

private:
    void build_t11(const SkewMatrix& th11) {
        // symplectic Gram-Schmidt over the exact scalars: find P with
        // P^t theta11 P = J0, then T11 = P^{-1}
        const std::size_t m = 2 * p_;
        const auto B = [&](const std::vector<Scalar>& u, const std::vector<Scalar>& v) {
            Scalar acc = Scalar::zero(ctx_);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j) acc = acc + u[i] * th11.at(i, j) * v[j];
            return acc;
        };
        std::vector<std::vector<Scalar>> pool;
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<Scalar> e(m, Scalar::zero(ctx_));
            e[i] = Scalar::one(ctx_);
            pool.push_back(std::move(e));
        }
        std::vector<std::vector<Scalar>> us, vs;
        while (!pool.empty()) {
            std::vector<Scalar> u = std::move(pool.front());
            pool.erase(pool.begin());
            std::size_t partner = pool.size();
            Scalar buv = Scalar::zero(ctx_);
            for (std::size_t t = 0; t < pool.size(); ++t) {
                buv = B(u, pool[t]);
                if (!buv.is_zero()) {
                    partner = t;
                    break;
                }
            }
            if (partner == pool.size())
                throw SingularBlock("theta11 is degenerate on a subspace");
            std::vector<Scalar> v = std::move(pool[partner]);
            pool.erase(pool.begin() + static_cast<long>(partner));
            // normalize u, so e.g. the 2-dim theta J0 block yields
            // T11 = diag(theta, 1) and U_{e1} translates by theta
            const Scalar inv = buv.invert();
            for (auto& c : u) c = c * inv;
            for (auto& w : pool) {
                const Scalar a = B(u, w), b = B(v, w);
                for (std::size_t i = 0; i < m; ++i) w[i] = w[i] - a * v[i] + b * u[i];
            }
            us.push_back(std::move(u));
            vs.push_back(std::move(v));
        }
        ScalarMatrix P(m, m, Scalar::zero(ctx_));
        for (std::size_t c = 0; c < p_; ++c)
            for (std::size_t i = 0; i < m; ++i) {
                P(i, c) = us[c][i];
                P(i, p_ + c) = vs[c][i];
            }
        auto inv = invert_scalar(P, ctx_);
        if (!inv) throw SingularBlock("symplectic basis is singular");
        t11_ = std::move(*inv);
        t11_inv_ = std::move(P);
    }

    void verify_exact(const SkewMatrix& th11) const {
        const ScalarMatrix lhs = t11_.transpose() * j0_exact() * t11_;
        for (std::size_t i = 0; i < 2 * p_; ++i)
            for (std::size_t j = 0; j < 2 * p_; ++j)
                if (!(lhs(i, j) == th11.at(i, j)))
                    throw InvariantViolation("T11^t J0 T11 != theta11");
        const Scalar det = det_scalar(t11_, ctx_);
        const Scalar pf = pfaffian_expansion(th11);
        if (!(det == pf) && !(det == -pf))
            throw InvariantViolation("det T11 != +-pf(theta11)");
    }

    void cache_doubles() {
        t11d_.assign(4 * p_ * p_, 0.0);
        for (std::size_t i = 0; i < 2 * p_; ++i)
            for (std::size_t j = 0; j < 2 * p_; ++j) t11d_[i * 2 * p_ + j] = t11_(i, j).to_double();
        th21d_.assign(q_ * 2 * p_, 0.0);
        th22d_.assign(q_ * q_, 0.0);
        for (std::size_t i = 0; i < q_; ++i) {
            for (std::size_t j = 0; j < 2 * p_; ++j)
                th21d_[i * 2 * p_ + j] = theta_(2 * p_ + i, j).to_double();
            for (std::size_t j = 0; j < q_; ++j)
                th22d_[i * q_ + j] = theta_(2 * p_ + i, 2 * p_ + j).to_double();
        }
    }

    ScalarMatrix theta_;
    ScalarContext ctx_;
    std::size_t n_ = 0, p_ = 0, q_ = 0;
    ScalarMatrix t11_, t11_inv_;
    std::vector<double> t11d_, th21d_, th22d_;
};

// Complex samples of a Schwartz-class function on the grid
// {-L, -L+h, ..., L}^p x {-K..K}^q. Immutable in use; operations allocate
// fresh outputs.
class GridFunction {
public:
    GridFunction(std::size_t p, std::size_t q, double L, double h, long K)
        : p_(p), q_(q), L_(L), h_(h), K_(K) {
        if (L <= 0 || h <= 0 || (q > 0 && K < 0)) throw DimensionMismatch("bad grid parameters");
        m_ = 2 * static_cast<std::size_t>(std::llround(L / h)) + 1;
        d_ = q ? 2 * static_cast<std::size_t>(K) + 1 : 1;
        std::size_t total = 1;
        for (std::size_t i = 0; i < p_; ++i) total *= m_;
        for (std::size_t i = 0; i < q_; ++i) total *= d_;
        values_.assign(total, Complex(0.0, 0.0));
    }

    std::size_t p() const { return p_; }
    std::size_t q() const { return q_; }
    double L() const { return L_; }
    double h() const { return h_; }
    long K() const { return K_; }
    std::size_t points_per_axis() const { return m_; }
    std::size_t discrete_per_axis() const { return d_; }
    std::size_t size() const { return values_.size(); }

    Complex& operator[](std::size_t i) { return values_[i]; }
    const Complex& operator[](std::size_t i) const { return values_[i]; }

    double coord(std::size_t idx) const { return -L_ + static_cast<double>(idx) * h_; }

    // Multi-index decode: continuous indices first, then discrete.
    void decode(std::size_t flat, std::vector<std::size_t>& cont,
                std::vector<long>& disc) const {
        cont.assign(p_, 0);
        disc.assign(q_, 0);
        for (std::size_t a = q_; a-- > 0;) {
            disc[a] = static_cast<long>(flat % d_) - K_;
            flat /= d_;
        }
        for (std::size_t a = p_; a-- > 0;) {
            cont[a] = flat % m_;
            flat /= m_;
        }
    }

    std::size_t encode(const std::vector<std::size_t>& cont, const std::vector<long>& disc) const {
        std::size_t flat = 0;
        for (std::size_t a = 0; a < p_; ++a) flat = flat * m_ + cont[a];
        for (std::size_t a = 0; a < q_; ++a)
            flat = flat * d_ + static_cast<std::size_t>(disc[a] + K_);
        return flat;
    }

    // Sample f(x1 - shift, x2 - l2) by multilinear interpolation on the
    // continuous axes; points outside the grid read as 0.
    Complex sample_shifted(const std::vector<std::size_t>& cont, const std::vector<long>& disc,
                           const std::vector<double>& shift, const std::vector<long>& l2) const {
        std::vector<long> d2(q_);
        for (std::size_t a = 0; a < q_; ++a) {
            d2[a] = disc[a] - l2[a];
            if (d2[a] < -K_ || d2[a] > K_) return {0.0, 0.0};
        }
        // continuous: target position in index units
        std::vector<double> pos(p_);
        for (std::size_t a = 0; a < p_; ++a)
            pos[a] = static_cast<double>(cont[a]) - shift[a] / h_;
        // multilinear over the p axes
        Complex acc(0.0, 0.0);
        const std::size_t corners = std::size_t(1) << p_;
        std::vector<std::size_t> base(p_);
        std::vector<double> frac(p_);
        for (std::size_t a = 0; a < p_; ++a) {
            const double fl = std::floor(pos[a]);
            base[a] = static_cast<std::size_t>(static_cast<long>(fl));
            frac[a] = pos[a] - fl;
            // snap to the grid when the shift is (numerically) aligned
            if (frac[a] < 1e-9) frac[a] = 0.0;
            if (frac[a] > 1.0 - 1e-9) {
                frac[a] = 0.0;
                base[a] += 1;
            }
        }
        std::vector<std::size_t> corner(p_);
        for (std::size_t c = 0; c < corners; ++c) {
            double weight = 1.0;
            bool inside = true;
            for (std::size_t a = 0; a < p_; ++a) {
                const bool hi = (c >> a) & 1;
                weight *= hi ? frac[a] : 1.0 - frac[a];
                const long idx = static_cast<long>(base[a]) + (hi ? 1 : 0);
                if (idx < 0 || idx >= static_cast<long>(m_)) {
                    inside = false;
                    break;
                }
                corner[a] = static_cast<std::size_t>(idx);
            }
            if (!inside || weight == 0.0) continue;
            acc += weight * values_[encode(corner, d2)];
        }
        return acc;
    }

    double norm() const {
        double s = 0;
        for (const auto& v : values_) s += std::norm(v);
        for (std::size_t a = 0; a < p_; ++a) s *= h_;
        return std::sqrt(s);
    }

private:
    std::size_t p_, q_;
    double L_, h_;
    long K_;
    std::size_t m_ = 0, d_ = 1;
    std::vector<Complex> values_;
};

inline Complex inner_l2(const GridFunction& f, const GridFunction& g) {
    Complex s(0.0, 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * std::conj(g[i]);
    for (std::size_t a = 0; a < f.p(); ++a) s *= f.h();
    return s;
}

inline double grid_distance(const GridFunction& a, const GridFunction& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    for (std::size_t x = 0; x < a.p(); ++x) s *= a.h();
    return std::sqrt(s);
}

// Gaussian e^{-pi |x1|^2 - pi |x2|^2} on the grid; the workhorse test
// function (its tails are ~1e-87 at L = 8).
inline GridFunction make_gaussian(std::size_t p, std::size_t q, double L, double h, long K) {
    GridFunction f(p, q, L, h, K);
    std::vector<std::size_t> cont;
    std::vector<long> disc;
    for (std::size_t i = 0; i < f.size(); ++i) {
        f.decode(i, cont, disc);
        double s = 0;
        for (std::size_t a = 0; a < p; ++a) {
            const double x = f.coord(cont[a]);
            s += x * x;
        }
        for (std::size_t a = 0; a < q; ++a) s += static_cast<double>(disc[a] * disc[a]);
        f[i] = std::exp(-std::numbers::pi * s);
    }
    return f;
}

// Gaussian on the continuous axes times the delta at 0 on the discrete ones.
inline GridFunction make_gaussian_delta(std::size_t p, std::size_t q, double L, double h, long K) {
    GridFunction f(p, q, L, h, K);
    std::vector<std::size_t> cont;
    std::vector<long> disc;
    for (std::size_t i = 0; i < f.size(); ++i) {
        f.decode(i, cont, disc);
        bool origin = true;
        for (std::size_t a = 0; a < q; ++a) origin = origin && disc[a] == 0;
        if (!origin) continue;
        double s = 0;
        for (std::size_t a = 0; a < p; ++a) {
            const double x = f.coord(cont[a]);
            s += x * x;
        }
        f[i] = std::exp(-std::numbers::pi * s);
    }
    return f;
}

// Right module action (f U_l)(x) =
// e(<-T(l), J'T(l)/2>) <x, T''(l)> f(x - T'(l)).
inline GridFunction act_U(const GridFunction& f, const std::vector<long>& l,
                          const ModuleGeometry& geom) {
    const std::size_t p = geom.p(), q = geom.q();
    if (l.size() != geom.n()) throw DimensionMismatch("l must have length n");
    if (f.p() != p || f.q() != q) throw DimensionMismatch("grid does not match geometry");
    std::vector<long> l1(l.begin(), l.begin() + 2 * p);
    std::vector<long> l2(l.begin() + 2 * p, l.end());
    std::vector<double> shift, modulation;
    geom.continuous_parts(l1, shift, modulation);
    for (std::size_t a = 0; a < p; ++a)
        if (std::abs(shift[a]) > f.L())
            throw OutOfGrid("translation exceeds the grid extent");
    const auto w = geom.discrete_modulation(l1, l2);
    const Complex c0 = unit_phase(-0.5 * geom.quadratic_exponent(l1, l2));

    GridFunction out(p, q, f.L(), f.h(), f.K());
    std::vector<std::size_t> cont;
    std::vector<long> disc;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.decode(i, cont, disc);
        double expo = 0;
        for (std::size_t a = 0; a < p; ++a) expo += out.coord(cont[a]) * modulation[a];
        for (std::size_t a = 0; a < q; ++a) expo += static_cast<double>(disc[a]) * w[a];
        const Complex v = f.sample_shifted(cont, disc, shift, l2);
        out[i] = c0 * unit_phase(expo) * v;
    }
    return out;
}

// A_theta-valued inner product coefficient
// <f,g>(l) = e(<-T(l), J'T(l)/2>) int <x, -T''(l)> g(x + T'(l)) conj(f(x)) dx.
inline Complex inner_A(const GridFunction& f, const GridFunction& g, const std::vector<long>& l,
                       const ModuleGeometry& geom) {
    const std::size_t p = geom.p(), q = geom.q();
    if (l.size() != geom.n()) throw DimensionMismatch("l must have length n");
    std::vector<long> l1(l.begin(), l.begin() + 2 * p);
    std::vector<long> l2(l.begin() + 2 * p, l.end());
    std::vector<double> shift, modulation;
    geom.continuous_parts(l1, shift, modulation);
    const auto w = geom.discrete_modulation(l1, l2);
    const Complex c0 = unit_phase(-0.5 * geom.quadratic_exponent(l1, l2));
    std::vector<double> neg_shift(p);
    for (std::size_t a = 0; a < p; ++a) neg_shift[a] = -shift[a];
    std::vector<long> neg_l2(q);
    for (std::size_t a = 0; a < q; ++a) neg_l2[a] = -l2[a];

    Complex acc(0.0, 0.0);
    std::vector<std::size_t> cont;
    std::vector<long> disc;
    for (std::size_t i = 0; i < f.size(); ++i) {
        f.decode(i, cont, disc);
        double expo = 0;
        for (std::size_t a = 0; a < p; ++a) expo += f.coord(cont[a]) * modulation[a];
        for (std::size_t a = 0; a < q; ++a) expo += static_cast<double>(disc[a]) * w[a];
        const Complex gv = g.sample_shifted(cont, disc, neg_shift, neg_l2); // g(x + T'(l))
        acc += unit_phase(-expo) * gv * std::conj(f[i]);
    }
    for (std::size_t a = 0; a < p; ++a) acc *= f.h();
    return c0 * acc;
}

enum class MetaplecticKind { Identity, Parity, Fourier };

struct MetaplecticOp {
    MetaplecticKind kind = MetaplecticKind::Identity;
    Complex phase = {1.0, 0.0}; // free unit scalar of the lift
};

namespace detail {

// W must be diag(W1, W4); returns the blocks.
inline std::pair<IntMatrix, IntMatrix> split_blocks(const IntMatrix& W, std::size_t twop) {
    const std::size_t n = W.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if ((i < twop) != (j < twop) && W(i, j) != 0)
                throw NotBlockDiagonal("W couples the two factors");
    return {W.submatrix(0, 0, twop, twop), W.submatrix(twop, twop, n - twop, n - twop)};
}

// Quadrature linear canonical transform of one continuous slice for
// S = (a b; c d): the metaplectic operator up to a unit scalar.
inline void lct_slice(const std::vector<Complex>& in, std::vector<Complex>& out, double a,
                      double b, double c, double d, double L, double h) {
    const std::size_t m = in.size();
    if (std::abs(b) > 1e-12) {
        const double norm = h / std::sqrt(std::abs(b)); // h: quadrature weight, 1/sqrt|b|: kernel
        for (std::size_t i = 0; i < m; ++i) {
            const double x = -L + static_cast<double>(i) * h;
            Complex acc(0.0, 0.0);
            for (std::size_t j = 0; j < m; ++j) {
                const double y = -L + static_cast<double>(j) * h;
                acc += unit_phase((d * x * x - 2.0 * x * y + a * y * y) / (2.0 * b)) * in[j];
            }
            out[i] = norm * acc;
        }
    } else {
        // S = (a 0; c 1/a): chirp times dilation
        const double norm = 1.0 / std::sqrt(std::abs(a));
        for (std::size_t i = 0; i < m; ++i) {
            const double x = -L + static_cast<double>(i) * h;
            const double ysrc = x / a;
            // linear interpolation at ysrc
            const double posf = (ysrc + L) / h;
            const double fl = std::floor(posf);
            const long base = static_cast<long>(fl);
            double frac = posf - fl;
            if (frac < 1e-9) frac = 0.0;
            if (frac > 1.0 - 1e-9) frac = 1.0;
            Complex v(0.0, 0.0);
            if (base >= 0 && base < static_cast<long>(m)) v += (1.0 - frac) * in[base];
            if (base + 1 >= 0 && base + 1 < static_cast<long>(m) && frac > 0.0)
                v += frac * in[base + 1];
            out[i] = norm * unit_phase(c * x * x / (2.0 * a)) * v;
        }
    }
}

// 2x2 double matrix of T11 W1^{+-1} T11^{-1} for p = 1.
inline void conjugated_symplectic(const ModuleGeometry& geom, const IntMatrix& W1, bool inverse,
                                  double out[4]) {
    const auto& ctx = geom.context();
    ScalarMatrix w = lift_int_matrix(inverse ? invert_unimodular(W1) : W1, ctx);
    ScalarMatrix s = geom.t11() * w * geom.t11_inverse();
    out[0] = s(0, 0).to_double();
    out[1] = s(0, 1).to_double();
    out[2] = s(1, 0).to_double();
    out[3] = s(1, 1).to_double();
}

} // namespace detail

// Validates W1 against the supported operator catalog.
inline MetaplecticOp op_for(const IntMatrix& W1, std::size_t p) {
    const std::size_t m = 2 * p;
    IntMatrix id = int_identity(m);
    IntMatrix neg(m, m, Int(0));
    for (std::size_t i = 0; i < m; ++i) neg(i, i) = -1;
    if (W1 == id) return {MetaplecticKind::Identity, {1.0, 0.0}};
    if (W1 == neg) return {MetaplecticKind::Parity, {1.0, 0.0}};
    if (p == 1) {
        IntMatrix j0(2, 2, Int(0));
        j0(0, 1) = 1;
        j0(1, 0) = -1;
        IntMatrix j0inv = j0.transpose();
        if (W1 == j0 || W1 == j0inv) return {MetaplecticKind::Fourier, {1.0, 0.0}};
    }
    throw UnsupportedW1("W1 outside the Identity/Parity/Fourier catalog");
}

namespace detail {

// The unitary assigned to the generator (direction +1) or its inverse
// (direction -1). The lift is a homomorphism on the cyclic group: the
// operator for W^{-1} is the exact inverse of the operator for W, so the
// scalar of the inverse is the conjugate.
inline GridFunction apply_metaplectic(const GridFunction& f, const IntMatrix& W,
                                      const ModuleGeometry& geom, const MetaplecticOp& op,
                                      int direction) {
    const std::size_t p = geom.p(), q = geom.q();
    auto [W1, W4] = split_blocks(W, 2 * p);
    // validate the declared kind against W1
    const MetaplecticOp derived = op_for(W1, p);
    if (derived.kind != op.kind) throw UnsupportedW1("op kind does not match W1");

    const IntMatrix W4_applied = direction > 0 ? W4 : invert_unimodular(W4);
    Complex scalar = op.phase;
    if (q > 0) {
        const Int det4 = det_bareiss(W4);
        scalar *= (det4 == 1) ? Complex(1.0, 0.0) : Complex(0.0, 1.0); // principal sqrt
    }
    if (direction < 0) scalar = std::conj(scalar);

    // discrete reindex: g(x1, x2) = f(x1, W4^{dir} x2), zero outside the box
    GridFunction mid(p, q, f.L(), f.h(), f.K());
    std::vector<std::size_t> cont;
    std::vector<long> disc, mapped(q);
    for (std::size_t i = 0; i < mid.size(); ++i) {
        mid.decode(i, cont, disc);
        bool inside = true;
        for (std::size_t a = 0; a < q && inside; ++a) {
            long acc = 0;
            for (std::size_t b = 0; b < q; ++b)
                acc += static_cast<long>(W4_applied(a, b).get_si()) * disc[b];
            mapped[a] = acc;
            inside = acc >= -f.K() && acc <= f.K();
        }
        if (!inside) continue;
        mid[i] = f[mid.encode(cont, mapped)];
    }

    // continuous part
    GridFunction out(p, q, f.L(), f.h(), f.K());
    switch (op.kind) {
        case MetaplecticKind::Identity:
            out = mid;
            break;
        case MetaplecticKind::Parity: {
            // metaplectic image of -id: f(x) -> f(-x)
            std::vector<std::size_t> rc(p);
            for (std::size_t i = 0; i < out.size(); ++i) {
                out.decode(i, cont, disc);
                for (std::size_t a = 0; a < p; ++a)
                    rc[a] = out.points_per_axis() - 1 - cont[a];
                out[i] = mid[out.encode(rc, disc)];
            }
            break;
        }
        case MetaplecticKind::Fourier: {
            // p = 1: LCT of S = T11 W1^{-dir} T11^{-1}
            double s[4];
            conjugated_symplectic(geom, W1, direction > 0, s);
            const std::size_t m = out.points_per_axis();
            const std::size_t slices = out.size() / m;
            std::vector<Complex> in_slice(m), out_slice(m);
            // continuous axis is the leading index, so slices are strided
            const std::size_t stride = out.size() / m;
            for (std::size_t sl = 0; sl < slices; ++sl) {
                for (std::size_t i = 0; i < m; ++i) in_slice[i] = mid[i * stride + sl];
                lct_slice(in_slice, out_slice, s[0], s[1], s[2], s[3], f.L(), f.h());
                for (std::size_t i = 0; i < m; ++i) out[i * stride + sl] = out_slice[i];
            }
            break;
        }
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= scalar;
    return out;
}

} // namespace detail

// (fW)(x1, x2) = sqrt(det W4) (f# W1)(x1) with f#(x') = f(x', W4 x2).
inline GridFunction act_W(const GridFunction& f, const IntMatrix& W, const ModuleGeometry& geom,
                          const MetaplecticOp& op) {
    return detail::apply_metaplectic(f, W, geom, op, +1);
}

inline GridFunction act_W_inverse(const GridFunction& f, const IntMatrix& W,
                                  const ModuleGeometry& geom, const MetaplecticOp& op) {
    return detail::apply_metaplectic(f, W, geom, op, -1);
}

// ||(fW)U_l - (f U_{Wl})W|| / ||f||.
inline double verify_covariance(const GridFunction& f, const IntMatrix& W,
                                const std::vector<long>& l, const ModuleGeometry& geom,
                                const MetaplecticOp& op) {
    const std::size_t n = geom.n();
    std::vector<long> wl(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) wl[i] += static_cast<long>(W(i, j).get_si()) * l[j];
    const GridFunction lhs = act_U(act_W(f, W, geom, op), l, geom);
    const GridFunction rhs = act_W(act_U(f, wl, geom), W, geom, op);
    return grid_distance(lhs, rhs) / f.norm();
}

// |<fW, g> - <f, gW^{-1}>| / (||f|| ||g||).
inline double verify_unitarity(const GridFunction& f, const GridFunction& g, const IntMatrix& W,
                               const ModuleGeometry& geom, const MetaplecticOp& op) {
    const Complex lhs = inner_l2(act_W(f, W, geom, op), g);
    const Complex rhs = inner_l2(f, act_W_inverse(g, W, geom, op));
    return std::abs(lhs - rhs) / (f.norm() * g.norm());
}

// max_l |<f, gW>(l) - <fW^{-1}, g>(Wl)| / (||f|| ||g||), the coefficientwise
// form of <f, gW> = alpha_{W^{-1}}(<fW^{-1}, g>).
inline double verify_inner_compat(const GridFunction& f, const GridFunction& g,
                                  const IntMatrix& W, const std::vector<std::vector<long>>& ls,
                                  const ModuleGeometry& geom, const MetaplecticOp& op) {
    const std::size_t n = geom.n();
    const GridFunction gw = act_W(g, W, geom, op);
    const GridFunction fwinv = act_W_inverse(f, W, geom, op);
    double worst = 0;
    for (const auto& l : ls) {
        std::vector<long> wl(n, 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                wl[i] += static_cast<long>(W(i, j).get_si()) * l[j];
        const Complex lhs = inner_A(f, gw, l, geom);
        const Complex rhs = inner_A(fwinv, g, wl, geom);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst / (f.norm() * g.norm());
}

} // namespace nctorus
