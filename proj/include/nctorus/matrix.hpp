#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "nctorus/errors.hpp"
#include "nctorus/rational.hpp"
#include "nctorus/scalar.hpp"

namespace nctorus {

// Dense row-major matrix over an exact commutative ring.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T())
        : rows_(rows), cols_(cols), data_(rows * cols, std::move(fill)) {}

    static Matrix identity(std::size_t n, const T& one, const T& zero) {
        Matrix m(n, n, zero);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const Matrix&) const = default;

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw DimensionMismatch("matrix product shape");
        Matrix r(rows_, o.cols_);
        if (cols_ == 0) return r;
        // seed each sum from the first term so the accumulator inherits the
        // scalar mode of the operands
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < o.cols_; ++j) {
                T acc = (*this)(i, 0) * o(0, j);
                for (std::size_t k = 1; k < cols_; ++k)
                    acc = acc + (*this)(i, k) * o(k, j);
                r(i, j) = std::move(acc);
            }
        return r;
    }

    Matrix operator+(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix sum shape");
        Matrix r = *this;
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = r.data_[i] + o.data_[i];
        return r;
    }

    Matrix operator-(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix diff shape");
        Matrix r = *this;
        for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = r.data_[i] - o.data_[i];
        return r;
    }

    Matrix submatrix(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        Matrix s(nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) s(i, j) = (*this)(r0 + i, c0 + j);
        return s;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> data_;
};

using IntMatrix = Matrix<Int>;
using ScalarMatrix = Matrix<Scalar>;

inline IntMatrix int_identity(std::size_t n) { return IntMatrix::identity(n, Int(1), Int(0)); }

inline ScalarMatrix scalar_identity(std::size_t n, const ScalarContext& ctx) {
    return ScalarMatrix::identity(n, Scalar::one(ctx), Scalar::zero(ctx));
}

inline ScalarMatrix lift_int_matrix(const IntMatrix& m, const ScalarContext& ctx) {
    ScalarMatrix r(m.rows(), m.cols(), Scalar::zero(ctx));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            r(i, j) = Scalar::from_rational_in(ctx, Rat(m(i, j)));
    return r;
}

// Fraction-free (Bareiss) determinant over the integers. All interior
// divisions are exact.
inline Int det_bareiss(IntMatrix m) {
    const std::size_t n = m.rows();
    if (n != m.cols()) throw DimensionMismatch("determinant needs a square matrix");
    if (n == 0) return 1;
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t piv = k + 1;
            while (piv < n && m(piv, k) == 0) ++piv;
            if (piv == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
        prev = m(k, k);
    }
    return sign > 0 ? m(n - 1, n - 1) : Int(-m(n - 1, n - 1));
}

// Determinant over Scalar by Gaussian elimination (numeric modes) with the
// first nonzero pivot; exact since Scalar division is exact.
inline Scalar det_scalar(ScalarMatrix m, const ScalarContext& ctx) {
    const std::size_t n = m.rows();
    if (n != m.cols()) throw DimensionMismatch("determinant needs a square matrix");
    Scalar det = Scalar::one(ctx);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && m(piv, k).is_zero()) ++piv;
        if (piv == n) return Scalar::zero(ctx);
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
            det = -det;
        }
        det = det * m(k, k);
        const Scalar inv = m(k, k).invert();
        for (std::size_t i = k + 1; i < n; ++i) {
            const Scalar f = m(i, k) * inv;
            for (std::size_t j = k; j < n; ++j) m(i, j) = m(i, j) - f * m(k, j);
        }
    }
    return det;
}

// Gauss-Jordan inverse over Scalar (numeric modes). nullopt when singular.
inline std::optional<ScalarMatrix> invert_scalar(ScalarMatrix m, const ScalarContext& ctx) {
    const std::size_t n = m.rows();
    if (n != m.cols()) throw DimensionMismatch("inverse needs a square matrix");
    ScalarMatrix inv = scalar_identity(n, ctx);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && m(piv, k).is_zero()) ++piv;
        if (piv == n) return std::nullopt;
        if (piv != k)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(m(k, j), m(piv, j));
                std::swap(inv(k, j), inv(piv, j));
            }
        const Scalar pivot_inv = m(k, k).invert();
        for (std::size_t j = 0; j < n; ++j) {
            m(k, j) = m(k, j) * pivot_inv;
            inv(k, j) = inv(k, j) * pivot_inv;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || m(i, k).is_zero()) continue;
            const Scalar f = m(i, k);
            for (std::size_t j = 0; j < n; ++j) {
                m(i, j) = m(i, j) - f * m(k, j);
                inv(i, j) = inv(i, j) - f * inv(k, j);
            }
        }
    }
    return inv;
}

// Inverse of a unimodular integer matrix, again integral.
inline IntMatrix invert_unimodular(const IntMatrix& m) {
    const Int d = det_bareiss(m);
    if (d != 1 && d != -1) throw NotUnimodular("matrix determinant is not +-1");
    const auto ctx = ScalarContext::rational();
    auto inv = invert_scalar(lift_int_matrix(m, ctx), ctx);
    IntMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const Rat& v = (*inv)(i, j).as_rational();
            r(i, j) = v.get_num(); // denominator is 1 for unimodular input
        }
    return r;
}

inline IntMatrix int_power(const IntMatrix& m, long k) {
    const std::size_t n = m.rows();
    if (k < 0) return int_power(invert_unimodular(m), -k);
    IntMatrix acc = int_identity(n), base = m;
    while (k > 0) {
        if (k & 1) acc = acc * base;
        base = base * base;
        k >>= 1;
    }
    return acc;
}

inline bool is_zero_matrix(const IntMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0) return false;
    return true;
}

} // namespace nctorus
