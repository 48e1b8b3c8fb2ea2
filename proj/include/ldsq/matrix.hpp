#pragma once

#include "ldsq/scalar.hpp"

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace ldsq {

template <class T>
using Vec = std::vector<T>;

/// Small dense row-major matrix. Sizes here never exceed a few dozen, so
/// everything is straightforward value semantics.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<T>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw error(ErrorKind::DimensionMismatch, "ragged matrix initializer");
            data_.insert(data_.end(), row.begin(), row.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    static Matrix diagonal(std::span<const T> d) {
        Matrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    /// Matrix whose columns are the given vectors.
    static Matrix from_columns(const std::vector<Vec<T>>& cols) {
        if (cols.empty()) return {};
        Matrix m(cols.front().size(), cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].size() != m.rows_) throw error(ErrorKind::DimensionMismatch, "column length mismatch");
            for (std::size_t i = 0; i < m.rows_; ++i) m(i, j) = cols[j][i];
        }
        return m;
    }

    static Matrix from_rows(const std::vector<Vec<T>>& rows) {
        if (rows.empty()) return {};
        Matrix m(rows.size(), rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.cols_) throw error(ErrorKind::DimensionMismatch, "row length mismatch");
            for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Vec<T> row(std::size_t i) const { return Vec<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_); }
    Vec<T> col(std::size_t j) const {
        Vec<T> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    /// Copy of the block [r0, r0+nr) x [c0, c0+nc).
    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        Matrix b(nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
        return b;
    }

    void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw error(ErrorKind::DimensionMismatch, "matrix product shape mismatch");
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if (aik == T(0)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend Vec<T> operator*(const Matrix& a, std::span<const T> x) {
        if (a.cols_ != x.size()) throw error(ErrorKind::DimensionMismatch, "matrix-vector shape mismatch");
        Vec<T> y(a.rows_, T(0));
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t j = 0; j < a.cols_; ++j) y[i] += a(i, j) * x[j];
        return y;
    }
    friend Vec<T> operator*(const Matrix& a, const Vec<T>& x) { return a * std::span<const T>(x); }

    friend Matrix operator+(Matrix a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw error(ErrorKind::DimensionMismatch, "matrix sum shape mismatch");
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
        return a;
    }
    friend Matrix operator-(Matrix a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw error(ErrorKind::DimensionMismatch, "matrix difference shape mismatch");
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
        return a;
    }
    friend Matrix operator*(const T& s, Matrix a) {
        for (auto& v : a.data_) v *= s;
        return a;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    const std::vector<T>& data() const noexcept { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

/// Largest absolute entry.
inline double max_abs(const Matrix<double>& m) {
    double r = 0.0;
    for (double v : m.data()) r = std::max(r, std::fabs(v));
    return r;
}

inline double max_abs(std::span<const double> v) {
    double r = 0.0;
    for (double x : v) r = std::max(r, std::fabs(x));
    return r;
}

template <Scalar T>
Matrix<double> to_double(const Matrix<T>& m) {
    Matrix<double> out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = to_double(m(i, j));
    return out;
}

/// Gauss-Jordan inverse with partial pivoting. Throws on an (exactly or numerically) singular matrix.
template <Scalar T>
Matrix<T> inverse(const Matrix<T>& a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw error(ErrorKind::DimensionMismatch, "inverse of a non-square matrix");
    Matrix<T> m = a;
    Matrix<T> inv = Matrix<T>::identity(n);
    double scale = 1.0;
    if constexpr (!is_exact_v<T>) scale = std::max(1.0, max_abs(a));
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (abs_value(m(r, c)) > abs_value(m(piv, c))) piv = r;
        if (decide_sign(m(piv, c), scale).sign == 0)
            throw error(ErrorKind::InvalidArgument, "singular matrix has no inverse");
        m.swap_rows(c, piv);
        inv.swap_rows(c, piv);
        const T p = m(c, c);
        for (std::size_t j = 0; j < n; ++j) {
            m(c, j) /= p;
            inv(c, j) /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const T f = m(r, c);
            if (f == T(0)) continue;
            for (std::size_t j = 0; j < n; ++j) {
                m(r, j) -= f * m(c, j);
                inv(r, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

/// Determinant by partial-pivot elimination.
template <Scalar T>
T determinant(const Matrix<T>& a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw error(ErrorKind::DimensionMismatch, "determinant of a non-square matrix");
    Matrix<T> m = a;
    T det(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (abs_value(m(r, c)) > abs_value(m(piv, c))) piv = r;
        if (m(piv, c) == T(0)) return T(0);
        if (piv != c) {
            m.swap_rows(c, piv);
            det = -det;
        }
        det *= m(c, c);
        for (std::size_t r = c + 1; r < n; ++r) {
            const T f = m(r, c) / m(c, c);
            if (f == T(0)) continue;
            for (std::size_t j = c; j < n; ++j) m(r, j) -= f * m(c, j);
        }
    }
    return det;
}

} // namespace ldsq
