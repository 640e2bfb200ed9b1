/*
 * Copyright 2026 hafnia contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "hafnia/scalar.hpp"

namespace hafnia {

/// Dense rectangular matrix, row-major. Plumbing type for off-diagonal
/// blocks, Gram factors and elimination workspaces.
template <typename T>
class Matrix {
  public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols, const T& fill = T(0))
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
    }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    T& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    const T& operator()(int i, int j) const {
        return data_[static_cast<std::size_t>(i) * cols_ + j];
    }

    Matrix transposed() const {
        Matrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    /// Submatrix by explicit 0-based row/column index lists.
    Matrix select(const std::vector<int>& row_idx, const std::vector<int>& col_idx) const {
        Matrix s(static_cast<int>(row_idx.size()), static_cast<int>(col_idx.size()));
        for (std::size_t i = 0; i < row_idx.size(); ++i)
            for (std::size_t j = 0; j < col_idx.size(); ++j)
                s(static_cast<int>(i), static_cast<int>(j)) = (*this)(row_idx[i], col_idx[j]);
        return s;
    }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    bool is_zero() const {
        for (const T& v : data_)
            if (!(v == T(0))) return false;
        return true;
    }

  private:
    int rows_, cols_;
    std::vector<T> data_;
};

template <typename T>
Matrix<T> matmul(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul shape mismatch");
    Matrix<T> c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const T& aik = a(i, k);
            if (aik == T(0)) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += T(aik * b(k, j));
        }
    return c;
}

enum class MatrixKind { General, Symmetric, Skew };

inline const char* kind_name(MatrixKind k) {
    switch (k) {
        case MatrixKind::Symmetric: return "symmetric";
        case MatrixKind::Skew: return "skew";
        default: return "general";
    }
}

/// Square matrix tagged with a structural kind. The tag is validated at
/// construction: Symmetric needs a_ij = a_ji, Skew needs a_ij = -a_ji with a
/// zero diagonal. Entries are immutable afterwards.
template <typename T>
class SquareMatrix {
  public:
    SquareMatrix() : n_(0), kind_(MatrixKind::General) {}

    SquareMatrix(Matrix<T> entries, MatrixKind kind) : n_(entries.rows()), kind_(kind), m_(std::move(entries)) {
        if (m_.rows() != m_.cols()) throw std::invalid_argument("matrix not square");
        validate();
    }

    SquareMatrix(int n, MatrixKind kind) : n_(n), kind_(kind), m_(n, n) {}

    static SquareMatrix identity(int n, MatrixKind kind = MatrixKind::Symmetric) {
        return SquareMatrix(Matrix<T>::identity(n), kind);
    }

    /// Builds from nested initializer-style data; rows must all have length n.
    static SquareMatrix from_rows(const std::vector<std::vector<T>>& rows, MatrixKind kind) {
        const int n = static_cast<int>(rows.size());
        Matrix<T> m(n, n);
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(rows[i].size()) != n)
                throw std::invalid_argument("ragged matrix rows");
            for (int j = 0; j < n; ++j) m(i, j) = rows[i][j];
        }
        return SquareMatrix(std::move(m), kind);
    }

    int n() const { return n_; }
    MatrixKind kind() const { return kind_; }
    const Matrix<T>& mat() const { return m_; }

    const T& operator()(int i, int j) const { return m_(i, j); }

    /// Mutable access for builders; call validate() (or revalidate via the
    /// Matrix constructor) once filling is done.
    T& at(int i, int j) { return m_(i, j); }

    void validate() const {
        if (kind_ == MatrixKind::Symmetric) {
            for (int i = 0; i < n_; ++i)
                for (int j = i + 1; j < n_; ++j)
                    if (!(m_(i, j) == m_(j, i)))
                        throw std::invalid_argument("matrix tagged symmetric is not symmetric");
        } else if (kind_ == MatrixKind::Skew) {
            for (int i = 0; i < n_; ++i) {
                if (!(m_(i, i) == T(0)))
                    throw std::invalid_argument("skew matrix with nonzero diagonal");
                for (int j = i + 1; j < n_; ++j)
                    if (!(T(m_(i, j) + m_(j, i)) == T(0)))
                        throw std::invalid_argument("matrix tagged skew is not antisymmetric");
            }
        }
    }

    /// Principal submatrix on a sorted 0-based index list; kind is inherited.
    SquareMatrix principal(const std::vector<int>& idx) const {
        Matrix<T> s = m_.select(idx, idx);
        SquareMatrix r;
        r.n_ = s.rows();
        r.kind_ = kind_;
        r.m_ = std::move(s);
        return r;
    }

    /// General (non-principal) square selection; result is kind General.
    SquareMatrix select(const std::vector<int>& rows, const std::vector<int>& cols) const {
        if (rows.size() != cols.size())
            throw std::invalid_argument("non-square selection");
        Matrix<T> s = m_.select(rows, cols);
        SquareMatrix r;
        r.n_ = s.rows();
        r.kind_ = MatrixKind::General;
        r.m_ = std::move(s);
        return r;
    }

    bool operator==(const SquareMatrix& o) const { return kind_ == o.kind_ && m_ == o.m_; }

  private:
    int n_;
    MatrixKind kind_;
    Matrix<T> m_;
};

inline double entry_to_double(const Rational& x) { return x.get_d(); }
inline double entry_to_double(double x) { return x; }

template <typename T>
Matrix<double> to_float(const Matrix<T>& m) {
    Matrix<double> f(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) f(i, j) = entry_to_double(m(i, j));
    return f;
}

template <typename T>
SquareMatrix<double> to_float(const SquareMatrix<T>& m) {
    return SquareMatrix<double>(to_float(m.mat()), m.kind());
}

}  // namespace hafnia
