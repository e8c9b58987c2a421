#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctk/arith.hpp"
#include "ctk/errors.hpp"

namespace ctk {

// Dense row-major matrix. Vectors are rows throughout the toolkit: a linear map
// acts as x -> x * M and a lattice basis is a matrix whose rows are the basis vectors.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
    Matrix(std::size_t rows, std::size_t cols, const T& fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    static Matrix from_rows(const std::vector<std::vector<T>>& rows, std::size_t cols_if_empty = 0) {
        if (rows.empty()) return Matrix(0, cols_if_empty);
        Matrix m(rows.size(), rows.front().size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.cols_) throw DomainError("ragged matrix rows");
            std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + static_cast<std::ptrdiff_t>(i * m.cols_));
        }
        return m;
    }

    static Matrix from_rows(std::initializer_list<std::initializer_list<long>> rows) {
        std::vector<std::vector<T>> v;
        for (const auto& r : rows) {
            std::vector<T> row;
            for (long x : r) row.emplace_back(x);
            v.push_back(std::move(row));
        }
        return from_rows(v);
    }

    static Matrix diagonal(const std::vector<T>& d) {
        Matrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

    T& operator()(std::size_t i, std::size_t j) {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }
    const T& operator()(std::size_t i, std::size_t j) const {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }

    std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    std::vector<T> row_vector(std::size_t i) const { return {row(i).begin(), row(i).end()}; }

    std::vector<std::vector<T>> to_rows() const {
        std::vector<std::vector<T>> out;
        for (std::size_t i = 0; i < rows_; ++i) out.push_back(row_vector(i));
        return out;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](const T& x) { return x == 0; });
    }

    bool is_square() const noexcept { return rows_ == cols_; }

    Matrix select_rows(std::size_t begin, std::size_t end) const {
        Matrix m(end - begin, cols_);
        for (std::size_t i = begin; i < end; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(i - begin, j) = (*this)(i, j);
        return m;
    }

    Matrix select_rows(const std::vector<std::size_t>& idx) const {
        Matrix m(idx.size(), cols_);
        for (std::size_t i = 0; i < idx.size(); ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(idx[i], j);
        return m;
    }

    Matrix select_cols(std::size_t begin, std::size_t end) const {
        Matrix m(rows_, end - begin);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = begin; j < end; ++j) m(i, j - begin) = (*this)(i, j);
        return m;
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
    }
    // row[dst] += k * row[src]
    void add_row_multiple(std::size_t dst, std::size_t src, const T& k) {
        if (k == 0) return;
        for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += k * (*this)(src, j);
    }
    // col[dst] += k * col[src]
    void add_col_multiple(std::size_t dst, std::size_t src, const T& k) {
        if (k == 0) return;
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += k * (*this)(i, src);
    }
    void negate_row(std::size_t i) {
        for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
    }
    void negate_col(std::size_t j) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = -(*this)(i, j);
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw DomainError("matrix dimension mismatch in product");
        Matrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DomainError("matrix dimension mismatch in sum");
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
        return a;
    }

    friend Matrix operator-(Matrix a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DomainError("matrix dimension mismatch in difference");
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
        return a;
    }

    friend Matrix operator*(const T& s, Matrix a) {
        for (auto& x : a.data_) x *= s;
        return a;
    }

    const std::vector<T>& data() const noexcept { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using IntMatrix = Matrix<Int>;
using RatMatrix = Matrix<Rat>;
using IntVector = std::vector<Int>;
using RatVector = std::vector<Rat>;

template <class T>
Matrix<T> vstack(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.rows() == 0) return b;
    if (b.rows() == 0) return a;
    if (a.cols() != b.cols()) throw DomainError("vstack column mismatch");
    Matrix<T> m(a.rows() + b.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) m(a.rows() + i, j) = b(i, j);
    return m;
}

template <class T>
Matrix<T> hstack(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.rows() != b.rows()) throw DomainError("hstack row mismatch");
    Matrix<T> m(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) m(i, a.cols() + j) = b(i, j);
    }
    return m;
}

RatMatrix to_rational(const IntMatrix& m);
// Multiplies by the lcm of all denominators; returns the scaled integer matrix and the lcm.
IntMatrix clear_denominators(const RatMatrix& m, Int* denominator = nullptr);
// Row by row: each row is scaled by its own denominator lcm and divided by its content.
IntMatrix primitive_rows(const RatMatrix& m);
std::optional<IntMatrix> to_integer(const RatMatrix& m);
Int content(std::span<const Int> v);

std::string to_string(const IntMatrix& m);
std::string to_string(const RatMatrix& m);

}  // namespace ctk
