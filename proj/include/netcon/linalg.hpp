#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace netcon {

using Vec = std::vector<double>;
using Complex = std::complex<double>;

/// Dense row-major real matrix. Desk-scale sizes only; no sparsity.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);
    /// n-by-n matrix with every entry equal to `value`.
    static Matrix constant(std::size_t n, double value);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Matrix transposed() const;
    Matrix operator*(const Matrix& rhs) const;
    Matrix operator+(const Matrix& rhs) const;
    Matrix operator-(const Matrix& rhs) const;
    Matrix& operator*=(double s);
    Vec operator*(const Vec& v) const;

    /// Copies `block` into this matrix with upper-left corner at (i0, j0).
    void set_block(std::size_t i0, std::size_t j0, const Matrix& block);

    double max_abs() const;
    double inf_norm() const;   // max row sum of |a_ij|
    double frobenius_norm() const;
    double trace() const;

    bool is_symmetric(double tol) const;

    const std::vector<double>& data() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Small vector helpers used throughout.
double dot(const Vec& a, const Vec& b);
double inf_norm(const Vec& v);
Vec add_scaled(const Vec& a, double s, const Vec& b);  // a + s*b
double vec_sum(const Vec& v);
double vec_mean(const Vec& v);
Vec ones(std::size_t n, double value = 1.0);

}  // namespace netcon
