#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "statdec/rng.hpp"

namespace statdec {

// Dense row-major matrix of 64-bit floats. The universal carrier for data
// batches, activations, soft assignments, targets, and centroids.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    bool all_finite() const;

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// "r x c" for error messages.
std::string shape_str(const Matrix& a);

// Standard matrix product; throws ShapeError naming both shapes.
Matrix matmul(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);

// (z.rows x m.rows) matrix of squared Euclidean distances between rows.
Matrix pairwise_sq_dist(const Matrix& z, const Matrix& m);

// Divides each row by its sum. Throws DegenerateDataError naming the first
// row whose sum is zero or negative.
Matrix row_normalize(const Matrix& a);

// Uniform Glorot initialization on [-sqrt(6/(fan_in+fan_out)), +...].
Matrix glorot_init(Rng& rng, std::size_t fan_in, std::size_t fan_out);

std::vector<double> col_sum(const Matrix& a);

// Copies the listed rows of a into a new matrix, in the listed order.
Matrix take_rows(const Matrix& a, std::span<const std::size_t> indices);

}  // namespace statdec
