#include "statdec/matrix.hpp"

#include <cmath>
#include <string>

#include "statdec/errors.hpp"
#include "statdec/parallel.hpp"

namespace statdec {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    Matrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != c) throw ShapeError("from_rows: ragged initializer");
        std::size_t j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

bool Matrix::all_finite() const {
    for (double v : data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

std::string shape_str(const Matrix& a) {
    return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("matmul: inner dimensions differ, a is " + shape_str(a) + ", b is " + shape_str(b));
    }
    Matrix c(a.rows(), b.cols());
    const std::size_t inner = a.cols();
    const std::size_t n = b.cols();
    const auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            double* crow = c.data() + i * n;
            const double* arow = a.data() + i * inner;
            for (std::size_t k = 0; k < inner; ++k) {
                const double aik = arow[k];
                const double* brow = b.data() + k * n;
                for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
            }
        }
    };
    // Row-parallel: each output row is owned by one thread and accumulated in
    // a fixed k order, so the result does not depend on the thread count.
    if (a.rows() * inner * n >= (std::size_t{1} << 21)) {
        parallel_chunks(a.rows(), work);
    } else {
        work(0, a.rows());
    }
    return c;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    }
    return t;
}

Matrix pairwise_sq_dist(const Matrix& z, const Matrix& m) {
    if (z.cols() != m.cols()) {
        throw ShapeError("pairwise_sq_dist: widths differ, z is " + shape_str(z) + ", m is " + shape_str(m));
    }
    Matrix d(z.rows(), m.rows());
    const auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            for (std::size_t j = 0; j < m.rows(); ++j) {
                double acc = 0.0;
                for (std::size_t k = 0; k < z.cols(); ++k) {
                    const double diff = z(i, k) - m(j, k);
                    acc += diff * diff;
                }
                d(i, j) = acc;
            }
        }
    };
    if (z.rows() * m.rows() * z.cols() >= (std::size_t{1} << 21)) {
        parallel_chunks(z.rows(), work);
    } else {
        work(0, z.rows());
    }
    return d;
}

Matrix row_normalize(const Matrix& a) {
    Matrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) sum += a(i, j);
        if (!(sum > 0.0)) {
            throw DegenerateDataError("row_normalize: row " + std::to_string(i) + " has non-positive sum " +
                                      std::to_string(sum));
        }
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) / sum;
    }
    return out;
}

Matrix glorot_init(Rng& rng, std::size_t fan_in, std::size_t fan_out) {
    if (fan_in == 0 || fan_out == 0) {
        throw ParameterError("glorot_init: fan_in and fan_out must be at least 1");
    }
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    Matrix m(fan_in, fan_out);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-limit, limit);
    return m;
}

std::vector<double> col_sum(const Matrix& a) {
    std::vector<double> s(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) s[j] += a(i, j);
    }
    return s;
}

Matrix take_rows(const Matrix& a, std::span<const std::size_t> indices) {
    Matrix out(indices.size(), a.cols());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const auto src = a.row(indices[i]);
        auto dst = out.row(i);
        for (std::size_t j = 0; j < a.cols(); ++j) dst[j] = src[j];
    }
    return out;
}

}  // namespace statdec
