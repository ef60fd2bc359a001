#include "surgecast/tensor.hpp"

#include <cmath>
#include <utility>

#include "surgecast/error.hpp"

namespace surgecast {

Tensor2::Tensor2(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw ShapeError("tensor data length " + std::to_string(data_.size()) +
                         " does not match shape " + shape_str());
    }
}

Tensor2 Tensor2::row_vector(std::vector<double> values) {
    std::size_t n = values.size();
    return Tensor2(1, n, std::move(values));
}

std::string Tensor2::shape_str() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
}

bool Tensor2::all_finite() const {
    for (double v : data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

Tensor2& Tensor2::operator+=(const Tensor2& other) {
    if (!same_shape(other)) {
        throw ShapeError("tensor add shape mismatch: " + shape_str() + " vs " + other.shape_str());
    }
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

Tensor2& Tensor2::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

Tensor2 matmul(const Tensor2& a, const Tensor2& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("matmul shape mismatch: " + a.shape_str() + " vs " + b.shape_str());
    }
    Tensor2 c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double* crow = c.row(i).data();
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            const double* brow = b.row(k).data();
            for (std::size_t j = 0; j < b.cols(); ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

Tensor2 matmul_at_b(const Tensor2& a, const Tensor2& b) {
    if (a.rows() != b.rows()) {
        throw ShapeError("matmul_at_b shape mismatch: " + a.shape_str() + " vs " + b.shape_str());
    }
    Tensor2 c(a.cols(), b.cols());
    for (std::size_t k = 0; k < a.rows(); ++k) {
        const double* arow = a.row(k).data();
        const double* brow = b.row(k).data();
        for (std::size_t i = 0; i < a.cols(); ++i) {
            const double aki = arow[i];
            if (aki == 0.0) continue;
            double* crow = c.row(i).data();
            for (std::size_t j = 0; j < b.cols(); ++j) crow[j] += aki * brow[j];
        }
    }
    return c;
}

Tensor2 matmul_a_bt(const Tensor2& a, const Tensor2& b) {
    if (a.cols() != b.cols()) {
        throw ShapeError("matmul_a_bt shape mismatch: " + a.shape_str() + " vs " + b.shape_str());
    }
    Tensor2 c(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.rows(); ++j) {
            c(i, j) = dot(a.row(i), b.row(j));
        }
    }
    return c;
}

Tensor2 transposed(const Tensor2& a) {
    Tensor2 c(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* arow = a.row(i).data();
        for (std::size_t j = 0; j < a.cols(); ++j) c(j, i) = arow[j];
    }
    return c;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace surgecast
