#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace surgecast {

// Row-major dense matrix of doubles. All model math runs in 64-bit
// precision so the finite-difference checks stay meaningful.
class Tensor2 {
public:
    Tensor2() = default;
    Tensor2(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Tensor2(std::size_t rows, std::size_t cols, std::vector<double> data);

    static Tensor2 row_vector(std::vector<double> values);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool same_shape(const Tensor2& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }
    std::string shape_str() const;

    bool all_finite() const;

    void fill(double v) { data_.assign(data_.size(), v); }

    Tensor2& operator+=(const Tensor2& other);
    Tensor2& operator*=(double s);

    bool operator==(const Tensor2& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// C = A * B. Throws ShapeError when inner dimensions disagree.
Tensor2 matmul(const Tensor2& a, const Tensor2& b);

// C = A^T * B without forming the transpose.
Tensor2 matmul_at_b(const Tensor2& a, const Tensor2& b);

// C = A * B^T without forming the transpose.
Tensor2 matmul_a_bt(const Tensor2& a, const Tensor2& b);

Tensor2 transposed(const Tensor2& a);

double dot(std::span<const double> a, std::span<const double> b);

} // namespace surgecast
