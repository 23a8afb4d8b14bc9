#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gtrs/error.hpp"

namespace gtrs {

/// Dense float64 array of rank 1-3, row-major. The universal value type of
/// the numeric core; all layer inputs, outputs, and parameters are Tensors.
class Tensor {
  public:
    Tensor() = default;
    explicit Tensor(std::vector<int> shape);
    Tensor(std::vector<int> shape, std::vector<double> data);

    static Tensor zeros(std::vector<int> shape) { return Tensor(std::move(shape)); }
    static Tensor full(std::vector<int> shape, double value);
    static Tensor ones(std::vector<int> shape) { return full(std::move(shape), 1.0); }
    static Tensor identity(int n);
    static Tensor scalar(double value) { return Tensor({1}, {value}); }
    static Tensor row(std::vector<double> values);

    int rank() const { return static_cast<int>(shape_.size()); }
    const std::vector<int>& shape() const { return shape_; }
    int dim(int i) const { return shape_[static_cast<std::size_t>(i)]; }
    std::int64_t size() const { return static_cast<std::int64_t>(data_.size()); }

    // Rank-2 conveniences.
    int rows() const;
    int cols() const;

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& vec() { return data_; }
    const std::vector<double>& vec() const { return data_; }

    double& operator[](std::int64_t i) { return data_[static_cast<std::size_t>(i)]; }
    double operator[](std::int64_t i) const { return data_[static_cast<std::size_t>(i)]; }

    double& at(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    double at(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    double& at3(int i, int j, int k);
    double at3(int i, int j, int k) const;

    double item() const;  ///< value of a single-element tensor

    bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
    bool all_finite() const;
    double max_abs() const;

    std::string shape_str() const;

  private:
    std::vector<int> shape_;
    std::vector<double> data_;
    int cols_ = 0;  // stride of the leading row index, cached for at()
};

std::string shape_str(const std::vector<int>& shape);

/// Throws ShapeError naming both shapes unless they are equal.
void check_same_shape(const Tensor& a, const Tensor& b, const char* op);

}  // namespace gtrs
