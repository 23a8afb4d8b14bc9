#include "gtrs/tensor.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace gtrs {

namespace {

std::int64_t checked_numel(const std::vector<int>& shape) {
    if (shape.empty() || shape.size() > 3) {
        throw ShapeError("tensor rank must be 1-3, got " + gtrs::shape_str(shape));
    }
    std::int64_t n = 1;
    for (int d : shape) {
        if (d <= 0) throw ShapeError("non-positive tensor dimension in " + gtrs::shape_str(shape));
        n *= d;
    }
    return n;
}

}  // namespace

Tensor::Tensor(std::vector<int> shape) : shape_(std::move(shape)) {
    const std::int64_t n = checked_numel(shape_);
    data_.assign(static_cast<std::size_t>(n), 0.0);
    cols_ = shape_.size() >= 2 ? shape_.back() : 0;
}

Tensor::Tensor(std::vector<int> shape, std::vector<double> data) : shape_(std::move(shape)), data_(std::move(data)) {
    const std::int64_t n = checked_numel(shape_);
    if (n != static_cast<std::int64_t>(data_.size())) {
        throw ShapeError("tensor data length " + std::to_string(data_.size()) + " does not match shape " +
                         gtrs::shape_str(shape_));
    }
    cols_ = shape_.size() >= 2 ? shape_.back() : 0;
}

Tensor Tensor::full(std::vector<int> shape, double value) {
    Tensor t(std::move(shape));
    for (double& x : t.data_) x = value;
    return t;
}

Tensor Tensor::identity(int n) {
    Tensor t({n, n});
    for (int i = 0; i < n; ++i) t.at(i, i) = 1.0;
    return t;
}

Tensor Tensor::row(std::vector<double> values) {
    const int n = static_cast<int>(values.size());
    return Tensor({n}, std::move(values));
}

int Tensor::rows() const {
    if (rank() != 2) throw ShapeError("rows() on tensor of shape " + gtrs::shape_str(shape_));
    return shape_[0];
}

int Tensor::cols() const {
    if (rank() != 2) throw ShapeError("cols() on tensor of shape " + gtrs::shape_str(shape_));
    return shape_[1];
}

double& Tensor::at3(int i, int j, int k) {
    const std::int64_t plane = static_cast<std::int64_t>(shape_[1]) * shape_[2];
    return data_[static_cast<std::size_t>(i * plane + static_cast<std::int64_t>(j) * shape_[2] + k)];
}

double Tensor::at3(int i, int j, int k) const {
    const std::int64_t plane = static_cast<std::int64_t>(shape_[1]) * shape_[2];
    return data_[static_cast<std::size_t>(i * plane + static_cast<std::int64_t>(j) * shape_[2] + k)];
}

double Tensor::item() const {
    if (data_.size() != 1) throw ShapeError("item() on tensor of shape " + gtrs::shape_str(shape_));
    return data_[0];
}

bool Tensor::all_finite() const {
    for (double x : data_) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

double Tensor::max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
}

std::string Tensor::shape_str() const { return gtrs::shape_str(shape_); }

std::string shape_str(const std::vector<int>& shape) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) os << ',';
        os << shape[i];
    }
    os << ']';
    return os.str();
}

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
    if (!a.same_shape(b)) {
        throw ShapeError(std::string(op) + ": shape mismatch " + a.shape_str() + " vs " + b.shape_str());
    }
}

}  // namespace gtrs
