#include "gtrs/ops.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace gtrs {
namespace ops {

namespace {

using EMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CMap = Eigen::Map<const EMat>;
using MMap = Eigen::Map<EMat>;

CMap cmap(const Tensor& t) { return CMap(t.data(), t.rows(), t.cols()); }

void check_rank2(const Tensor& t, const char* op) {
    if (t.rank() != 2) throw ShapeError(std::string(op) + ": expected rank-2 tensor, got " + t.shape_str());
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
    check_rank2(a, "matmul");
    check_rank2(b, "matmul");
    if (a.cols() != b.rows()) {
        throw ShapeError("matmul: inner dims differ, " + a.shape_str() + " * " + b.shape_str());
    }
    Tensor c({a.rows(), b.cols()});
    MMap(c.data(), c.rows(), c.cols()).noalias() = cmap(a) * cmap(b);
    return c;
}

Tensor matmul_nt(const Tensor& a, const Tensor& b) {
    check_rank2(a, "matmul_nt");
    check_rank2(b, "matmul_nt");
    if (a.cols() != b.cols()) {
        throw ShapeError("matmul_nt: inner dims differ, " + a.shape_str() + " * " + b.shape_str() + "^T");
    }
    Tensor c({a.rows(), b.rows()});
    MMap(c.data(), c.rows(), c.cols()).noalias() = cmap(a) * cmap(b).transpose();
    return c;
}

Tensor matmul_tn(const Tensor& a, const Tensor& b) {
    check_rank2(a, "matmul_tn");
    check_rank2(b, "matmul_tn");
    if (a.rows() != b.rows()) {
        throw ShapeError("matmul_tn: inner dims differ, " + a.shape_str() + "^T * " + b.shape_str());
    }
    Tensor c({a.cols(), b.cols()});
    MMap(c.data(), c.rows(), c.cols()).noalias() = cmap(a).transpose() * cmap(b);
    return c;
}

Tensor transpose(const Tensor& a) {
    check_rank2(a, "transpose");
    Tensor c({a.cols(), a.rows()});
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c.at(j, i) = a.at(i, j);
    return c;
}

Tensor add(const Tensor& a, const Tensor& b) {
    check_same_shape(a, b, "add");
    Tensor c = a;
    for (std::int64_t i = 0; i < c.size(); ++i) c[i] += b[i];
    return c;
}

Tensor sub(const Tensor& a, const Tensor& b) {
    check_same_shape(a, b, "sub");
    Tensor c = a;
    for (std::int64_t i = 0; i < c.size(); ++i) c[i] -= b[i];
    return c;
}

Tensor mul(const Tensor& a, const Tensor& b) {
    check_same_shape(a, b, "mul");
    Tensor c = a;
    for (std::int64_t i = 0; i < c.size(); ++i) c[i] *= b[i];
    return c;
}

Tensor scale(const Tensor& a, double s) {
    Tensor c = a;
    for (std::int64_t i = 0; i < c.size(); ++i) c[i] *= s;
    return c;
}

Tensor add_row_broadcast(const Tensor& a, const Tensor& b) {
    check_rank2(a, "add_row_broadcast");
    if (b.rank() != 1 || b.dim(0) != a.cols()) {
        throw ShapeError("add_row_broadcast: " + a.shape_str() + " + row " + b.shape_str());
    }
    Tensor c = a;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c.at(i, j) += b[j];
    return c;
}

Tensor add_col_broadcast(const Tensor& a, const Tensor& b) {
    check_rank2(a, "add_col_broadcast");
    if (b.rank() != 1 || b.dim(0) != a.rows()) {
        throw ShapeError("add_col_broadcast: " + a.shape_str() + " + col " + b.shape_str());
    }
    Tensor c = a;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c.at(i, j) += b[i];
    return c;
}

Tensor mul_col_broadcast(const Tensor& a, const Tensor& g) {
    check_rank2(a, "mul_col_broadcast");
    if (g.rank() != 1 || g.dim(0) != a.rows()) {
        throw ShapeError("mul_col_broadcast: " + a.shape_str() + " * col " + g.shape_str());
    }
    Tensor c = a;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c.at(i, j) *= g[i];
    return c;
}

Tensor softmax_rows(const Tensor& a) {
    check_rank2(a, "softmax_rows");
    Tensor c = a;
    for (int i = 0; i < a.rows(); ++i) {
        double mx = a.at(i, 0);
        for (int j = 1; j < a.cols(); ++j) mx = std::max(mx, a.at(i, j));
        double s = 0.0;
        for (int j = 0; j < a.cols(); ++j) {
            const double e = std::exp(a.at(i, j) - mx);
            c.at(i, j) = e;
            s += e;
        }
        for (int j = 0; j < a.cols(); ++j) c.at(i, j) /= s;
    }
    return c;
}

double gelu_scalar(double x) { return 0.5 * x * (1.0 + std::erf(x * M_SQRT1_2)); }

double gelu_grad_scalar(double x) {
    const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    return 0.5 * (1.0 + std::erf(x * M_SQRT1_2)) + x * phi;
}

Tensor gelu(const Tensor& a) {
    Tensor c = a;
    for (std::int64_t i = 0; i < c.size(); ++i) c[i] = gelu_scalar(a[i]);
    return c;
}

Tensor sigmoid(const Tensor& a) {
    Tensor c = a;
    for (std::int64_t i = 0; i < c.size(); ++i) c[i] = 1.0 / (1.0 + std::exp(-a[i]));
    return c;
}

Tensor layer_norm_rows(const Tensor& a, double eps) {
    check_rank2(a, "layer_norm_rows");
    Tensor c = a;
    const int n = a.cols();
    for (int i = 0; i < a.rows(); ++i) {
        double mean = 0.0;
        for (int j = 0; j < n; ++j) mean += a.at(i, j);
        mean /= n;
        double var = 0.0;
        for (int j = 0; j < n; ++j) {
            const double d = a.at(i, j) - mean;
            var += d * d;
        }
        var /= n;
        const double inv = 1.0 / std::sqrt(var + eps);
        for (int j = 0; j < n; ++j) c.at(i, j) = (a.at(i, j) - mean) * inv;
    }
    return c;
}

Tensor layer_norm(const Tensor& a, const Tensor& gain, const Tensor& bias) {
    check_rank2(a, "layer_norm");
    if (a.cols() < 2) throw ShapeError("layer_norm: needs at least 2 columns, got " + a.shape_str());
    if (gain.rank() != 1 || gain.dim(0) != a.cols() || bias.rank() != 1 || bias.dim(0) != a.cols()) {
        throw ShapeError("layer_norm: affine shapes " + gain.shape_str() + ", " + bias.shape_str() +
                         " do not match " + a.shape_str());
    }
    Tensor c = layer_norm_rows(a, kLayerNormEps);
    for (int i = 0; i < c.rows(); ++i)
        for (int j = 0; j < c.cols(); ++j) c.at(i, j) = c.at(i, j) * gain[j] + bias[j];
    return c;
}

Tensor mean_rows(const Tensor& a) {
    check_rank2(a, "mean_rows");
    Tensor c({1, a.cols()});
    for (int j = 0; j < a.cols(); ++j) {
        double s = 0.0;
        for (int i = 0; i < a.rows(); ++i) s += a.at(i, j);
        c.at(0, j) = s / a.rows();
    }
    return c;
}

double sum(const Tensor& a) {
    double s = 0.0;
    for (std::int64_t i = 0; i < a.size(); ++i) s += a[i];
    return s;
}

Tensor concat_rows(const std::vector<Tensor>& blocks) {
    if (blocks.empty()) throw ShapeError("concat_rows: no blocks");
    const int n = blocks[0].cols();
    int m = 0;
    for (const Tensor& b : blocks) {
        check_rank2(b, "concat_rows");
        if (b.cols() != n) {
            throw ShapeError("concat_rows: column mismatch " + blocks[0].shape_str() + " vs " + b.shape_str());
        }
        m += b.rows();
    }
    Tensor c({m, n});
    int r = 0;
    for (const Tensor& b : blocks) {
        for (int i = 0; i < b.rows(); ++i, ++r)
            for (int j = 0; j < n; ++j) c.at(r, j) = b.at(i, j);
    }
    return c;
}

Tensor slice_rows(const Tensor& a, int r0, int r1) {
    check_rank2(a, "slice_rows");
    if (r0 < 0 || r1 > a.rows() || r0 >= r1) {
        throw ShapeError("slice_rows: range [" + std::to_string(r0) + "," + std::to_string(r1) + ") of " +
                         a.shape_str());
    }
    Tensor c({r1 - r0, a.cols()});
    for (int i = r0; i < r1; ++i)
        for (int j = 0; j < a.cols(); ++j) c.at(i - r0, j) = a.at(i, j);
    return c;
}

Tensor concat_cols(const std::vector<Tensor>& blocks) {
    if (blocks.empty()) throw ShapeError("concat_cols: no blocks");
    const int m = blocks[0].rows();
    int n = 0;
    for (const Tensor& b : blocks) {
        check_rank2(b, "concat_cols");
        if (b.rows() != m) {
            throw ShapeError("concat_cols: row mismatch " + blocks[0].shape_str() + " vs " + b.shape_str());
        }
        n += b.cols();
    }
    Tensor c({m, n});
    int off = 0;
    for (const Tensor& b : blocks) {
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < b.cols(); ++j) c.at(i, off + j) = b.at(i, j);
        off += b.cols();
    }
    return c;
}

Tensor slice_cols(const Tensor& a, int c0, int c1) {
    check_rank2(a, "slice_cols");
    if (c0 < 0 || c1 > a.cols() || c0 >= c1) {
        throw ShapeError("slice_cols: range [" + std::to_string(c0) + "," + std::to_string(c1) + ") of " +
                         a.shape_str());
    }
    Tensor c({a.rows(), c1 - c0});
    for (int i = 0; i < a.rows(); ++i)
        for (int j = c0; j < c1; ++j) c.at(i, j - c0) = a.at(i, j);
    return c;
}

}  // namespace ops
}  // namespace gtrs
