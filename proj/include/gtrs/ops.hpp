#pragma once

#include "gtrs/tensor.hpp"

namespace gtrs {
namespace ops {

// Dense kernels on rank-2 tensors. These are the value-only building blocks;
// the autodiff tape wraps them and adds the backward closures.

/// C = A * B. A is [m,k], B is [k,n].
Tensor matmul(const Tensor& a, const Tensor& b);

/// C = A * B^T. A is [m,k], B is [n,k].
Tensor matmul_nt(const Tensor& a, const Tensor& b);

/// C = A^T * B. A is [k,m], B is [k,n].
Tensor matmul_tn(const Tensor& a, const Tensor& b);

Tensor transpose(const Tensor& a);

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);  ///< elementwise
Tensor scale(const Tensor& a, double s);

/// Adds row vector b [n] to every row of a [m,n].
Tensor add_row_broadcast(const Tensor& a, const Tensor& b);

/// Adds column vector b [m] to every column of a [m,n].
Tensor add_col_broadcast(const Tensor& a, const Tensor& b);

/// Scales row i of a [m,n] by g[i].
Tensor mul_col_broadcast(const Tensor& a, const Tensor& g);

/// Row-wise softmax with max-shift for stability.
Tensor softmax_rows(const Tensor& a);

/// Exact GELU: x * Phi(x) with Phi from erf.
Tensor gelu(const Tensor& a);
double gelu_scalar(double x);
double gelu_grad_scalar(double x);

Tensor sigmoid(const Tensor& a);

/// Per-row normalization over the last axis: (x - mean) / sqrt(var + eps).
/// No affine terms here; gain and bias live in the layer that owns them.
Tensor layer_norm_rows(const Tensor& a, double eps);

/// Normalization with per-column affine: gain and bias are [n]. Requires n >= 2.
Tensor layer_norm(const Tensor& a, const Tensor& gain, const Tensor& bias);

/// Mean over rows: [m,n] -> [1,n].
Tensor mean_rows(const Tensor& a);

double sum(const Tensor& a);

/// Stacks blocks vertically; all blocks must share a column count.
Tensor concat_rows(const std::vector<Tensor>& blocks);

/// Rows [r0, r1) of a.
Tensor slice_rows(const Tensor& a, int r0, int r1);

/// Stacks blocks horizontally; all blocks must share a row count.
Tensor concat_cols(const std::vector<Tensor>& blocks);

/// Columns [c0, c1) of a.
Tensor slice_cols(const Tensor& a, int c0, int c1);

constexpr double kLayerNormEps = 1e-5;

}  // namespace ops
}  // namespace gtrs
