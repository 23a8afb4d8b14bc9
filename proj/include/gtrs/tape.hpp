#pragma once

#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gtrs/param_store.hpp"
#include "gtrs/tensor.hpp"

namespace gtrs {

/// Handle to a node on a Tape. Only meaningful for the tape that created it.
struct Var {
    int id = -1;
    bool valid() const { return id >= 0; }
};

/// Define-by-run reverse-mode autodiff. Each op records a closure that
/// propagates the output gradient into its parents; backward() runs the
/// closures in reverse creation order and then scatters gradients of bound
/// parameters into their ParamStore.
///
/// A Tape is built per training step and discarded. With grad_enabled=false
/// it degrades to plain forward evaluation: no closures, no grad buffers.
class Tape {
  public:
    explicit Tape(bool grad_enabled = true) : grad_enabled_(grad_enabled) {}
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    bool grad_enabled() const { return grad_enabled_; }

    // Leaves.
    Var constant(Tensor value);
    Var leaf(Tensor value, bool needs_grad);
    /// Binds a parameter as a leaf. Repeat calls with the same name return
    /// the same node, so gradients from every use accumulate in one place.
    Var param(ParamStore& store, const std::string& name);

    const Tensor& value(Var v) const { return values_[static_cast<std::size_t>(v.id)]; }
    /// Gradient buffer of a node, allocated (zeroed) on first access.
    Tensor& grad(Var v);
    bool needs_grad(Var v) const { return needs_[static_cast<std::size_t>(v.id)]; }

    // Ops. Shapes follow the ops:: kernels of the same name.
    Var matmul(Var a, Var b);
    Var matmul_nt(Var a, Var b);  ///< a * b^T
    Var add(Var a, Var b);
    Var sub(Var a, Var b);
    Var mul(Var a, Var b);
    Var scale(Var a, double s);
    Var add_rowvec(Var x, Var b);  ///< b is [1,n]
    Var add_colvec(Var x, Var b);  ///< b is [m,1]
    Var mul_rowvec(Var x, Var g);  ///< g is [1,n]
    Var gelu(Var x);
    Var sigmoid(Var x);
    Var softmax_rows(Var x);
    Var layer_norm_rows(Var x);  ///< eps = ops::kLayerNormEps, no affine
    Var mean_rows(Var x);        ///< [m,n] -> [1,n]
    Var sum_all(Var x);          ///< any shape -> [1,1]
    Var concat_rows(const std::vector<Var>& blocks);
    Var slice_rows(Var x, int r0, int r1);
    Var concat_cols(const std::vector<Var>& blocks);
    Var slice_cols(Var x, int c0, int c1);

    /// Escape hatch for primitives defined outside the tape (the mesh
    /// losses). `back` receives the output gradient; it reads parent values
    /// via value() and accumulates into grad().
    Var custom(std::vector<Var> parents, Tensor value, std::function<void(Tape&, const Tensor&)> back);

    /// Seeds `loss` (a single-element node) with gradient 1, runs all
    /// closures in reverse order, then adds bound-parameter gradients into
    /// their store.
    void backward(Var loss);

    int node_count() const { return static_cast<int>(values_.size()); }

  private:
    Var push(Tensor value, bool needs, std::function<void()> back);
    bool any_needs(std::initializer_list<Var> vs) const;

    bool grad_enabled_;
    std::vector<Tensor> values_;
    std::vector<Tensor> grads_;  // empty shape until first grad() access
    std::vector<bool> needs_;
    std::vector<std::function<void()>> backs_;

    ParamStore* bound_store_ = nullptr;
    std::unordered_map<std::string, Var> param_nodes_;
    std::vector<std::pair<int, int>> param_bindings_;  // (node id, store index)
};

}  // namespace gtrs
