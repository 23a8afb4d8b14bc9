#pragma once

#include <vector>

#include "gtrs/param_store.hpp"

namespace gtrs {

/// Adam with bias correction. One instance drives one ParamStore; moment
/// buffers are keyed by the store's insertion order. Non-trainable entries
/// are skipped entirely, so they are fixed points of any step sequence.
class Adam {
  public:
    explicit Adam(double lr = 1e-4, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
        : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

    /// Applies one update from the gradients currently held in the store.
    /// Gradients are left untouched; the caller zeroes them per step.
    void step(ParamStore& store);

    double lr() const { return lr_; }
    void set_lr(double lr) { lr_ = lr; }
    std::int64_t step_count() const { return t_; }

    // Checkpoint access: full optimizer state.
    std::vector<Tensor>& m() { return m_; }
    std::vector<Tensor>& v() { return v_; }
    void restore(std::vector<Tensor> m, std::vector<Tensor> v, std::int64_t t);

  private:
    void ensure_state(const ParamStore& store);

    double lr_, beta1_, beta2_, eps_;
    std::int64_t t_ = 0;
    std::vector<Tensor> m_, v_;
};

}  // namespace gtrs
