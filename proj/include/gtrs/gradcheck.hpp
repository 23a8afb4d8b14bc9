#pragma once

#include <functional>
#include <string>
#include <unordered_map>

#include "gtrs/param_store.hpp"

namespace gtrs {

/// Central finite differences of a scalar function over every scalar of the
/// store's (by default trainable) parameters. `f` must read current store
/// values and be deterministic; values are restored bit-exactly afterwards.
std::unordered_map<std::string, Tensor> finite_diff_grad(const std::function<double()>& f, ParamStore& store,
                                                         double h, bool trainable_only = true);

struct GradCheckResult {
    double max_rel_err = 0.0;
    std::string worst_param;
    std::int64_t worst_flat = -1;
    double analytic_at_worst = 0.0;
    double fd_at_worst = 0.0;
    std::int64_t checked = 0;
    std::int64_t excluded = 0;  // parameters where fd itself is unstable (L1 kink in the h-window)
};

/// Compares the analytic gradients already present in store.grad against
/// central finite differences of `f`, scalar by scalar.
///
/// Relative error uses max(|analytic|, |fd|, floor) as denominator. A scalar
/// that fails the first pass is re-estimated at h/2; if the two fd estimates
/// disagree by more than recheck_tol the sample sits on an L1 kink inside
/// the difference window and the scalar is excluded (counted) instead of
/// failed. Smooth disagreements stay failures.
GradCheckResult compare_grads_fd(const std::function<double()>& f, ParamStore& store, double h,
                                 double rel_floor = 1e-6, double recheck_tol = 1e-3);

}  // namespace gtrs
