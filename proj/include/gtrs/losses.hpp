#pragma once

#include <array>
#include <vector>

#include "gtrs/tape.hpp"

namespace gtrs {

using Face = std::array<int, 3>;

struct LossWeights {
    double vertex = 1.0;
    double joint = 0.01;
    double normal = 0.01;
    double edge = 0.01;

    void validate() const;
};

// Differentiable losses. `pred` lives on the tape; ground truth is constant.
// The scalar result is a [1] tensor node. L1 subgradients at exactly zero
// difference are taken as 0.

/// Mean over rows of the row-wise L1 distance. Used for both the
/// intermediate 3D pose (over K joints) and mesh vertices (over M).
Var loss_l1_rows(Tape& tape, Var pred, const Tensor& gt);

inline Var loss_pose(Tape& tape, Var pred_pose, const Tensor& gt_pose) {
    return loss_l1_rows(tape, pred_pose, gt_pose);
}
inline Var loss_vertex(Tape& tape, Var pred_mesh, const Tensor& gt_mesh) {
    return loss_l1_rows(tape, pred_mesh, gt_mesh);
}

/// L1 distance between joints regressed from the predicted mesh and the
/// ground-truth pose. `regressor` is [K,M] with convex rows.
Var loss_joint(Tape& tape, Var pred_mesh, const Tensor& regressor, const Tensor& gt_pose);

/// Sum over faces and their 3 edges of |<pred edge direction, gt unit face
/// normal>|. Edge directions are normalized with a 1e-8 guard in the
/// denominator; gt normals use right-hand winding. Unnormalized sum, so the
/// scale grows with mesh resolution.
Var loss_normal(Tape& tape, Var pred_mesh, const Tensor& gt_mesh, const std::vector<Face>& faces);

/// Sum over faces and their 3 edges of | |pred edge| - |gt edge| |.
/// Interior edges are shared by two faces and counted once per face.
Var loss_edge(Tape& tape, Var pred_mesh, const Tensor& gt_mesh, const std::vector<Face>& faces);

Var loss_total(Tape& tape, Var lv, Var lj, Var ln, Var le, const LossWeights& w);

/// Unit ground-truth face normals, [F,3], right-hand winding. Throws
/// DataError on a zero-area face.
Tensor face_normals(const Tensor& mesh, const std::vector<Face>& faces);

}  // namespace gtrs
