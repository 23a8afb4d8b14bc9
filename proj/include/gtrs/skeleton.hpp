#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gtrs/rng.hpp"
#include "gtrs/tensor.hpp"

namespace gtrs {

/// Joint topology of the 2D pose. Undirected, no self edges.
struct SkeletonGraph {
    int joint_count = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::string> joint_names;  // may be empty, else one per joint

    /// Throws ConfigError on out-of-range endpoints, self edges, duplicates,
    /// or a name list of the wrong length.
    void validate() const;

    /// 17-joint Human3.6M topology (16 edges, a tree rooted at the hip).
    static SkeletonGraph h36m17();
};

/// Binary adjacency with self-loops: A[i][j] = 1 iff edge(i,j) or i=j.
Tensor build_adjacency(const SkeletonGraph& skel);

/// Symmetric normalization D^{-1/2} A D^{-1/2}, D = diag(row sums).
/// Requires symmetric non-negative input with positive row sums.
Tensor normalize_sym(const Tensor& a);

constexpr double kAdjLogitFloor = 1e-4;
constexpr double kAdjNoiseScale = 0.01;

/// Logits whose row-softmax approximates a_hat: log(a_hat + floor) plus
/// Gaussian noise so parallel learnable blocks start distinct.
Tensor init_learnable_logits(const Tensor& a_hat, Rng& rng, double noise_scale = kAdjNoiseScale);

/// Owning view used by tests and tooling; the model itself keeps logits in
/// its ParamStore and computes the effective matrix on the tape.
struct LearnableAdjacency {
    Tensor logits;
    Tensor effective() const;
};

}  // namespace gtrs
