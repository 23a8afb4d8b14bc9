#include "gtrs/skeleton.hpp"

#include <cmath>
#include <set>

#include "gtrs/error.hpp"
#include "gtrs/ops.hpp"

namespace gtrs {

void SkeletonGraph::validate() const {
    if (joint_count <= 0) throw ConfigError("skeleton joint_count must be positive");
    if (!joint_names.empty() && static_cast<int>(joint_names.size()) != joint_count) {
        throw ConfigError("skeleton has " + std::to_string(joint_names.size()) + " names for " +
                          std::to_string(joint_count) + " joints");
    }
    std::set<std::pair<int, int>> seen;
    for (auto [a, b] : edges) {
        if (a < 0 || a >= joint_count || b < 0 || b >= joint_count) {
            throw ConfigError("skeleton edge (" + std::to_string(a) + "," + std::to_string(b) +
                              ") out of range for " + std::to_string(joint_count) + " joints");
        }
        if (a == b) throw ConfigError("skeleton self edge at joint " + std::to_string(a));
        auto key = std::minmax(a, b);
        if (!seen.insert(key).second) {
            throw ConfigError("duplicate skeleton edge (" + std::to_string(key.first) + "," +
                              std::to_string(key.second) + ")");
        }
    }
}

SkeletonGraph SkeletonGraph::h36m17() {
    // Parent array of the standard 17-joint set; -1 marks the root.
    static const int parents[17] = {-1, 0, 1, 2, 0, 4, 5, 0, 7, 8, 9, 8, 11, 12, 8, 14, 15};
    SkeletonGraph s;
    s.joint_count = 17;
    s.joint_names = {"hip_center",    "right_hip",   "right_knee",     "right_ankle", "left_hip",
                     "left_knee",     "left_ankle",  "spine",          "thorax",      "neck",
                     "head",          "left_shoulder", "left_elbow",   "left_wrist",  "right_shoulder",
                     "right_elbow",   "right_wrist"};
    for (int j = 1; j < 17; ++j) s.edges.emplace_back(parents[j], j);
    s.validate();
    return s;
}

Tensor build_adjacency(const SkeletonGraph& skel) {
    skel.validate();
    Tensor a = Tensor::identity(skel.joint_count);
    for (auto [i, j] : skel.edges) {
        a.at(i, j) = 1.0;
        a.at(j, i) = 1.0;
    }
    return a;
}

Tensor normalize_sym(const Tensor& a) {
    if (a.rank() != 2 || a.rows() != a.cols()) {
        throw ConfigError("normalize_sym expects a square matrix, got " + a.shape_str());
    }
    const int n = a.rows();
    std::vector<double> dinv(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += a.at(i, j);
        if (s <= 0.0) throw ConfigError("degenerate graph: zero row sum at node " + std::to_string(i));
        dinv[static_cast<std::size_t>(i)] = 1.0 / std::sqrt(s);
    }
    Tensor out({n, n});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.at(i, j) = dinv[static_cast<std::size_t>(i)] * a.at(i, j) * dinv[static_cast<std::size_t>(j)];
    return out;
}

Tensor init_learnable_logits(const Tensor& a_hat, Rng& rng, double noise_scale) {
    if (noise_scale < 0.0) throw ConfigError("noise_scale must be non-negative");
    Tensor logits = a_hat;
    for (std::int64_t i = 0; i < logits.size(); ++i) {
        logits[i] = std::log(a_hat[i] + kAdjLogitFloor) + rng.gaussian(0.0, noise_scale);
    }
    return logits;
}

Tensor LearnableAdjacency::effective() const { return ops::softmax_rows(logits); }

}  // namespace gtrs
