#pragma once

#include <cstdint>
#include <memory>

#include "gtrs/mrm.hpp"
#include "gtrs/pam.hpp"
#include "gtrs/skeleton.hpp"

namespace gtrs {

/// Architecture dimensions. Defaults mirror the full-size configuration;
/// tests shrink D / T / N / M for speed.
struct ModelConfig {
    int joints = 17;        // J
    int dim = 128;          // D
    int fixed_blocks = 1;   // pose blocks with the structural adjacency
    int learnable_blocks = 5;
    int heads = 4;
    int se_reduction = 4;
    bool gcn_modulation = true;
    int pose_head_hidden = 0;
    int temp_tokens = 15;  // T
    int mrm_blocks = 4;    // N
    int vertices = 6890;   // M
    double adj_noise_scale = kAdjNoiseScale;

    void validate() const;
};

/// The full two-stage network plus its parameter store. Construction is a
/// pure function of (config, skeleton, seed).
class GtrsModel {
  public:
    static GtrsModel build(const ModelConfig& cfg, const SkeletonGraph& skel, std::uint64_t seed);

    const ModelConfig& config() const { return cfg_; }
    const SkeletonGraph& skeleton() const { return skel_; }
    ParamStore& params() { return params_; }
    const ParamStore& params() const { return params_; }
    const Pam& pam() const { return pam_; }
    const Mrm& mrm() const { return mrm_; }

    struct Forward {
        Var pose_feature;  // [J,D]
        Var pose3d_int;    // [J,3]
        Var temp_feature;  // [T,D]
        Var fused;         // [(J+T),D]
        Var mesh;          // [M,3]
    };
    Forward forward(Tape& tape, Var pose2d, Var template_verts);

    /// PAM alone, for pretraining and pose-only evaluation.
    Pam::Out forward_pam(Tape& tape, Var pose2d, const std::vector<int>* eval_order = nullptr);

  private:
    ModelConfig cfg_;
    SkeletonGraph skel_;
    Pam pam_;
    Mrm mrm_;
    ParamStore params_;
};

}  // namespace gtrs
