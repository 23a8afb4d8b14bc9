#pragma once

#include "gtrs/blocks.hpp"
#include "gtrs/skeleton.hpp"

namespace gtrs {

/// Pose analysis stage: per-joint embedding of the 2D pose, a bank of
/// parallel graph-transformer blocks over one shared input, a token-mixing
/// fusion conv collapsing the stacked block outputs back to J tokens, and a
/// small head regressing an intermediate 3D pose.
struct Pam {
    std::string name = "pam";
    int joints = 17;
    int dim = 128;
    int fixed_blocks = 1;
    int learnable_blocks = 5;
    int heads = 4;
    int se_reduction = 4;
    bool modulation = true;
    int head_hidden = 0;  // 0: single linear D->3
    double adj_noise_scale = kAdjNoiseScale;

    int block_count() const { return fixed_blocks + learnable_blocks; }
    GraphTransformerBlock block(int b) const;
    Linear embed() const { return {name + ".embed", 2, dim}; }

    /// Registration order: embed, blocks 0..B-1 (fixed first), fusion, head.
    void init(ParamStore& store, Rng& rng, const Tensor& a_hat) const;

    struct Out {
        Var feature;  // [J,D]
        Var pose3d;   // [J,3]
    };
    /// eval_order optionally permutes the order blocks are *computed* in;
    /// outputs always assemble by block index, so the result is unchanged.
    Out forward(Tape& tape, ParamStore& store, Var pose2d, const std::vector<int>* eval_order = nullptr) const;
};

}  // namespace gtrs
