#pragma once

#include "gtrs/blocks.hpp"

namespace gtrs {

/// Mesh regression stage: compress the template to T tokens, refine pose
/// and template features through N dual-branch blocks (separate encoders,
/// then a fusion encoder over the concatenated tokens), and upsample the
/// final fused feature to M vertices.
///
/// Both the template embedding and the regression head are factorized into
/// a token map and a channel map; a flat MLP at either end would by itself
/// blow the parameter budget.
struct Mrm {
    std::string name = "mrm";
    int joints = 17;       // J: pose tokens
    int temp_tokens = 15;  // T
    int dim = 128;         // D
    int blocks = 4;        // N
    int vertices = 6890;   // M
    int heads = 4;
    int se_reduction = 4;

    int fused_tokens() const { return joints + temp_tokens; }
    ModifiedEncoder pose_encoder(int b) const;
    ModifiedEncoder temp_encoder(int b) const;
    ModifiedEncoder fusion_encoder(int b) const;
    Linear channel_embed() const { return {name + ".embed.channel", 3, dim}; }
    Linear channel_head() const { return {name + ".head.channel", dim, 3}; }

    /// Registration order: embed (tokens, channel), blocks 0..N-1
    /// (pose/temp/fusion encoders), head (tokens, channel).
    void init(ParamStore& store, Rng& rng) const;

    Var embed_template(Tape& tape, ParamStore& store, Var template_verts) const;  ///< [M,3] -> [T,D]

    struct BranchOut {
        Var pose;  // [J,D]
        Var temp;  // [T,D]
    };
    BranchOut dual_branch(Tape& tape, ParamStore& store, int b, Var pose_f, Var temp_f) const;

    struct Out {
        Var temp_feature;  // [T,D]
        Var fused;         // [(J+T),D], the final fused feature
        Var mesh;          // [M,3]
    };
    Out forward(Tape& tape, ParamStore& store, Var pose_feature, Var template_verts) const;
};

}  // namespace gtrs
