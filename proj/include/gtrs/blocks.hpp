#pragma once

#include <string>
#include <vector>

#include "gtrs/rng.hpp"
#include "gtrs/tape.hpp"

namespace gtrs {

// Layer descriptors. Each struct is a cheap value: a parameter-name prefix
// plus dimensions. init() registers parameters (drawing from the Rng in
// registration order), forward() records the computation on a tape. The
// weights themselves live only in the ParamStore.

/// Glorot-uniform fill: U(-sqrt(6/(fan_in+fan_out)), +...).
Tensor glorot_uniform(int fan_in, int fan_out, std::vector<int> shape, Rng& rng);

struct Linear {
    std::string name;
    int in = 0, out = 0;
    bool bias = true;

    void init(ParamStore& store, Rng& rng) const;
    Var forward(Tape& tape, ParamStore& store, Var x) const;  ///< [n,in] -> [n,out]
};

struct LayerNormAffine {
    std::string name;
    int dim = 0;

    void init(ParamStore& store) const;  ///< gain = ones, bias = zeros
    Var forward(Tape& tape, ParamStore& store, Var x) const;
};

struct MultiHeadAttention {
    std::string name;
    int dim = 0;
    int heads = 4;

    int head_dim() const;
    void init(ParamStore& store, Rng& rng) const;  ///< Wq, Wk, Wv, Wo: [D,D], no biases
    /// If attn_out is given it receives one [n,n] attention matrix per head.
    Var forward(Tape& tape, ParamStore& store, Var x, std::vector<Var>* attn_out = nullptr) const;
};

/// Token-mixing map: out = M * X + bias, M is [tokens,tokens], bias is one
/// scalar per token broadcast across channels.
struct PointwiseConv {
    std::string name;
    int tokens = 0;

    void init(ParamStore& store, Rng& rng) const;
    Var forward(Tape& tape, ParamStore& store, Var x) const;
};

/// Squeeze-and-excitation: mean over tokens, two-layer bottleneck, sigmoid
/// gate multiplied back over every token.
struct SEBlock {
    std::string name;
    int dim = 0;
    int reduction = 4;

    int bottleneck() const;
    void init(ParamStore& store, Rng& rng) const;
    Var gate(Tape& tape, ParamStore& store, Var x) const;  ///< [1,dim], entries in (0,1)
    Var forward(Tape& tape, ParamStore& store, Var x) const;
};

/// Transformer encoder with a conv branch beside attention and SE gating on
/// the second residual:
///   X'    = MHA(Norm1(X)) + Conv(Norm1(X)) + X
///   X_out = SE(Norm2(X')) + X'
struct ModifiedEncoder {
    std::string name;
    int tokens = 0;
    int dim = 0;
    int heads = 4;
    int se_reduction = 4;

    LayerNormAffine norm1() const { return {name + ".norm1", dim}; }
    LayerNormAffine norm2() const { return {name + ".norm2", dim}; }
    MultiHeadAttention mha() const { return {name + ".mha", dim, heads}; }
    PointwiseConv conv() const { return {name + ".conv", tokens}; }
    SEBlock se() const { return {name + ".se", dim, se_reduction}; }

    void init(ParamStore& store, Rng& rng) const;
    Var forward(Tape& tape, ParamStore& store, Var x) const;
};

enum class GcnActivation { gelu, linear };

/// Graph convolution: act(adj * X * W [⊙ modulation]). The adjacency is a
/// parameter registered elsewhere and referenced by name: a fixed
/// (non-trainable) normalized matrix, or trainable logits passed through a
/// row-softmax here.
struct GcnLayer {
    std::string name;
    int in = 0, out = 0;
    int joints = 0;
    std::string adj_param;
    bool adj_learnable = false;
    bool modulation = true;
    GcnActivation act = GcnActivation::gelu;

    void init(ParamStore& store, Rng& rng) const;  ///< W glorot; modulation gains = ones
    Var forward(Tape& tape, ParamStore& store, Var x) const;
};

/// GCN feeding the modified encoder; the GCN-first order is fixed.
struct GraphTransformerBlock {
    std::string name;
    int joints = 0;
    int dim = 0;
    int heads = 4;
    int se_reduction = 4;
    bool learnable_adj = false;
    bool modulation = true;

    std::string adj_param_name() const { return name + ".adj"; }
    GcnLayer gcn() const;
    ModifiedEncoder encoder() const { return {name + ".enc", joints, dim, heads, se_reduction}; }

    /// Registers the adjacency parameter from the normalized structural
    /// prior (copied as-is when fixed, noised log-prior logits when
    /// learnable), then the layer weights.
    void init(ParamStore& store, Rng& rng, const Tensor& a_hat, double noise_scale) const;
    Var forward(Tape& tape, ParamStore& store, Var x) const;
};

}  // namespace gtrs
