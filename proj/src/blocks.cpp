#include "gtrs/blocks.hpp"

#include <cmath>

#include "gtrs/skeleton.hpp"

namespace gtrs {

Tensor glorot_uniform(int fan_in, int fan_out, std::vector<int> shape, Rng& rng) {
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    Tensor t(std::move(shape));
    for (std::int64_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-limit, limit);
    return t;
}

void Linear::init(ParamStore& store, Rng& rng) const {
    store.add(name + ".W", glorot_uniform(in, out, {in, out}, rng));
    if (bias) store.add(name + ".b", Tensor::zeros({1, out}));
}

Var Linear::forward(Tape& tape, ParamStore& store, Var x) const {
    Var y = tape.matmul(x, tape.param(store, name + ".W"));
    if (bias) y = tape.add_rowvec(y, tape.param(store, name + ".b"));
    return y;
}

void LayerNormAffine::init(ParamStore& store) const {
    store.add(name + ".gain", Tensor::ones({1, dim}));
    store.add(name + ".bias", Tensor::zeros({1, dim}));
}

Var LayerNormAffine::forward(Tape& tape, ParamStore& store, Var x) const {
    Var n = tape.layer_norm_rows(x);
    return tape.add_rowvec(tape.mul_rowvec(n, tape.param(store, name + ".gain")),
                           tape.param(store, name + ".bias"));
}

int MultiHeadAttention::head_dim() const {
    if (heads <= 0 || dim % heads != 0) {
        throw ConfigError("attention dim " + std::to_string(dim) + " not divisible by heads " +
                          std::to_string(heads));
    }
    return dim / heads;
}

void MultiHeadAttention::init(ParamStore& store, Rng& rng) const {
    (void)head_dim();
    for (const char* w : {".Wq", ".Wk", ".Wv", ".Wo"}) {
        store.add(name + w, glorot_uniform(dim, dim, {dim, dim}, rng));
    }
}

Var MultiHeadAttention::forward(Tape& tape, ParamStore& store, Var x, std::vector<Var>* attn_out) const {
    const int d = head_dim();
    Var q = tape.matmul(x, tape.param(store, name + ".Wq"));
    Var k = tape.matmul(x, tape.param(store, name + ".Wk"));
    Var v = tape.matmul(x, tape.param(store, name + ".Wv"));
    std::vector<Var> head_outs;
    head_outs.reserve(static_cast<std::size_t>(heads));
    for (int h = 0; h < heads; ++h) {
        Var qh = tape.slice_cols(q, h * d, (h + 1) * d);
        Var kh = tape.slice_cols(k, h * d, (h + 1) * d);
        Var vh = tape.slice_cols(v, h * d, (h + 1) * d);
        Var attn = tape.softmax_rows(tape.scale(tape.matmul_nt(qh, kh), 1.0 / std::sqrt(d)));
        if (attn_out) attn_out->push_back(attn);
        head_outs.push_back(tape.matmul(attn, vh));
    }
    Var cat = heads == 1 ? head_outs[0] : tape.concat_cols(head_outs);
    return tape.matmul(cat, tape.param(store, name + ".Wo"));
}

void PointwiseConv::init(ParamStore& store, Rng& rng) const {
    store.add(name + ".M", glorot_uniform(tokens, tokens, {tokens, tokens}, rng));
    store.add(name + ".b", Tensor::zeros({tokens, 1}));
}

Var PointwiseConv::forward(Tape& tape, ParamStore& store, Var x) const {
    return tape.add_colvec(tape.matmul(tape.param(store, name + ".M"), x), tape.param(store, name + ".b"));
}

int SEBlock::bottleneck() const {
    if (reduction <= 0 || dim % reduction != 0) {
        throw ConfigError("SE dim " + std::to_string(dim) + " not divisible by reduction " +
                          std::to_string(reduction));
    }
    return dim / reduction;
}

void SEBlock::init(ParamStore& store, Rng& rng) const {
    const int mid = bottleneck();
    store.add(name + ".Wd", glorot_uniform(dim, mid, {dim, mid}, rng));
    store.add(name + ".bd", Tensor::zeros({1, mid}));
    store.add(name + ".Wu", glorot_uniform(mid, dim, {mid, dim}, rng));
    store.add(name + ".bu", Tensor::zeros({1, dim}));
}

Var SEBlock::gate(Tape& tape, ParamStore& store, Var x) const {
    Var s = tape.mean_rows(x);
    Var mid = tape.gelu(tape.add_rowvec(tape.matmul(s, tape.param(store, name + ".Wd")),
                                        tape.param(store, name + ".bd")));
    return tape.sigmoid(tape.add_rowvec(tape.matmul(mid, tape.param(store, name + ".Wu")),
                                        tape.param(store, name + ".bu")));
}

Var SEBlock::forward(Tape& tape, ParamStore& store, Var x) const {
    return tape.mul_rowvec(x, gate(tape, store, x));
}

void ModifiedEncoder::init(ParamStore& store, Rng& rng) const {
    norm1().init(store);
    mha().init(store, rng);
    conv().init(store, rng);
    norm2().init(store);
    se().init(store, rng);
}

Var ModifiedEncoder::forward(Tape& tape, ParamStore& store, Var x) const {
    Var n1 = norm1().forward(tape, store, x);
    Var mixed = tape.add(tape.add(mha().forward(tape, store, n1), conv().forward(tape, store, n1)), x);
    Var n2 = norm2().forward(tape, store, mixed);
    return tape.add(se().forward(tape, store, n2), mixed);
}

void GcnLayer::init(ParamStore& store, Rng& rng) const {
    store.add(name + ".W", glorot_uniform(in, out, {in, out}, rng));
    if (modulation) store.add(name + ".mod", Tensor::ones({joints, out}));
}

Var GcnLayer::forward(Tape& tape, ParamStore& store, Var x) const {
    Var adj = tape.param(store, adj_param);
    if (adj_learnable) adj = tape.softmax_rows(adj);
    Var y = tape.matmul(tape.matmul(adj, x), tape.param(store, name + ".W"));
    if (modulation) y = tape.mul(y, tape.param(store, name + ".mod"));
    return act == GcnActivation::gelu ? tape.gelu(y) : y;
}

GcnLayer GraphTransformerBlock::gcn() const {
    GcnLayer g;
    g.name = name + ".gcn";
    g.in = dim;
    g.out = dim;
    g.joints = joints;
    g.adj_param = adj_param_name();
    g.adj_learnable = learnable_adj;
    g.modulation = modulation;
    return g;
}

void GraphTransformerBlock::init(ParamStore& store, Rng& rng, const Tensor& a_hat, double noise_scale) const {
    if (a_hat.rank() != 2 || a_hat.rows() != joints || a_hat.cols() != joints) {
        throw ShapeError("adjacency " + a_hat.shape_str() + " does not fit " + std::to_string(joints) +
                         " joints");
    }
    if (learnable_adj) {
        store.add(adj_param_name(), init_learnable_logits(a_hat, rng, noise_scale));
    } else {
        store.add(adj_param_name(), a_hat, /*trainable=*/false);
    }
    gcn().init(store, rng);
    encoder().init(store, rng);
}

Var GraphTransformerBlock::forward(Tape& tape, ParamStore& store, Var x) const {
    return encoder().forward(tape, store, gcn().forward(tape, store, x));
}

}  // namespace gtrs
