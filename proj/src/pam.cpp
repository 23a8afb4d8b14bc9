#include "gtrs/pam.hpp"

#include <numeric>

namespace gtrs {

GraphTransformerBlock Pam::block(int b) const {
    if (b < 0 || b >= block_count()) throw ConfigError("block index out of range");
    GraphTransformerBlock blk;
    blk.name = name + ".block" + std::to_string(b);
    blk.joints = joints;
    blk.dim = dim;
    blk.heads = heads;
    blk.se_reduction = se_reduction;
    blk.learnable_adj = b >= fixed_blocks;
    blk.modulation = modulation;
    return blk;
}

void Pam::init(ParamStore& store, Rng& rng, const Tensor& a_hat) const {
    if (fixed_blocks < 0 || learnable_blocks < 0 || block_count() < 1) {
        throw ConfigError("block counts must be non-negative and sum to at least 1");
    }
    embed().init(store, rng);
    for (int b = 0; b < block_count(); ++b) block(b).init(store, rng, a_hat, adj_noise_scale);

    // Fusion starts as the average of the parallel block outputs.
    const int B = block_count();
    Tensor fm({joints, B * joints});
    for (int b = 0; b < B; ++b)
        for (int j = 0; j < joints; ++j) fm.at(j, b * joints + j) = 1.0 / B;
    store.add(name + ".fusion.M", std::move(fm));
    store.add(name + ".fusion.b", Tensor::zeros({joints, 1}));

    if (head_hidden > 0) {
        Linear{name + ".head0", dim, head_hidden}.init(store, rng);
        Linear{name + ".head1", head_hidden, 3}.init(store, rng);
    } else {
        Linear{name + ".head", dim, 3}.init(store, rng);
    }
}

Pam::Out Pam::forward(Tape& tape, ParamStore& store, Var pose2d, const std::vector<int>* eval_order) const {
    const Tensor& in = tape.value(pose2d);
    if (in.rank() != 2 || in.rows() != joints || in.cols() != 2) {
        throw ShapeError("pose input " + in.shape_str() + " does not match [" + std::to_string(joints) + ",2]");
    }
    Var x = embed().forward(tape, store, pose2d);

    const int B = block_count();
    std::vector<int> order(static_cast<std::size_t>(B));
    std::iota(order.begin(), order.end(), 0);
    if (eval_order) {
        if (static_cast<int>(eval_order->size()) != B) throw ConfigError("eval_order must list every block");
        order = *eval_order;
    }
    std::vector<Var> outs(static_cast<std::size_t>(B));
    for (int b : order) outs[static_cast<std::size_t>(b)] = block(b).forward(tape, store, x);

    Var stacked = tape.concat_rows(outs);
    Var feature = tape.add_colvec(tape.matmul(tape.param(store, name + ".fusion.M"), stacked),
                                  tape.param(store, name + ".fusion.b"));
    Var pose3d;
    if (head_hidden > 0) {
        Var h = tape.gelu(Linear{name + ".head0", dim, head_hidden}.forward(tape, store, feature));
        pose3d = Linear{name + ".head1", head_hidden, 3}.forward(tape, store, h);
    } else {
        pose3d = Linear{name + ".head", dim, 3}.forward(tape, store, feature);
    }
    return {feature, pose3d};
}

}  // namespace gtrs
