#include "gtrs/mrm.hpp"

namespace gtrs {

ModifiedEncoder Mrm::pose_encoder(int b) const {
    return {name + ".block" + std::to_string(b) + ".pose", joints, dim, heads, se_reduction};
}

ModifiedEncoder Mrm::temp_encoder(int b) const {
    return {name + ".block" + std::to_string(b) + ".temp", temp_tokens, dim, heads, se_reduction};
}

ModifiedEncoder Mrm::fusion_encoder(int b) const {
    return {name + ".block" + std::to_string(b) + ".fuse", fused_tokens(), dim, heads, se_reduction};
}

void Mrm::init(ParamStore& store, Rng& rng) const {
    if (temp_tokens < 1 || blocks < 1) throw ConfigError("template tokens and block count must be >= 1");
    store.add(name + ".embed.tokens", glorot_uniform(vertices, temp_tokens, {temp_tokens, vertices}, rng));
    channel_embed().init(store, rng);
    for (int b = 0; b < blocks; ++b) {
        pose_encoder(b).init(store, rng);
        temp_encoder(b).init(store, rng);
        fusion_encoder(b).init(store, rng);
    }
    store.add(name + ".head.tokens", glorot_uniform(fused_tokens(), vertices, {vertices, fused_tokens()}, rng));
    channel_head().init(store, rng);
}

Var Mrm::embed_template(Tape& tape, ParamStore& store, Var template_verts) const {
    const Tensor& t = tape.value(template_verts);
    if (t.rank() != 2 || t.rows() != vertices || t.cols() != 3) {
        throw ShapeError("template " + t.shape_str() + " does not match [" + std::to_string(vertices) + ",3]");
    }
    Var per_vertex = channel_embed().forward(tape, store, template_verts);  // [M,D]
    return tape.matmul(tape.param(store, name + ".embed.tokens"), per_vertex);
}

Mrm::BranchOut Mrm::dual_branch(Tape& tape, ParamStore& store, int b, Var pose_f, Var temp_f) const {
    Var p = pose_encoder(b).forward(tape, store, pose_f);
    Var t = temp_encoder(b).forward(tape, store, temp_f);
    Var fused = fusion_encoder(b).forward(tape, store, tape.concat_rows({p, t}));
    return {tape.slice_rows(fused, 0, joints), tape.slice_rows(fused, joints, fused_tokens())};
}

Mrm::Out Mrm::forward(Tape& tape, ParamStore& store, Var pose_feature, Var template_verts) const {
    const Tensor& pf = tape.value(pose_feature);
    if (pf.rank() != 2 || pf.rows() != joints || pf.cols() != dim) {
        throw ShapeError("pose feature " + pf.shape_str() + " does not match [" + std::to_string(joints) +
                         "," + std::to_string(dim) + "]");
    }
    Out out;
    out.temp_feature = embed_template(tape, store, template_verts);
    Var p = pose_feature;
    Var t = out.temp_feature;
    for (int b = 0; b < blocks; ++b) {
        BranchOut bo = dual_branch(tape, store, b, p, t);
        p = bo.pose;
        t = bo.temp;
    }
    out.fused = tape.concat_rows({p, t});
    Var up = tape.matmul(tape.param(store, name + ".head.tokens"), out.fused);  // [M,D]
    out.mesh = channel_head().forward(tape, store, up);
    return out;
}

}  // namespace gtrs
