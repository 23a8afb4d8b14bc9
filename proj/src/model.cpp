#include "gtrs/model.hpp"

namespace gtrs {

void ModelConfig::validate() const {
    if (joints < 2) throw ConfigError("joints must be >= 2");
    if (dim < 2) throw ConfigError("dim must be >= 2");
    if (fixed_blocks < 0 || learnable_blocks < 0 || fixed_blocks + learnable_blocks < 1) {
        throw ConfigError("need at least one pose block");
    }
    if (heads < 1 || dim % heads != 0) {
        throw ConfigError("dim " + std::to_string(dim) + " not divisible by heads " + std::to_string(heads));
    }
    if (se_reduction < 1 || dim % se_reduction != 0) {
        throw ConfigError("dim " + std::to_string(dim) + " not divisible by se_reduction " +
                          std::to_string(se_reduction));
    }
    if (temp_tokens < 1) throw ConfigError("temp_tokens must be >= 1");
    if (mrm_blocks < 1) throw ConfigError("mrm_blocks must be >= 1");
    if (vertices < 3) throw ConfigError("vertices must be >= 3");
    if (pose_head_hidden < 0) throw ConfigError("pose_head_hidden must be >= 0");
    if (adj_noise_scale < 0.0) throw ConfigError("adj_noise_scale must be >= 0");
}

GtrsModel GtrsModel::build(const ModelConfig& cfg, const SkeletonGraph& skel, std::uint64_t seed) {
    cfg.validate();
    skel.validate();
    if (skel.joint_count != cfg.joints) {
        throw ConfigError("config joints " + std::to_string(cfg.joints) + " vs skeleton " +
                          std::to_string(skel.joint_count));
    }
    GtrsModel m;
    m.cfg_ = cfg;
    m.skel_ = skel;

    m.pam_.joints = cfg.joints;
    m.pam_.dim = cfg.dim;
    m.pam_.fixed_blocks = cfg.fixed_blocks;
    m.pam_.learnable_blocks = cfg.learnable_blocks;
    m.pam_.heads = cfg.heads;
    m.pam_.se_reduction = cfg.se_reduction;
    m.pam_.modulation = cfg.gcn_modulation;
    m.pam_.head_hidden = cfg.pose_head_hidden;
    m.pam_.adj_noise_scale = cfg.adj_noise_scale;

    m.mrm_.joints = cfg.joints;
    m.mrm_.temp_tokens = cfg.temp_tokens;
    m.mrm_.dim = cfg.dim;
    m.mrm_.blocks = cfg.mrm_blocks;
    m.mrm_.vertices = cfg.vertices;
    m.mrm_.heads = cfg.heads;
    m.mrm_.se_reduction = cfg.se_reduction;

    const Tensor a_hat = normalize_sym(build_adjacency(skel));
    Rng rng(seed);
    Rng pam_rng = rng.derive(1);
    Rng mrm_rng = rng.derive(2);
    m.pam_.init(m.params_, pam_rng, a_hat);
    m.mrm_.init(m.params_, mrm_rng);
    return m;
}

GtrsModel::Forward GtrsModel::forward(Tape& tape, Var pose2d, Var template_verts) {
    Forward f;
    Pam::Out p = pam_.forward(tape, params_, pose2d);
    f.pose_feature = p.feature;
    f.pose3d_int = p.pose3d;
    Mrm::Out m = mrm_.forward(tape, params_, p.feature, template_verts);
    f.temp_feature = m.temp_feature;
    f.fused = m.fused;
    f.mesh = m.mesh;
    return f;
}

Pam::Out GtrsModel::forward_pam(Tape& tape, Var pose2d, const std::vector<int>* eval_order) {
    return pam_.forward(tape, params_, pose2d, eval_order);
}

}  // namespace gtrs
