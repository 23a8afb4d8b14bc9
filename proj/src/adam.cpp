#include "gtrs/adam.hpp"

#include <cmath>

namespace gtrs {

void Adam::ensure_state(const ParamStore& store) {
    if (static_cast<int>(m_.size()) == store.count()) return;
    if (!m_.empty()) throw ConfigError("optimizer state does not match parameter store");
    m_.reserve(static_cast<std::size_t>(store.count()));
    v_.reserve(static_cast<std::size_t>(store.count()));
    for (int i = 0; i < store.count(); ++i) {
        m_.push_back(Tensor::zeros(store.entry(i).value.shape()));
        v_.push_back(Tensor::zeros(store.entry(i).value.shape()));
    }
}

void Adam::step(ParamStore& store) {
    ensure_state(store);
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (int i = 0; i < store.count(); ++i) {
        ParamEntry& e = store.entry(i);
        if (!e.trainable) continue;
        Tensor& m = m_[static_cast<std::size_t>(i)];
        Tensor& v = v_[static_cast<std::size_t>(i)];
        for (std::int64_t k = 0; k < e.value.size(); ++k) {
            const double g = e.grad[k];
            m[k] = beta1_ * m[k] + (1.0 - beta1_) * g;
            v[k] = beta2_ * v[k] + (1.0 - beta2_) * g * g;
            const double mhat = m[k] / bc1;
            const double vhat = v[k] / bc2;
            e.value[k] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
        }
    }
}

void Adam::restore(std::vector<Tensor> m, std::vector<Tensor> v, std::int64_t t) {
    m_ = std::move(m);
    v_ = std::move(v);
    t_ = t;
}

}  // namespace gtrs
