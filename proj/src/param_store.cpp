#include "gtrs/param_store.hpp"

namespace gtrs {

int ParamStore::add(const std::string& name, Tensor value, bool trainable) {
    if (has(name)) throw ConfigError("duplicate parameter name: " + name);
    ParamEntry e;
    e.name = name;
    e.grad = Tensor::zeros(value.shape());
    e.value = std::move(value);
    e.trainable = trainable;
    const int idx = count();
    entries_.push_back(std::move(e));
    index_[name] = idx;
    return idx;
}

int ParamStore::index(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw ConfigError("unknown parameter name: " + name);
    return it->second;
}

std::int64_t ParamStore::total_values(bool trainable_only) const {
    std::int64_t n = 0;
    for (const ParamEntry& e : entries_) {
        if (trainable_only && !e.trainable) continue;
        n += e.value.size();
    }
    return n;
}

void ParamStore::zero_grads() {
    for (ParamEntry& e : entries_) {
        for (std::int64_t i = 0; i < e.grad.size(); ++i) e.grad[i] = 0.0;
    }
}

std::vector<std::string> ParamStore::names() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const ParamEntry& e : entries_) out.push_back(e.name);
    return out;
}

}  // namespace gtrs
