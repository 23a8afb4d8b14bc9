#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "gtrs/tensor.hpp"

namespace gtrs {

/// One named parameter. Non-trainable entries (the fixed adjacency) keep
/// their value for the lifetime of the model: no gradient is ever written
/// to them and the optimizer skips them.
struct ParamEntry {
    std::string name;
    Tensor value;
    Tensor grad;
    bool trainable = true;
};

/// Flat registry of model parameters, ordered by insertion. The insertion
/// order is part of the model contract: the optimizer, the checkpoint
/// format, and the gradient checker all walk it in this order.
class ParamStore {
  public:
    int add(const std::string& name, Tensor value, bool trainable = true);

    bool has(const std::string& name) const { return index_.count(name) > 0; }
    int index(const std::string& name) const;

    ParamEntry& entry(int i) { return entries_[static_cast<std::size_t>(i)]; }
    const ParamEntry& entry(int i) const { return entries_[static_cast<std::size_t>(i)]; }
    ParamEntry& entry(const std::string& name) { return entries_[static_cast<std::size_t>(index(name))]; }
    const ParamEntry& entry(const std::string& name) const {
        return entries_[static_cast<std::size_t>(index(name))];
    }

    int count() const { return static_cast<int>(entries_.size()); }
    std::int64_t total_values(bool trainable_only = false) const;

    void zero_grads();

    std::vector<std::string> names() const;

  private:
    std::vector<ParamEntry> entries_;
    std::unordered_map<std::string, int> index_;
};

}  // namespace gtrs
