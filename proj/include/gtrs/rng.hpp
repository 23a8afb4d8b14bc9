#pragma once

#include <cstdint>

namespace gtrs {

/// SplitMix64 counter-based generator. One u64 of state, so checkpoints can
/// capture and restore it exactly; derive() gives decorrelated substreams so
/// data generation, init, and training noise never share a sequence.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform();

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi);

    /// Standard normal via Box-Muller. The spare value is discarded so the
    /// state stays a single u64 and a restored stream continues bit-exactly.
    double gaussian();

    double gaussian(double mean, double stddev) { return mean + stddev * gaussian(); }

    /// Integer in [0, n).
    int below(int n);

    /// Independent substream for the given key. Same (state, key) always
    /// yields the same substream.
    Rng derive(std::uint64_t key) const;

    std::uint64_t state() const { return state_; }
    void set_state(std::uint64_t s) { state_ = s; }

  private:
    std::uint64_t state_;
};

}  // namespace gtrs
