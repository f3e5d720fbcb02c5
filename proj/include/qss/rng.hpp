#pragma once

#include <cstdint>
#include <random>

namespace qss {

/// Deterministically derives an independent stream seed from a base seed and a
/// salt (splitmix64 finalizer). Trials derive their seed from the master seed
/// and the trial index; every randomness consumer inside a trial then derives
/// its own stream, so replaying a seed replays the whole run bit for bit.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
    std::uint64_t x = base + 0x9E3779B97F4A7C15ull * (salt + 1);
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Fixed stream roles within one trial.
enum class StreamRole : std::uint64_t {
    Measurement = 0,  // Born-rule sampling
    RecordSplit = 1,  // the cheat's random (announce, resend) choices
    Comparison = 2,   // public-check subsequence selection
    SecretBits = 3,   // the sender's per-trial data bits
};

inline std::uint64_t derive_seed(std::uint64_t base, StreamRole role) {
    return derive_seed(base, static_cast<std::uint64_t>(role));
}

/// Seedable uniform bit/real source. Every probabilistic operation takes one
/// explicitly; there is no ambient global randomness anywhere in the library.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

    /// Uniform double in [0, 1) built from the top 53 bits of the generator,
    /// so sequences are identical across platforms and standard libraries.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    int bit() { return static_cast<int>(gen_() & 1u); }

    bool bernoulli(double p) { return uniform01() < p; }

  private:
    std::mt19937_64 gen_;
};

}  // namespace qss
