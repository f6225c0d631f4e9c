// Seeded random streams. Every concern draws from its own stream so that
// changing one knob does not perturb unrelated randomness.
#pragma once

#include <cstdint>
#include <random>

namespace wban {

enum class Stream : std::uint64_t { topology = 1, traffic = 2, link_loss = 3, jitter = 4, classes = 5, hello = 6, control = 7, fixture = 99 };

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t master_seed, Stream stream);

    /// Uniform in [0, 1), 53-bit resolution, platform independent.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    bool bernoulli(double p) { return uniform() < p; }
    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace wban
