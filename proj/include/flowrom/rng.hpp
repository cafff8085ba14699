#pragma once

#include <cstdint>
#include <random>

namespace flowrom {

/// Seeded generator with hand-rolled value mappings so that streams are
/// identical across standard library implementations (std::mt19937_64 is
/// fully specified, the distributions are not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [-1, 1).
    double uniform_pm1() { return 2.0 * uniform01() - 1.0; }

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace flowrom
