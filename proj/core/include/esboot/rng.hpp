#pragma once

#include <cstdint>
#include <random>

namespace esboot {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Purpose tags separating the sub-streams derived from one master seed.
enum class StreamTag : std::uint64_t {
    Simulation = 0x51,
    Bootstrap = 0xB0,
    Trajectory = 0x7A,
    Sampling = 0x5A,
};

/// Seed of sub-stream `index` for `tag` under `master`:
///   mix64(mix64(mix64(master) ^ tag) + index)
constexpr std::uint64_t derive_seed(std::uint64_t master, StreamTag tag,
                                    std::uint64_t index) noexcept {
    return mix64(mix64(mix64(master) ^ static_cast<std::uint64_t>(tag)) + index);
}

/// Reproducible random stream. All conversions from raw 64-bit words are
/// done here rather than through <random> distributions, whose output is
/// implementation-defined; a given seed yields identical draws on every
/// platform.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    static RngStream derive(std::uint64_t master, StreamTag tag, std::uint64_t index) {
        return RngStream(derive_seed(master, tag, index));
    }

    std::uint64_t next() { return engine_(); }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform_open() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound). Lemire's multiply-shift with rejection.
    std::uint64_t below(std::uint64_t bound);

private:
    std::mt19937_64 engine_;
};

}  // namespace esboot
