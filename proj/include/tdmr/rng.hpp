#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace tdmr {

/// Mixes 64 bits through the SplitMix64 finalizer (bijective).
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives an independent seed for sub-stream `index` of `master`.
/// Used for per-sweep-point seeds; trial streams use RngStream::for_trial.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return mix64(master ^ mix64(index ^ 0x5005c0de5eedULL));
}

/// Small counter-based random stream (SplitMix64 core, Box-Muller normals).
///
/// Streams are keyed, not advanced into: for_trial(seed, t) yields the same
/// sequence no matter which worker runs trial t, which is what makes Monte
/// Carlo runs independent of thread count.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {}

    static RngStream for_trial(std::uint64_t master_seed, std::uint64_t trial) {
        return RngStream(mix64(master_seed ^ mix64(trial)));
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform on [0,1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; pairs are cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // u1 in (0,1] keeps the log finite
        double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
        double u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace tdmr
