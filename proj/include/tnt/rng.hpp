#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace tnt {

/// Deterministic RNG with named substreams. Every stochastic stage of a run
/// (initial design, candidate sampling, dataset generation, fidelity
/// sampling, ...) draws from its own stream derived from (seed, stream), so
/// artifacts are bit-reproducible for a fixed seed. The uniform/normal
/// transforms are hand-rolled on top of mt19937_64 because the standard
/// distributions are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : engine_(mix(seed, stream)) {}

    /// uniform in [0,1) with 53-bit resolution
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// standard normal (Box-Muller)
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform01();
        } while (u1 <= 0.0);
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    /// integer in [0, n)
    std::size_t index(std::size_t n) {
        std::size_t i = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[index(i)]);
        }
    }

    std::uint64_t next_u64() { return engine_(); }

private:
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
        // splitmix64 finalizer over the (seed, stream) pair
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Stream ids used by the pipeline stages.
namespace rng_stream {
constexpr std::uint64_t kInitialDesign = 1;
constexpr std::uint64_t kAcquisition = 2;
constexpr std::uint64_t kHyperFit = 3;
constexpr std::uint64_t kExplanationDataset = 4;
constexpr std::uint64_t kFidelity = 5;
constexpr std::uint64_t kTuner = 6;
constexpr std::uint64_t kGroundTruth = 7;
constexpr std::uint64_t kUnionVolume = 8;
} // namespace rng_stream

} // namespace tnt
