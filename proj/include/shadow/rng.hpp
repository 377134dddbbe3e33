#ifndef SHADOW_RNG_HPP
#define SHADOW_RNG_HPP

#include <cmath>
#include <cstdint>
#include <string_view>

namespace shadow {

// Identifies one reproducible random stream.  Identical (seed, stream) pairs
// reproduce identical outputs bit-exactly, on any thread, in any call order.
struct RngSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

// 64-bit finalizer (splitmix64 style): bijective, well-mixed.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Order-sensitive combiner for deriving child seeds from a parent hash.
inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
    return mix64(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

inline std::uint64_t hash_str(std::uint64_t h, std::string_view s) {
    for (unsigned char c : s) h = hash_combine(h, c);
    return hash_combine(h, s.size());
}

inline RngSeed substream(RngSeed s, std::uint64_t index) {
    return RngSeed{s.seed, hash_combine(s.stream, index)};
}

// Small, fast counter-based generator (splitmix64) with Box-Muller Gaussians.
// Quality is ample for Monte Carlo at desk scale and the state is trivially
// reproducible, which the experiment harness depends on.
class Rng {
  public:
    explicit Rng(RngSeed s)
        : state_(mix64(s.seed ^ mix64(s.stream + 0x9e3779b97f4a7c15ULL))) {}
    Rng(std::uint64_t seed, std::uint64_t stream = 0) : Rng(RngSeed{seed, stream}) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        return mix64(z);
    }

    // Uniform on [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1]; safe as a log() argument.
    double uniform_pos01() { return 1.0 - uniform01(); }

    // Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) { return next_u64() % bound; }

    // Standard normal via Box-Muller, caching the second deviate.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_pos01()));
        const double t = 6.283185307179586476925286766559 * uniform01();
        spare_ = r * std::sin(t);
        has_spare_ = true;
        return r * std::cos(t);
    }

    // Exponential with mean 1.
    double exponential() { return -std::log(uniform_pos01()); }

  private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace shadow

#endif
