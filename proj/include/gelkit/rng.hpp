#ifndef GELKIT_RNG_HPP
#define GELKIT_RNG_HPP

#include <cmath>
#include <cstdint>

namespace gelkit {

// Splittable counter-style generator: the replication seed is derived from
// (base_seed, rep_index) through a 64-bit avalanche, and the stream itself is
// a splitmix-style sequence. Pure integer arithmetic, so word streams are
// identical bit-for-bit across platforms.
class RngStream {
public:
    RngStream(std::uint64_t base_seed, std::uint64_t rep_index)
        : state_(rep_seed(base_seed, rep_index)) {}

    static std::uint64_t avalanche(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t rep_seed(std::uint64_t base_seed, std::uint64_t rep_index) {
        return avalanche(base_seed + 0x9E3779B97F4A7C15ULL * (rep_index + 1));
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return avalanche(state_);
    }

    /// Uniform draw in (0, 1]; never 0, so ln(u) is finite.
    double next_uniform() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

// Standard normals via Box-Muller on uniform pairs, u1 -> radius, u2 -> angle.
// Draws come in pairs; the second is cached.
class NormalSource {
public:
    explicit NormalSource(RngStream& stream) : stream_(stream) {}

    double next() {
        if (have_cache_) {
            have_cache_ = false;
            return cache_;
        }
        const double u1 = stream_.next_uniform();
        const double u2 = stream_.next_uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        cache_ = radius * std::sin(angle);
        have_cache_ = true;
        return radius * std::cos(angle);
    }

private:
    RngStream& stream_;
    double cache_ = 0.0;
    bool have_cache_ = false;
};

} // namespace gelkit

#endif
