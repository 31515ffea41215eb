#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace nwinterp {

// Splittable counter-less stream built on splitmix64. Streams are derived
// from (master seed, purpose tag, n, replicate index), so independent work
// items get independent-looking substreams without sharing state.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform on [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

    // Box-Muller, two uniforms per draw (no cached second variate, so the
    // stream position is a pure function of the number of calls).
    double normal() {
        double u1 = uniform01();
        while (u1 == 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::uint64_t state_;
};

namespace detail {
inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::uint64_t mix(std::uint64_t s, std::uint64_t v) {
    Stream t(s ^ v);
    return t.next_u64();
}
}  // namespace detail

// Derive a substream keyed by (master, tag, a, b).
inline Stream derive_stream(std::uint64_t master, std::string_view tag,
                            std::uint64_t a = 0, std::uint64_t b = 0) {
    std::uint64_t s = detail::mix(master, detail::fnv1a(tag));
    s = detail::mix(s, a);
    s = detail::mix(s, b);
    return Stream(s);
}

}  // namespace nwinterp
