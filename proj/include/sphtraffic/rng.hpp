#pragma once

#include <cstdint>

namespace sphtraffic {

// Counter-based deterministic random streams. Every draw is a pure function
// of (seed, stream keys, counter), so results do not depend on evaluation
// order or thread scheduling.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Stream purposes; keep values stable, they are part of the reproducibility
// contract between runs.
enum class RngPurpose : std::uint64_t {
    spawn_count = 1,
    spawn_class = 2,
    spawn_destination = 3,
    routing_compliance = 4,
};

class RngStream {
public:
    RngStream(std::uint64_t seed, RngPurpose purpose,
              std::uint64_t key0 = 0, std::uint64_t key1 = 0, std::uint64_t key2 = 0) {
        std::uint64_t h = splitmix64(seed ^ 0xA5C152F7D3B9E861ull);
        h = splitmix64(h ^ splitmix64(static_cast<std::uint64_t>(purpose)));
        h = splitmix64(h ^ splitmix64(key0 + 0x1B873593ull));
        h = splitmix64(h ^ splitmix64(key1 + 0xCC9E2D51ull));
        h = splitmix64(h ^ splitmix64(key2 + 0x85EBCA6Bull));
        state_ = h;
    }

    std::uint64_t next_u64() { return splitmix64(state_ ^ splitmix64(counter_++)); }

    // Uniform in [0, 1).
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Knuth's product-of-uniforms sampler; exact for any lambda >= 0 at the
    // cost of O(lambda) draws, which is fine at per-step arrival rates.
    std::uint64_t next_poisson(double lambda);

    // Index into cumulative weights (sum assumed ~1); returns last bucket on
    // rounding leftovers.
    std::size_t next_categorical(const double* weights, std::size_t n);

private:
    std::uint64_t state_ = 0;
    std::uint64_t counter_ = 0;
};

}  // namespace sphtraffic
