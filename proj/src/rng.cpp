#include "sphtraffic/rng.hpp"

#include <cmath>

namespace sphtraffic {

std::uint64_t RngStream::next_poisson(double lambda) {
    if (lambda <= 0.0) return 0;
    const double limit = std::exp(-lambda);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= next_uniform();
    } while (p > limit);
    return k - 1;
}

std::size_t RngStream::next_categorical(const double* weights, std::size_t n) {
    const double u = next_uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += weights[i];
        if (u < acc) return i;
    }
    return n == 0 ? 0 : n - 1;
}

}  // namespace sphtraffic
