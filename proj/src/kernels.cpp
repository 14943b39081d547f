#include "sphtraffic/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sphtraffic {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive_h(double h) {
    if (!(h > 0.0)) throw std::invalid_argument("smoothing length h must be > 0");
}

double pow2(double v) { return v * v; }
double pow3(double v) { return v * v * v; }

}  // namespace

double poly6_value(double r, double h) {
    require_positive_h(h);
    if (r >= h) return 0.0;
    const double h2 = h * h;
    const double c = 4.0 / (kPi * h2 * h2 * h2 * h2);
    return c * pow3(h2 - r * r);
}

double spiky_value(double r, double h) {
    require_positive_h(h);
    if (r >= h) return 0.0;
    const double c = 10.0 / (kPi * h * h * h * h * h);
    return c * pow3(h - r);
}

double density_self_weight(double h) {
    require_positive_h(h);
    return 4.0 / (kPi * h * h);
}

double kernel_value(KernelFamily family, const Vec2& r, double h) {
    const double rn = r.norm();
    switch (family) {
        case KernelFamily::density:
            return poly6_value(rn, h);
        case KernelFamily::pressure_gradient:
        case KernelFamily::viscosity:
            return spiky_value(rn, h);
    }
    return 0.0;
}

Vec2 kernel_gradient(KernelFamily family, const Vec2& r, double h) {
    require_positive_h(h);
    const double rn = r.norm();
    if (rn >= h || rn == 0.0) return {0.0, 0.0};
    switch (family) {
        case KernelFamily::density: {
            const double h2 = h * h;
            const double c = -24.0 / (kPi * h2 * h2 * h2 * h2);
            return r * (c * pow2(h2 - rn * rn));
        }
        case KernelFamily::pressure_gradient:
        case KernelFamily::viscosity: {
            const double c = -30.0 / (kPi * h * h * h * h * h);
            return r * (c * pow2(h - rn) / rn);
        }
    }
    return {0.0, 0.0};
}

}  // namespace sphtraffic
