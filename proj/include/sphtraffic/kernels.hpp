#pragma once

#include "sphtraffic/vec2.hpp"

namespace sphtraffic {

// 2-D smoothing kernels with compact support radius h (the agents'
// communication range). poly6 weights densities, spiky drives pressure
// gradients; the artificial-viscosity term reuses the spiky gradient.
enum class KernelFamily {
    density,
    pressure_gradient,
    viscosity,
};

// poly6: W(r,h) = 4/(pi h^8) (h^2 - r^2)^3 for r < h, else 0.
double poly6_value(double r, double h);

// spiky: W(r,h) = 10/(pi h^5) (h - r)^3 for r < h, else 0.
double spiky_value(double r, double h);

// W(0,h) for the density kernel; the self-contribution floor of every
// agent's density.
double density_self_weight(double h);

// Kernel value at offset r (scalar 1/m^2). Throws std::invalid_argument on
// h <= 0.
double kernel_value(KernelFamily family, const Vec2& r, double h);

// Gradient with respect to the center position, evaluated at offset
// r = q_center - q_neighbor. Antisymmetric in r; zero outside support and at
// exactly r = 0 (direction undefined there).
Vec2 kernel_gradient(KernelFamily family, const Vec2& r, double h);

}  // namespace sphtraffic
