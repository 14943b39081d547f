#include "sphtraffic/dynamics.hpp"

#include <cmath>
#include <string>
#include <initializer_list>

namespace sphtraffic {

void PhysicsParams::validate() const {
    if (!(g > 0.0)) throw ValidationError("physics.g must be > 0");
    if (!(k > 0.0 && k < 1.0)) throw ValidationError("physics.k must lie in (0,1)");
    if (!(rho_rest > 0.0)) throw ValidationError("physics.rho_rest must be > 0");
    if (gamma < 0.6 || gamma > 0.9)
        throw ValidationError("physics.gamma = " + std::to_string(gamma) +
                              " outside the [0.6, 0.9] bound");
    if (a_coef < 0.0) throw ValidationError("physics.a_coef must be >= 0");
    if (!(b_coef > 0.0))
        throw ValidationError("physics.b_coef must be > 0 (viscosity law would not "
                              "keep mu + gamma > 1)");
    if (!(xi > 0.0)) throw ValidationError("physics.xi must be > 0");
    if (!(h > 0.0)) throw ValidationError("physics.h must be > 0");
    if (eta2 < 0.0) throw ValidationError("physics.eta2 must be >= 0");
    if (visc_c1 < 0.0 || visc_c2 < 0.0)
        throw ValidationError("physics.visc_c1/visc_c2 must be >= 0");
}

double external_accel(const RoadSegment& seg, const PhysicsParams& p,
                      bool at_destination) {
    if (at_destination) return 0.0;
    return p.g * std::sin(seg.slope_theta);
}

double pressure_from_density(double rho, const PhysicsParams& p,
                             const RoadSegment& seg) {
    return p.k * (rho - p.rho_rest * seg.lanes);
}

double viscosity_coeff(double rho, const PhysicsParams& p) {
    return std::exp(std::exp(p.a_coef) * std::pow(rho, p.b_coef)) - p.gamma;
}

Vec2 pressure_accel_full(const Neighborhood& hood, std::uint32_t i,
                         const std::vector<double>& masses,
                         const std::vector<double>& densities,
                         const std::vector<double>& pressures,
                         const PhysicsParams& p) {
    const double self_term = pressures[i] / (densities[i] * densities[i]);
    Vec2 acc{0.0, 0.0};
    for (const auto& nb : hood.members) {
        if (nb.distance < kCoincidentDistance) continue;
        const double other =
            pressures[nb.index] / (densities[nb.index] * densities[nb.index]);
        const Vec2 grad = kernel_gradient(KernelFamily::pressure_gradient, nb.offset, p.h);
        acc -= masses[nb.index] * (self_term + other) * grad;
    }
    return acc;
}

Vec2 pressure_accel_abridged(const Neighborhood& hood, std::uint32_t i,
                             const std::vector<double>& masses,
                             const std::vector<double>& densities,
                             const std::vector<double>& pressures,
                             const PhysicsParams& p) {
    Vec2 grad_sum{0.0, 0.0};
    for (const auto& nb : hood.members) {
        if (nb.distance < kCoincidentDistance) continue;
        grad_sum += masses[nb.index] *
                    kernel_gradient(KernelFamily::pressure_gradient, nb.offset, p.h);
    }
    const double self_term = pressures[i] / (densities[i] * densities[i]);
    return -self_term * grad_sum;
}

Vec2 pressure_accel_probe(const std::vector<NeighborEntry>& members,
                          double probe_pressure, double probe_density,
                          const std::vector<double>& masses,
                          const PhysicsParams& p) {
    if (members.empty() || probe_density <= 0.0) return {0.0, 0.0};
    Vec2 grad_sum{0.0, 0.0};
    for (const auto& nb : members) {
        if (nb.distance < kCoincidentDistance) continue;
        grad_sum += masses[nb.index] *
                    kernel_gradient(KernelFamily::pressure_gradient, nb.offset, p.h);
    }
    return -(probe_pressure / (probe_density * probe_density)) * grad_sum;
}

namespace {

// Shared pairwise term; offset/velocity difference taken center-minus-neighbor.
Vec2 viscosity_pair(const Vec2& offset, double distance, const Vec2& v_diff,
                    double mu_sum, double m_j, const PhysicsParams& p) {
    const double approach = v_diff.dot(offset);
    if (approach >= 0.0) return {0.0, 0.0};
    const double pi_ij = mu_sum * approach / (distance * distance + p.eta2_effective());
    const double weight = -p.visc_c1 * pi_ij + p.visc_c2 * pi_ij * pi_ij;
    const Vec2 grad = kernel_gradient(KernelFamily::pressure_gradient, offset, p.h);
    return -m_j * weight * grad;
}

}  // namespace

Vec2 viscosity_accel(const Neighborhood& hood, std::uint32_t i,
                     const std::vector<double>& masses,
                     const std::vector<double>& viscosities,
                     const std::vector<Vec2>& velocities,
                     const PhysicsParams& p) {
    Vec2 acc{0.0, 0.0};
    for (const auto& nb : hood.members) {
        if (nb.distance < kCoincidentDistance) continue;
        acc += viscosity_pair(nb.offset, nb.distance,
                              velocities[i] - velocities[nb.index],
                              viscosities[i] + viscosities[nb.index],
                              masses[nb.index], p);
    }
    return acc;
}

Vec2 viscosity_accel_probe(const std::vector<NeighborEntry>& members, double mu_probe,
                           const std::vector<double>& masses,
                           const std::vector<double>& viscosities,
                           const std::vector<Vec2>& velocities,
                           const PhysicsParams& p) {
    Vec2 acc{0.0, 0.0};
    for (const auto& nb : members) {
        if (nb.distance < kCoincidentDistance) continue;
        acc += viscosity_pair(nb.offset, nb.distance, -velocities[nb.index],
                              mu_probe + viscosities[nb.index], masses[nb.index], p);
    }
    return acc;
}

double control_input(const Vec2& tangent_dir, const Vec2& a_ext, const Vec2& a_press,
                     const Vec2& a_visc, double v_signed, const PhysicsParams& p) {
    return tangent_dir.dot(a_ext + a_press + a_visc) - p.xi * v_signed;
}

}  // namespace sphtraffic
