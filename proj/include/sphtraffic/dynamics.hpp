#pragma once

#include "sphtraffic/road_network.hpp"
#include "sphtraffic/sph.hpp"
#include "sphtraffic/vec2.hpp"

#include <vector>

namespace sphtraffic {

enum class PressureForm { abridged, full };

struct PhysicsParams {
    double g = 9.81;        // gravity-like pull, m/s^2
    double k = 0.5;         // state-equation stiffness, in (0,1)
    double rho_rest = 2.5e-3;  // rest density; scaled per segment by lanes
    double gamma = 0.7;     // viscosity-law offset, in [0.6, 0.9]
    double a_coef = 0.0;    // viscosity-law material constants, a >= 0,
    double b_coef = 1.0;    // b > 0
    double xi = 0.3;        // damping coefficient
    double h = 30.0;        // smoothing length == communication range, m
    double eta2 = 0.0;      // Laplace smoothing; 0 means default (0.01 h)^2
    double visc_c1 = 1.0;   // linear artificial-viscosity weight
    double visc_c2 = 0.01;  // quadratic weight
    PressureForm pressure_form = PressureForm::abridged;

    double eta2_effective() const { return eta2 > 0.0 ? eta2 : (0.01 * h) * (0.01 * h); }

    // Throws ValidationError naming the offending field and bound.
    void validate() const;
};

// Skip pairwise terms closer than this: the kernel gradient direction is
// undefined at r = 0.
constexpr double kCoincidentDistance = 1e-9;

// Tangential pull g*sin(theta) toward the segment's to-node; zero once the
// agent stands at its destination.
double external_accel(const RoadSegment& seg, const PhysicsParams& p,
                      bool at_destination = false);

// Modified ideal-gas state equation P = k (rho - rho_rest * lanes). May be
// negative below the effective rest density.
double pressure_from_density(double rho, const PhysicsParams& p, const RoadSegment& seg);

// Closed form of log(log(mu + gamma)) = a - b log(1/rho):
// mu = exp(exp(a) rho^b) - gamma. Strictly increasing in rho for b > 0.
double viscosity_coeff(double rho, const PhysicsParams& p);

// Symmetrized pressure acceleration,
//   a_i = -sum_j m_j (P_i/rho_i^2 + P_j/rho_j^2) grad_i W_ij.
// Pairwise momentum-symmetric; repulsive for positive pressure.
Vec2 pressure_accel_full(const Neighborhood& hood, std::uint32_t i,
                         const std::vector<double>& masses,
                         const std::vector<double>& densities,
                         const std::vector<double>& pressures,
                         const PhysicsParams& p);

// Abridged form keeping only the agent's own P/rho^2:
//   a_i = -(P_i/rho_i^2) sum_j m_j grad_i W_ij.
Vec2 pressure_accel_abridged(const Neighborhood& hood, std::uint32_t i,
                             const std::vector<double>& masses,
                             const std::vector<double>& densities,
                             const std::vector<double>& pressures,
                             const PhysicsParams& p);

// Same abridged form for a massless probe at an arbitrary position (the
// probe's own pressure/density supplied by the caller).
Vec2 pressure_accel_probe(const std::vector<NeighborEntry>& members,
                          double probe_pressure, double probe_density,
                          const std::vector<double>& masses,
                          const PhysicsParams& p);

// Monaghan-style artificial viscosity, active only for approaching pairs
// (v_ij . q_ij < 0): a_i = -sum_j m_j (-c1 Pi_ij + c2 Pi_ij^2) grad_i W_ij
// with Pi_ij = (mu_i + mu_j)(v_ij . q_ij)/(|q_ij|^2 + eta^2). Receding or
// mutually static pairs contribute exactly zero.
Vec2 viscosity_accel(const Neighborhood& hood, std::uint32_t i,
                     const std::vector<double>& masses,
                     const std::vector<double>& viscosities,
                     const std::vector<Vec2>& velocities,
                     const PhysicsParams& p);

// Probe variant (probe velocity = 0, viscosity mu_p supplied).
Vec2 viscosity_accel_probe(const std::vector<NeighborEntry>& members, double mu_probe,
                           const std::vector<double>& masses,
                           const std::vector<double>& viscosities,
                           const std::vector<Vec2>& velocities,
                           const PhysicsParams& p);

struct AgentForces {
    Vec2 external;
    Vec2 pressure;
    Vec2 viscosity;
    Vec2 damping;      // -xi * v (tangential)
    double total = 0.0;  // tangential projection of the sum; the control input
};

// u_i = tangential(a_ext + a_press + a_visc) - xi * v_i (Eq. of motion input;
// the only quantity the integrator consumes).
double control_input(const Vec2& tangent_dir, const Vec2& a_ext, const Vec2& a_press,
                     const Vec2& a_visc, double v_signed, const PhysicsParams& p);

}  // namespace sphtraffic
