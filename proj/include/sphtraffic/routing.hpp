#pragma once

#include "sphtraffic/dynamics.hpp"
#include "sphtraffic/road_network.hpp"
#include "sphtraffic/snapshot.hpp"
#include "sphtraffic/sph.hpp"

#include <memory>
#include <vector>

namespace sphtraffic {

struct RoutingPolicy {
    PolicyKind kind = PolicyKind::sph_dynamic;
    double probe_offset = 0.0;        // meters into the candidate; 0 selects 0.5 h
    double noncompliance_prob = 0.0;  // chance an sph agent acts blind, per junction

    double probe_offset_effective(double h) const {
        return probe_offset > 0.0 ? probe_offset : 0.5 * h;
    }
    void validate(double h) const;
};

// Per-step field snapshot over the active (non-parked) agents: embedded
// positions, 2-D velocities, and the SPH quantities every force and routing
// query reads. Pure function of the simulation snapshot.
struct FieldState {
    std::vector<std::uint32_t> agent_slot;  // field index -> state.agents index
    std::vector<Vec2> positions;
    std::vector<Vec2> velocities;
    std::vector<Vec2> tangents;
    std::vector<double> masses;
    std::vector<double> densities;
    std::vector<double> pressures;
    std::vector<double> viscosities;
    std::vector<Neighborhood> hoods;
    std::unique_ptr<NeighborGrid> grid;
};

FieldState compute_fields(const SimulationState& state, const RoadNetwork& net,
                          const PhysicsParams& params);

// Remaining potential g * Dis_remaining integrated along the agent's route;
// zero exactly at the destination and continuous across junctions.
double potential(const Agent& agent, const RoadNetwork& net, const PhysicsParams& params);

// Predicted initial tangential acceleration of a massless probe placed
// probe_offset meters into the candidate: slope pull plus the probe's
// abridged pressure and (when any neighbor approaches) viscosity response.
// Higher score = faster expected start.
double probe_score(std::uint32_t candidate, const FieldState& fields,
                   const RoadNetwork& net, const PhysicsParams& params,
                   const RoutingPolicy& policy);

// Junction decision for an agent standing at `node`. sph-dynamic maximizes
// probe_score, blind-greedy maximizes slope pull; ties break toward smaller
// remaining advance, then smaller segment id. A per-junction coin with
// probability noncompliance_prob downgrades an sph agent to blind for this
// decision only.
std::uint32_t choose_segment(const Agent& agent, std::uint32_t node,
                             const FieldState& fields, const RoadNetwork& net,
                             const PhysicsParams& params, const RoutingPolicy& policy,
                             std::uint64_t seed);

}  // namespace sphtraffic
