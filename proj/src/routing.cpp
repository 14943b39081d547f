#include "sphtraffic/routing.hpp"

#include "sphtraffic/rng.hpp"

#include <cmath>
#include <string>

namespace sphtraffic {

void RoutingPolicy::validate(double h) const {
    const double off = probe_offset_effective(h);
    if (!(off > 0.0 && off <= h))
        throw ValidationError("policy.probe_offset must lie in (0, h]");
    if (noncompliance_prob < 0.0 || noncompliance_prob > 1.0)
        throw ValidationError("policy.noncompliance_prob must lie in [0, 1]");
}

FieldState compute_fields(const SimulationState& state, const RoadNetwork& net,
                          const PhysicsParams& params) {
    FieldState f;
    f.agent_slot.reserve(state.agents.size());
    for (std::uint32_t i = 0; i < state.agents.size(); ++i) {
        if (!state.agents[i].parked) f.agent_slot.push_back(i);
    }
    const std::size_t n = f.agent_slot.size();
    f.positions.resize(n);
    f.velocities.resize(n);
    f.tangents.resize(n);
    f.masses.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Agent& a = state.agents[f.agent_slot[i]];
        f.positions[i] = net.embed_position(a.segment, a.s);
        f.tangents[i] = net.tangent(a.segment, a.s);
        f.velocities[i] = f.tangents[i] * a.v;
        f.masses[i] = a.mass;
    }
    f.hoods = find_neighbors(f.positions, params.h);
    f.grid = std::make_unique<NeighborGrid>(f.positions, params.h);
    f.densities.resize(n);
    f.pressures.resize(n);
    f.viscosities.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Agent& a = state.agents[f.agent_slot[i]];
        f.densities[i] = density(f.masses[i], f.hoods[i], f.masses, params.h);
        f.pressures[i] =
            pressure_from_density(f.densities[i], params, net.segment(a.segment));
        f.viscosities[i] = viscosity_coeff(f.densities[i], params);
    }
    return f;
}

double potential(const Agent& agent, const RoadNetwork& net,
                 const PhysicsParams& params) {
    if (agent.parked) return 0.0;
    const RoadSegment& seg = net.segment(agent.segment);
    const double remaining_at_end = net.dis_remaining(seg.to_node, agent.destination);
    if (remaining_at_end == RoadNetwork::kUnreachable)
        throw ValidationError("agent " + std::to_string(agent.id) +
                              ": destination unreachable from segment '" + seg.id + "'");
    const double along = (seg.length - agent.s) * std::sin(seg.slope_theta);
    return params.g * (remaining_at_end + along);
}

double probe_score(std::uint32_t candidate, const FieldState& fields,
                   const RoadNetwork& net, const PhysicsParams& params,
                   const RoutingPolicy& policy) {
    const RoadSegment& seg = net.segment(candidate);
    const double offset =
        std::min(policy.probe_offset_effective(params.h), seg.length);
    const Vec2 probe_pos = net.embed_position(candidate, offset);
    const Vec2 probe_tan = net.tangent(candidate, offset);
    const double slope_term = params.g * std::sin(seg.slope_theta);

    std::vector<NeighborEntry> members;
    fields.grid->neighbors_near(probe_pos, members);
    if (members.empty()) return slope_term;

    double rho_p = 0.0;
    for (const auto& nb : members)
        rho_p += fields.masses[nb.index] * poly6_value(nb.distance, params.h);
    const double pressure_p = pressure_from_density(rho_p, params, seg);
    const double mu_p = viscosity_coeff(rho_p, params);

    const Vec2 a_press =
        pressure_accel_probe(members, pressure_p, rho_p, fields.masses, params);
    const Vec2 a_visc = viscosity_accel_probe(members, mu_p, fields.masses,
                                              fields.viscosities, fields.velocities,
                                              params);
    return slope_term + probe_tan.dot(a_press + a_visc);
}

std::uint32_t choose_segment(const Agent& agent, std::uint32_t node,
                             const FieldState& fields, const RoadNetwork& net,
                             const PhysicsParams& params, const RoutingPolicy& policy,
                             std::uint64_t seed) {
    const auto& candidates = net.outgoing_candidates(node, agent.destination);
    if (candidates.empty())
        throw ValidationError("no outgoing candidates at node '" + net.node_id(node) +
                              "' toward '" + net.node_id(agent.destination) +
                              "' (malformed network)");
    if (candidates.size() == 1) return candidates[0];

    PolicyKind effective = agent.policy;
    if (effective == PolicyKind::sph_dynamic && policy.noncompliance_prob > 0.0) {
        RngStream coin(seed, RngPurpose::routing_compliance, agent.id,
                       agent.junctions_crossed);
        if (coin.next_uniform() < policy.noncompliance_prob)
            effective = PolicyKind::blind_greedy;
    }

    std::uint32_t best = candidates[0];
    double best_score = 0.0;
    double best_remaining = 0.0;
    bool first = true;
    for (std::uint32_t cand : candidates) {
        const RoadSegment& seg = net.segment(cand);
        const double score = effective == PolicyKind::sph_dynamic
                                 ? probe_score(cand, fields, net, params, policy)
                                 : params.g * std::sin(seg.slope_theta);
        const double remaining = net.dis_remaining(seg.to_node, agent.destination);
        const bool better =
            first || score > best_score ||
            (score == best_score &&
             (remaining < best_remaining ||
              (remaining == best_remaining && seg.id < net.segment(best).id)));
        if (better) {
            best = cand;
            best_score = score;
            best_remaining = remaining;
            first = false;
        }
    }
    return best;
}

}  // namespace sphtraffic
