#include "sphtraffic/engine.hpp"

#include "sphtraffic/diagnostics.hpp"
#include "sphtraffic/rng.hpp"

#include <algorithm>
#include <cmath>

namespace sphtraffic {

namespace {

VehicleClass class_from_name(const std::string& name) {
    if (name == "car") return VehicleClass::car;
    if (name == "truck") return VehicleClass::truck;
    if (name == "bus") return VehicleClass::bus;
    throw ValidationError("unknown vehicle class '" + name + "'");
}

double clamp_speed(double v, const RoadSegment& seg, const ClassTable& classes,
                   VehicleClass cls) {
    return std::clamp(v, 0.0, seg.v_free * classes.of(cls).v_mult);
}

// Entry nodes carry exactly one outgoing segment (validated); spawns start
// on it at s = 0.
std::uint32_t entry_segment(const RoadNetwork& net, std::uint32_t entry_node) {
    for (const auto& seg : net.segments())
        if (seg.from_node == entry_node) return seg.index;
    throw ValidationError("entry node '" + net.node_id(entry_node) +
                          "' has no outgoing segment");
}

}  // namespace

SimulationState make_initial_state(const ScenarioConfig& cfg, const RoadNetwork& net) {
    SimulationState state;
    state.seed = cfg.run.seed;
    state.spawn_queues.assign(cfg.demand.size(), {});
    for (const auto& place : cfg.initial_agents) {
        const std::uint32_t seg = net.segment_index(place.segment);
        const std::uint32_t dest = net.node_index(place.destination);
        const VehicleClass cls = class_from_name(place.vehicle_class);
        for (std::uint32_t i = 0; i < place.count; ++i) {
            Agent a;
            a.id = state.next_agent_id++;
            a.cls = cls;
            a.mass = cfg.classes.of(cls).mass;
            a.segment = seg;
            a.s = place.start_s + i * place.spacing;
            a.v = 0.0;
            a.destination = dest;
            a.policy = cfg.policy.kind;
            a.spawn_time = 0.0;
            state.agents.push_back(a);
            ++state.spawned_total;
        }
    }
    return state;
}

SimulationState spawn_arrivals(const SimulationState& state, const ScenarioConfig& cfg,
                               const RoadNetwork& net) {
    if (cfg.demand.empty()) return state;
    SimulationState next = state;
    for (std::size_t e = 0; e < cfg.demand.size(); ++e) {
        const EntryDemand& demand = cfg.demand[e];
        if (demand.rate > 0.0) {
            RngStream stream(state.seed, RngPurpose::spawn_count,
                             static_cast<std::uint64_t>(e), state.step_index);
            const std::uint64_t n = stream.next_poisson(demand.rate * cfg.run.dt);
            const double mix[3] = {demand.mix.car, demand.mix.truck, demand.mix.bus};
            for (std::uint64_t j = 0; j < n; ++j) {
                SimulationState::QueuedSpawn q;
                q.cls = static_cast<VehicleClass>(stream.next_categorical(mix, 3));
                std::vector<double> dest_w;
                dest_w.reserve(demand.destinations.size());
                for (const auto& [id, w] : demand.destinations) dest_w.push_back(w);
                const std::size_t d = stream.next_categorical(dest_w.data(), dest_w.size());
                q.destination = net.node_index(demand.destinations[d].first);
                q.policy = cfg.policy.kind;
                next.spawn_queues[e].push_back(q);
                ++next.spawned_total;
            }
        }
        // Release the queue head while the entry segment's first gap is free.
        const std::uint32_t seg = entry_segment(net, net.node_index(demand.entry));
        while (!next.spawn_queues[e].empty()) {
            bool blocked = false;
            for (const Agent& a : next.agents) {
                if (!a.parked && a.segment == seg && a.s < cfg.run.s_min_gap) {
                    blocked = true;
                    break;
                }
            }
            if (blocked) break;
            const auto& q = next.spawn_queues[e].front();
            Agent a;
            a.id = next.next_agent_id++;
            a.cls = q.cls;
            a.mass = cfg.classes.of(q.cls).mass;
            a.segment = seg;
            a.s = 0.0;
            a.v = 0.0;
            a.destination = q.destination;
            a.policy = q.policy;
            a.spawn_time = state.t;
            next.agents.push_back(a);
            next.spawn_queues[e].erase(next.spawn_queues[e].begin());
        }
    }
    return next;
}

SimulationState step(const SimulationState& state, const ScenarioConfig& cfg,
                     const RoadNetwork& net) {
    const double dt = cfg.run.dt;
    const FieldState fields = compute_fields(state, net, cfg.physics);

    SimulationState next;
    next.t = state.t + dt;
    next.step_index = state.step_index + 1;
    next.seed = state.seed;
    next.spawned_total = state.spawned_total;
    next.next_agent_id = state.next_agent_id;
    next.spawn_queues = state.spawn_queues;
    next.arrived = state.arrived;
    next.agents.reserve(state.agents.size());

    for (std::size_t fi = 0; fi < fields.agent_slot.size(); ++fi) {
        Agent a = state.agents[fields.agent_slot[fi]];
        const RoadSegment* seg = &net.segment(a.segment);

        const Vec2 tangent = fields.tangents[fi];
        const Vec2 a_ext = tangent * external_accel(*seg, cfg.physics);
        const Vec2 a_press =
            cfg.physics.pressure_form == PressureForm::full
                ? pressure_accel_full(fields.hoods[fi], static_cast<std::uint32_t>(fi),
                                      fields.masses, fields.densities, fields.pressures,
                                      cfg.physics)
                : pressure_accel_abridged(fields.hoods[fi], static_cast<std::uint32_t>(fi),
                                          fields.masses, fields.densities,
                                          fields.pressures, cfg.physics);
        const Vec2 a_visc =
            viscosity_accel(fields.hoods[fi], static_cast<std::uint32_t>(fi),
                            fields.masses, fields.viscosities, fields.velocities,
                            cfg.physics);
        const double u = control_input(tangent, a_ext, a_press, a_visc, a.v, cfg.physics);

        double v_new = a.v + u * dt;
        if (cfg.run.speed_clamp) v_new = clamp_speed(v_new, *seg, cfg.classes, a.cls);
        double s_new = a.s + v_new * dt;

        bool arrived = false;
        int crossings = 0;
        while (s_new >= seg->length) {
            if (net.is_destination(seg->to_node) && seg->to_node == a.destination) {
                ArrivalRecord rec{a.id, a.cls, a.spawn_time, next.t};
                next.arrived.push_back(rec);
                if (cfg.run.arrived_mode == ArrivedMode::park) {
                    a.s = seg->length;
                    a.v = 0.0;
                    a.parked = true;
                    next.agents.push_back(a);
                }
                arrived = true;
                break;
            }
            if (++crossings > 8) {  // unreachable under the CFL bound
                s_new = seg->length;
                break;
            }
            const double overshoot = s_new - seg->length;
            const std::uint32_t chosen = choose_segment(
                a, seg->to_node, fields, net, cfg.physics, cfg.policy, state.seed);
            a.segment = chosen;
            ++a.junctions_crossed;
            seg = &net.segment(chosen);
            if (cfg.run.speed_clamp) v_new = clamp_speed(v_new, *seg, cfg.classes, a.cls);
            s_new = overshoot;
        }
        if (arrived) continue;
        if (s_new < 0.0) {  // pressed backward against the segment start
            s_new = 0.0;
            v_new = std::max(v_new, 0.0);
        }
        a.s = s_new;
        a.v = v_new;
        next.agents.push_back(a);
    }
    // Parked agents persist untouched.
    for (const Agent& a : state.agents)
        if (a.parked) next.agents.push_back(a);
    std::sort(next.agents.begin(), next.agents.end(),
              [](const Agent& x, const Agent& y) { return x.id < y.id; });
    return next;
}

RunResult run(const ScenarioConfig& cfg, const SampleHook& hook) {
    const RoadNetwork net = validate_config(cfg);
    RunResult result;
    result.closed_run = cfg.closed();
    result.park_mode = cfg.run.arrived_mode == ArrivedMode::park;
    result.clamp_disabled = !cfg.run.speed_clamp;
    result.dt = cfg.run.dt;
    for (const auto& seg : net.segments())
        result.v_free_max = std::max(result.v_free_max, seg.v_free);

    std::vector<std::uint32_t> monitored;
    monitored.reserve(cfg.run.metrics_segments.size());
    for (const auto& id : cfg.run.metrics_segments)
        monitored.push_back(net.segment_index(id));

    auto record = [&](const SimulationState& state) {
        MetricsRow row;
        row.t = state.t;
        row.arrived_count = state.arrived.size();
        for (const Agent& a : state.agents)
            if (!a.parked) ++row.agent_count;
        row.lyapunov = lyapunov_sample(state, net, cfg.physics);
        row.occupancy.resize(monitored.size(), 0);
        row.mean_speed.resize(monitored.size(), 0.0);
        for (std::size_t m = 0; m < monitored.size(); ++m) {
            double speed_sum = 0.0;
            std::uint64_t count = 0;
            for (const Agent& a : state.agents) {
                if (!a.parked && a.segment == monitored[m]) {
                    ++count;
                    speed_sum += std::abs(a.v);
                }
            }
            row.occupancy[m] = count;
            row.mean_speed[m] =
                count > 0 ? speed_sum / count : net.segment(monitored[m]).v_free;
        }
        result.rows.push_back(std::move(row));
        if (hook) hook(state, net);
    };

    SimulationState state = make_initial_state(cfg, net);
    // Never step past the requested duration; a trailing fraction of a step
    // is dropped.
    const std::uint64_t steps =
        static_cast<std::uint64_t>(std::floor(cfg.run.duration / cfg.run.dt + 1e-9));
    if (steps > 0) record(state);
    for (std::uint64_t k = 0; k < steps; ++k) {
        state = spawn_arrivals(state, cfg, net);
        state = step(state, cfg, net);
        record(state);
        if (result.closed_run) {
            bool any_active = false;
            for (const Agent& a : state.agents)
                if (!a.parked) { any_active = true; break; }
            if (!any_active) break;
        }
    }
    result.final_state = std::move(state);

    for (std::size_t m = 0; m < monitored.size(); ++m) {
        SegmentSeries series;
        series.segment = cfg.run.metrics_segments[m];
        series.t.reserve(result.rows.size());
        for (const auto& row : result.rows) {
            series.t.push_back(row.t);
            series.occupancy.push_back(row.occupancy[m]);
            series.mean_speed.push_back(row.mean_speed[m]);
        }
        result.congestion.push_back(congestion_onset(
            series, net.segment(monitored[m]), cfg.run.congestion, cfg.run.s_min_gap));
    }
    return result;
}

}  // namespace sphtraffic
