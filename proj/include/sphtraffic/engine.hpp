#pragma once

#include "sphtraffic/diagnostics_types.hpp"
#include "sphtraffic/road_network.hpp"
#include "sphtraffic/routing.hpp"
#include "sphtraffic/scenario.hpp"
#include "sphtraffic/snapshot.hpp"

#include <functional>
#include <vector>

namespace sphtraffic {

// State at t = 0: initial placements seeded, clocks zeroed, queues empty.
SimulationState make_initial_state(const ScenarioConfig& cfg, const RoadNetwork& net);

// Poisson arrivals for one step interval, deferred behind the minimum spawn
// gap. Draws are keyed by (seed, entry, step), so the result is independent
// of call order. Does not advance the clock.
SimulationState spawn_arrivals(const SimulationState& state, const ScenarioConfig& cfg,
                               const RoadNetwork& net);

// One semi-implicit Euler step. All SPH reads come from the old snapshot;
// junction crossings resolve overshoot onto the chosen next segment within
// the same step.
SimulationState step(const SimulationState& state, const ScenarioConfig& cfg,
                     const RoadNetwork& net);

struct MetricsRow {
    double t = 0.0;
    std::uint64_t agent_count = 0;    // active (non-parked) agents
    std::uint64_t arrived_count = 0;
    LyapunovSample lyapunov;
    std::vector<std::uint64_t> occupancy;   // aligned with run.metrics_segments
    std::vector<double> mean_speed;         // v_free when a segment is empty
};

struct RunResult {
    std::vector<MetricsRow> rows;
    SimulationState final_state;
    std::vector<CongestionReport> congestion;  // aligned with run.metrics_segments
    double v_free_max = 0.0;
    bool closed_run = false;
    bool park_mode = false;
    bool clamp_disabled = false;
    double dt = 0.0;
};

// Called after every recorded row; artifacts use it to rasterize density
// grids at their own cadence.
using SampleHook = std::function<void(const SimulationState&, const RoadNetwork&)>;

// Full simulation: validates, loops spawn + step until the duration elapses
// or (in closed scenarios) everything has arrived, and collects metrics.
RunResult run(const ScenarioConfig& cfg, const SampleHook& hook = {});

}  // namespace sphtraffic
