#pragma once

#include "sphtraffic/diagnostics_types.hpp"
#include "sphtraffic/road_network.hpp"
#include "sphtraffic/routing.hpp"
#include "sphtraffic/scenario.hpp"
#include "sphtraffic/snapshot.hpp"

#include <vector>

namespace sphtraffic {

struct RunResult;

// V = Phi_S + sum e-dot + sum 1/2 v^T v, evaluated on the snapshot exactly as
// the stability argument writes it. Pure function: recomputing on a stored
// snapshot reproduces the logged value bit for bit.
LyapunovSample lyapunov_sample(const SimulationState& state, const RoadNetwork& net,
                               const PhysicsParams& params);

struct DescentReport {
    double descent_fraction = 0.0;  // steps with V(t+dt) <= V(t) + eps, post-transient
    double max_increase = 0.0;
    double terminal_max_speed = 0.0;
    double min_value = 0.0;         // smallest V observed (sign monitor)
    double eps = 0.0;
    bool passed = false;
};

// Validates the run was closed (no demand), park-at-destination, clamp off,
// then checks V decreases within eps for >= 99% of steps after a 10 s
// transient and that terminal speeds died out.
DescentReport check_descent(const RunResult& result, double eps);

struct DensityGrid {
    int nx = 0;
    int ny = 0;
    double x_min = 0.0;
    double y_min = 0.0;
    double cell = 0.0;
    std::vector<double> values;  // row-major, ny rows of nx
};

// SPH density sampled at cell centers over the network bounding box (padded
// by one support radius so the kernel mass is fully covered). grid_n is the
// cell count along the longer box side; grid_n < 4 is rejected.
DensityGrid density_map(const SimulationState& state, const RoadNetwork& net,
                        const PhysicsParams& params, int grid_n);

struct SegmentSeries {
    std::string segment;
    std::vector<double> t;
    std::vector<std::uint64_t> occupancy;
    std::vector<double> mean_speed;
};

// Earliest time the jam condition (mean speed below v_jam_frac * v_free and
// occupancy at least occ_frac * capacity, capacity = lanes * length /
// s_min_gap) holds continuously for the full window; empty when never.
CongestionReport congestion_onset(const SegmentSeries& series, const RoadSegment& seg,
                                  const CongestionThresholds& thresholds,
                                  double s_min_gap);

// Occupancy fraction per route set (disjoint segment groups); fractions sum
// to 1 when any member segment is occupied, all-zero otherwise.
std::vector<double> load_balance_index(const SimulationState& state,
                                       const RoadNetwork& net,
                                       const std::vector<RouteSet>& route_sets);

}  // namespace sphtraffic
