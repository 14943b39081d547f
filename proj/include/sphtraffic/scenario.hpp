#pragma once

#include "sphtraffic/dynamics.hpp"
#include "sphtraffic/road_network.hpp"
#include "sphtraffic/routing.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sphtraffic {

struct ClassSpec {
    double mass = 1.0;
    double v_mult = 1.0;  // fraction of the segment speed limit
};

struct ClassTable {
    ClassSpec car{1.0, 1.0};
    ClassSpec truck{2.5, 0.7};
    ClassSpec bus{1.8, 0.85};

    const ClassSpec& of(VehicleClass c) const {
        switch (c) {
            case VehicleClass::car: return car;
            case VehicleClass::truck: return truck;
            case VehicleClass::bus: return bus;
        }
        return car;
    }
};

struct ClassMix {
    double car = 1.0;
    double truck = 0.0;
    double bus = 0.0;
};

// Poisson demand process attached to one entry node.
struct EntryDemand {
    std::string entry;
    double rate = 0.0;  // vehicles/second
    ClassMix mix;
    std::vector<std::pair<std::string, double>> destinations;  // node id -> share
};

// Deterministic initial placement for closed scenarios.
struct InitialPlacement {
    std::string segment;
    std::uint32_t count = 0;
    double start_s = 0.0;
    double spacing = 8.0;
    std::string destination;
    std::string vehicle_class = "car";
};

struct CongestionThresholds {
    double v_jam_frac = 0.05;
    double occ_frac = 0.8;
    double window = 60.0;  // seconds the condition must hold continuously
};

struct RouteSet {
    std::string name;
    std::vector<std::string> segments;
};

enum class ArrivedMode { sink, park };

struct RunSettings {
    double dt = 0.1;
    double duration = 0.0;
    std::uint64_t seed = 1;
    bool speed_clamp = true;
    ArrivedMode arrived_mode = ArrivedMode::sink;
    double s_min_gap = 7.0;
    std::vector<std::string> metrics_segments;
    std::vector<RouteSet> route_sets;
    int density_grid_n = 0;          // 0 disables; otherwise >= 4
    double density_grid_period = 1.0;
    CongestionThresholds congestion;
};

struct ScenarioConfig {
    std::string name;
    NetworkSpec network;
    std::vector<EntryDemand> demand;
    std::vector<InitialPlacement> initial_agents;
    PhysicsParams physics;
    RoutingPolicy policy;
    ClassTable classes;
    RunSettings run;

    bool closed() const;  // no positive spawn rate anywhere
};

// Full cross-module validation; returns the built network. Throws
// ValidationError with a field-specific message on the first failure.
RoadNetwork validate_config(const ScenarioConfig& cfg);

// Canonical scenario builders. All parameters are frozen so that identical
// calls serialize identically.
struct TwoRouteParams {
    // 1.5x route A's jam capacity (length/s_min_gap agents) drained over its
    // damped-slope transit time: 1.5 * (1000/7) / 3750 s.
    double demand_rate = 2.0 / 35.0;
    double duration = 3600.0;
    PolicyKind policy = PolicyKind::sph_dynamic;
    std::uint64_t seed = 1;
    double noncompliance = 0.0;
};
ScenarioConfig two_route(const TwoRouteParams& params = {});

// Closed variant used by the Lyapunov acceptance run: equal-mass agents laid
// out on the entry stub, park-at-destination, speed clamp off.
struct TwoRouteClosedParams {
    std::uint32_t agent_count = 100;
    std::uint64_t seed = 1;
};
ScenarioConfig two_route_closed(const TwoRouteClosedParams& params = {});

struct ThreeRouteParams {
    double demand_rate = 2.0 / 35.0;
    double duration = 3600.0;
    PolicyKind policy = PolicyKind::sph_dynamic;
    std::uint64_t seed = 1;
};
ScenarioConfig three_route(const ThreeRouteParams& params = {});

struct CloverleafParams {
    double entry_rate = 0.033;   // vehicles/second per entry
    double duration = 3600.0;
    PolicyKind policy = PolicyKind::sph_dynamic;
    std::uint64_t seed = 1;
    double noncompliance = 0.0;
};
ScenarioConfig cloverleaf(const CloverleafParams& params = {});

// Builder lookup by name ("two_route", "two_route_closed", "three_route",
// "cloverleaf"); throws ValidationError on unknown names.
ScenarioConfig builtin_scenario(const std::string& name);

}  // namespace sphtraffic
