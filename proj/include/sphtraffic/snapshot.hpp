#pragma once

#include "sphtraffic/vec2.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sphtraffic {

enum class VehicleClass : std::uint8_t { car = 0, truck = 1, bus = 2 };

inline const char* vehicle_class_name(VehicleClass c) {
    switch (c) {
        case VehicleClass::car: return "car";
        case VehicleClass::truck: return "truck";
        case VehicleClass::bus: return "bus";
    }
    return "car";
}

enum class PolicyKind : std::uint8_t { sph_dynamic = 0, blind_greedy = 1 };

struct Agent {
    std::uint64_t id = 0;
    VehicleClass cls = VehicleClass::car;
    double mass = 1.0;
    std::uint32_t segment = 0;   // current segment index
    double s = 0.0;              // arc position, meters
    double v = 0.0;              // signed tangential speed, m/s
    std::uint32_t destination = 0;  // node index
    PolicyKind policy = PolicyKind::sph_dynamic;
    double spawn_time = 0.0;
    std::uint32_t junctions_crossed = 0;
    bool parked = false;         // reached destination in park mode
};

struct ArrivalRecord {
    std::uint64_t id = 0;
    VehicleClass cls = VehicleClass::car;
    double spawn_time = 0.0;
    double arrival_time = 0.0;
};

// Immutable per-step snapshot; stepping maps snapshot -> snapshot. The RNG is
// counter-based, so (seed, step_index) fully determines every draw.
struct SimulationState {
    double t = 0.0;
    std::uint64_t step_index = 0;
    std::uint64_t seed = 0;
    std::vector<Agent> agents;
    std::vector<ArrivalRecord> arrived;
    std::uint64_t spawned_total = 0;   // Poisson draws, including still-queued
    std::uint64_t next_agent_id = 0;
    // Per-entry FIFO of deferred spawns (entry order matches config).
    struct QueuedSpawn {
        VehicleClass cls;
        std::uint32_t destination;
        PolicyKind policy;
    };
    std::vector<std::vector<QueuedSpawn>> spawn_queues;
};

}  // namespace sphtraffic
