#include "sphtraffic/scenario.hpp"

#include <cmath>
#include <set>
#include <string>
#include <initializer_list>

namespace sphtraffic {

bool ScenarioConfig::closed() const {
    for (const auto& d : demand)
        if (d.rate > 0.0) return false;
    return true;
}

RoadNetwork validate_config(const ScenarioConfig& cfg) {
    RoadNetwork net = RoadNetwork::build(cfg.network);
    cfg.physics.validate();
    cfg.policy.validate(cfg.physics.h);

    if (!(cfg.run.dt > 0.0)) throw ValidationError("run.dt must be > 0");
    if (cfg.run.duration < 0.0) throw ValidationError("run.duration must be >= 0");
    double v_max = 0.0;
    for (const auto& seg : net.segments()) v_max = std::max(v_max, seg.v_free);
    const double dt_bound = 0.1 * cfg.physics.h / v_max;
    if (cfg.run.dt > dt_bound * (1.0 + 1e-12))
        throw ValidationError("run.dt = " + std::to_string(cfg.run.dt) +
                              " violates the stability bound dt <= 0.1*h/v_max = " +
                              std::to_string(dt_bound));
    if (!(cfg.run.s_min_gap > 0.0)) throw ValidationError("run.s_min_gap must be > 0");
    if (cfg.run.density_grid_n != 0 && cfg.run.density_grid_n < 4)
        throw ValidationError("run.density_grid_n must be 0 (off) or >= 4");
    if (!(cfg.run.density_grid_period > 0.0))
        throw ValidationError("run.density_grid_period must be > 0");
    const auto& th = cfg.run.congestion;
    if (!(th.v_jam_frac > 0.0 && th.v_jam_frac < 1.0))
        throw ValidationError("congestion.v_jam_frac must lie in (0,1)");
    if (!(th.occ_frac > 0.0 && th.occ_frac <= 1.0))
        throw ValidationError("congestion.occ_frac must lie in (0,1]");
    if (!(th.window > 0.0)) throw ValidationError("congestion.window must be > 0");

    if (!(cfg.classes.car.mass > 0.0 && cfg.classes.truck.mass > 0.0 &&
          cfg.classes.bus.mass > 0.0))
        throw ValidationError("class masses must be > 0");
    for (const ClassSpec* c : {&cfg.classes.car, &cfg.classes.truck, &cfg.classes.bus})
        if (!(c->v_mult > 0.0 && c->v_mult <= 1.0))
            throw ValidationError("class v_mult must lie in (0,1]");

    std::set<std::string> declared_entries(cfg.network.entries.begin(),
                                           cfg.network.entries.end());
    std::set<std::string> declared_dests(cfg.network.destinations.begin(),
                                         cfg.network.destinations.end());
    for (const auto& d : cfg.demand) {
        if (!declared_entries.count(d.entry))
            throw ValidationError("demand entry '" + d.entry +
                                  "' is not a declared network entry");
        if (d.rate < 0.0)
            throw ValidationError("demand entry '" + d.entry + "': rate must be >= 0");
        const double mix_sum = d.mix.car + d.mix.truck + d.mix.bus;
        if (d.mix.car < 0.0 || d.mix.truck < 0.0 || d.mix.bus < 0.0 ||
            std::abs(mix_sum - 1.0) > 1e-9)
            throw ValidationError("demand entry '" + d.entry +
                                  "': class mix must be nonnegative and sum to 1");
        if (d.destinations.empty())
            throw ValidationError("demand entry '" + d.entry +
                                  "': needs a destination distribution");
        double dest_sum = 0.0;
        const std::uint32_t entry_node = net.node_index(d.entry);
        for (const auto& [id, w] : d.destinations) {
            if (!declared_dests.count(id))
                throw ValidationError("demand entry '" + d.entry + "': destination '" +
                                      id + "' is not a declared destination");
            if (w < 0.0)
                throw ValidationError("demand entry '" + d.entry +
                                      "': destination shares must be >= 0");
            if (w > 0.0 && net.dis_remaining(entry_node, net.node_index(id)) ==
                               RoadNetwork::kUnreachable)
                throw ValidationError("demand entry '" + d.entry + "': destination '" +
                                      id + "' is unreachable from this entry");
            dest_sum += w;
        }
        if (std::abs(dest_sum - 1.0) > 1e-9)
            throw ValidationError("demand entry '" + d.entry +
                                  "': destination shares must sum to 1");
        // Spawns need a unique starting segment.
        int outgoing = 0;
        for (const auto& seg : net.segments())
            if (seg.from_node == entry_node) ++outgoing;
        if (outgoing != 1)
            throw ValidationError("entry '" + d.entry +
                                  "' must have exactly one outgoing segment");
    }

    for (const auto& place : cfg.initial_agents) {
        const std::uint32_t seg_idx = net.segment_index(place.segment);
        const RoadSegment& seg = net.segment(seg_idx);
        if (!(place.spacing > 0.0))
            throw ValidationError("initial_agents on '" + place.segment +
                                  "': spacing must be > 0");
        if (place.start_s < 0.0 ||
            (place.count > 0 &&
             place.start_s + (place.count - 1) * place.spacing > seg.length))
            throw ValidationError("initial_agents on '" + place.segment +
                                  "': placement exceeds segment length");
        const std::uint32_t dest = net.node_index(place.destination);
        if (!net.is_destination(dest))
            throw ValidationError("initial_agents destination '" + place.destination +
                                  "' is not a declared destination");
        if (net.dis_remaining(seg.to_node, dest) == RoadNetwork::kUnreachable)
            throw ValidationError("initial_agents on '" + place.segment +
                                  "': destination unreachable");
        if (place.vehicle_class != "car" && place.vehicle_class != "truck" &&
            place.vehicle_class != "bus")
            throw ValidationError("initial_agents: unknown vehicle class '" +
                                  place.vehicle_class + "'");
    }

    for (const auto& id : cfg.run.metrics_segments) net.segment_index(id);
    std::set<std::string> route_set_segs;
    for (const auto& rs : cfg.run.route_sets) {
        for (const auto& id : rs.segments) {
            net.segment_index(id);
            if (!route_set_segs.insert(id).second)
                throw ValidationError("route sets overlap on segment '" + id + "'");
        }
    }
    return net;
}

namespace {

double chord(const Vec2& a, const Vec2& b) { return (b - a).norm(); }

// Rectangular detour a -> b through two right-angle bends offset `sag` to the
// side; arc length = |sag| + chord + |sag| exactly.
std::vector<Vec2> rect_detour(const Vec2& a, const Vec2& b, double sag) {
    const Vec2 chord_dir = (b - a).normalized();
    const Vec2 normal{-chord_dir.y, chord_dir.x};
    return {a, a + normal * sag, b + normal * sag, b};
}

ScenarioConfig two_route_base() {
    ScenarioConfig cfg;
    cfg.name = "two_route";
    const Vec2 pE{-400.0, 0.0}, pS{0.0, 0.0}, pM{1000.0, 0.0}, pX{1200.0, 0.0};
    cfg.network.nodes = {{"E", pE}, {"S", pS}, {"M", pM}, {"X", pX}};
    cfg.network.segments = {
        // Wide feeder: the lane-scaled rest density keeps the spawn area
        // pressure-neutral so the release gap drains at slope speed.
        {"entry", "E", "S", 400.0, 400.0, 10.0, 5, {}},
        {"routeA", "S", "M", 1000.0, 800.0, 10.0, 1, {}},
        // 250 m south, 1000 m east, 250 m north: arc length 1500 exactly,
        // and the mouth leaves the junction perpendicular to route A.
        {"routeB", "S", "M", 1500.0, 800.0, 10.0, 1, rect_detour(pS, pM, -250.0)},
        {"exit", "M", "X", 200.0, 150.0, 10.0, 4, {}},
    };
    cfg.network.entries = {"E"};
    cfg.network.destinations = {"X"};
    cfg.run.metrics_segments = {"routeA", "routeB"};
    cfg.run.route_sets = {{"A", {"routeA"}}, {"B", {"routeB"}}};
    cfg.physics.h = 30.0;
    cfg.physics.k = 0.9;
    cfg.physics.rho_rest = 1.0e-3;
    cfg.physics.gamma = 0.7;
    cfg.physics.a_coef = 0.0;
    cfg.physics.b_coef = 1.0;
    return cfg;
}

}  // namespace

ScenarioConfig two_route(const TwoRouteParams& params) {
    ScenarioConfig cfg = two_route_base();
    // Desk-scale gravity keeps the slope-pull gap between the routes inside
    // the band the probe's pressure response can overcome.
    cfg.physics.g = 0.1;
    cfg.policy.kind = params.policy;
    cfg.policy.noncompliance_prob = params.noncompliance;
    cfg.run.dt = 0.3;  // CFL: 0.1 * 30 / 10
    cfg.run.duration = params.duration;
    cfg.run.seed = params.seed;
    EntryDemand demand;
    demand.entry = "E";
    demand.rate = params.demand_rate;
    demand.mix = {1.0, 0.0, 0.0};
    demand.destinations = {{"X", 1.0}};
    cfg.demand = {demand};
    return cfg;
}

ScenarioConfig two_route_closed(const TwoRouteClosedParams& params) {
    ScenarioConfig cfg = two_route_base();
    cfg.name = "two_route_closed";
    // Longer entry stub so the column fits at a spawn-safe spacing.
    cfg.network.nodes[0].position = {-900.0, 0.0};
    cfg.network.segments[0].length = 900.0;
    cfg.network.segments[0].advance = 600.0;
    for (auto& seg : cfg.network.segments) seg.v_free = 30.0;
    cfg.physics.g = 9.81;
    cfg.physics.h = 30.0;
    cfg.run.dt = 0.1;  // CFL: 0.1 * 30 / 30
    cfg.run.duration = 2000.0;
    cfg.run.seed = params.seed;
    cfg.run.speed_clamp = false;
    cfg.run.arrived_mode = ArrivedMode::park;
    InitialPlacement place;
    place.segment = "entry";
    place.count = params.agent_count;
    place.start_s = 20.0;
    place.spacing =
        params.agent_count > 1 ? (860.0 / (params.agent_count - 1)) : 8.0;
    place.destination = "X";
    place.vehicle_class = "car";
    cfg.initial_agents = {place};
    return cfg;
}

ScenarioConfig three_route(const ThreeRouteParams& params) {
    ScenarioConfig cfg = two_route(TwoRouteParams{params.demand_rate, params.duration,
                                                  params.policy, params.seed, 0.0});
    cfg.name = "three_route";
    // 500 m north detour: arc length 2000 exactly.
    cfg.network.segments.push_back({"routeC", "S", "M", 2000.0, 800.0, 10.0, 1,
                                    rect_detour({0.0, 0.0}, {1000.0, 0.0}, 500.0)});
    cfg.run.metrics_segments = {"routeA", "routeB", "routeC"};
    cfg.run.route_sets = {{"A", {"routeA"}}, {"B", {"routeB"}}, {"C", {"routeC"}}};
    return cfg;
}

ScenarioConfig cloverleaf(const CloverleafParams& params) {
    ScenarioConfig cfg;
    cfg.name = "cloverleaf";
    // Abstracted interchange: four approach legs feed a shared decision node
    // D in front of the main (left) exit, which is served by an inner short
    // bundle and an outer detour bundle rejoining at M. Six minor exits hang
    // off the approach hubs. Geometry keeps the two bundle mouths apart so
    // the routing probes read their own lanes.
    const Vec2 pEnN{250.0, 900.0}, pEnS{250.0, -900.0}, pEnE{1100.0, 0.0},
        pEnW{250.0, 120.0};
    const Vec2 pHN{250.0, 650.0}, pHS{250.0, -650.0}, pHE{850.0, 0.0},
        pHW{150.0, 120.0};
    const Vec2 pD{0.0, 0.0}, pM{-250.0, 0.0}, pXmain{-450.0, 0.0};
    const Vec2 pX1{600.0, 650.0}, pX2{600.0, -650.0}, pX3{850.0, 350.0},
        pX4{850.0, -350.0}, pX5{-100.0, 650.0}, pX6{-100.0, -650.0};
    cfg.network.nodes = {
        {"En_N", pEnN}, {"En_S", pEnS}, {"En_E", pEnE}, {"En_W", pEnW},
        {"H_N", pHN},   {"H_S", pHS},   {"H_E", pHE},   {"H_W", pHW},
        {"D", pD},      {"M", pM},      {"X_main", pXmain},
        {"X_1", pX1},   {"X_2", pX2},   {"X_3", pX3},   {"X_4", pX4},
        {"X_5", pX5},   {"X_6", pX6},
    };

    auto seg = [&](const std::string& id, const std::string& from,
                   const std::string& to, double length, double advance,
                   double v_free, int lanes, std::vector<Vec2> poly = {}) {
        cfg.network.segments.push_back(
            {id, from, to, length, advance, v_free, lanes, std::move(poly)});
    };
    seg("leg_N", "En_N", "H_N", chord(pEnN, pHN), 200.0, 20.0, 2);
    seg("leg_S", "En_S", "H_S", chord(pEnS, pHS), 200.0, 20.0, 2);
    seg("leg_E", "En_E", "H_E", chord(pEnE, pHE), 200.0, 20.0, 2);
    seg("leg_W", "En_W", "H_W", chord(pEnW, pHW), 80.0, 20.0, 2);
    seg("main_N", "H_N", "D", chord(pHN, pD), 500.0, 20.0, 2);
    seg("main_S", "H_S", "D", chord(pHS, pD), 500.0, 20.0, 2);
    seg("main_E", "H_E", "D", chord(pHE, pD), 500.0, 20.0, 2);
    seg("main_W", "H_W", "D", chord(pHW, pD), 140.0, 20.0, 2);
    // The contested bundles: equal advance, different length, so the blind
    // policy always piles onto the inner one.
    seg("inner", "D", "M", 300.0, 15.0, 20.0, 2, rect_detour(pD, pM, -25.0));
    seg("outer", "D", "M", 330.0, 15.0, 20.0, 2, rect_detour(pD, pM, 40.0));
    seg("exit_main", "M", "X_main", chord(pM, pXmain), 150.0, 20.0, 4);
    seg("off_N1", "H_N", "X_1", chord(pHN, pX1), 280.0, 20.0, 1);
    seg("off_S1", "H_S", "X_2", chord(pHS, pX2), 280.0, 20.0, 1);
    seg("off_E1", "H_E", "X_3", chord(pHE, pX3), 280.0, 20.0, 1);
    seg("off_E2", "H_E", "X_4", chord(pHE, pX4), 280.0, 20.0, 1);
    seg("off_W1", "H_W", "X_5", chord(pHW, pX5), 500.0, 20.0, 1);
    seg("off_W2", "H_W", "X_6", chord(pHW, pX6), 620.0, 20.0, 1);

    cfg.network.entries = {"En_N", "En_S", "En_E", "En_W"};
    cfg.network.destinations = {"X_main", "X_1", "X_2",
                                "X_3",    "X_4", "X_5", "X_6"};

    cfg.physics.g = 1.5;
    cfg.physics.k = 0.9;
    cfg.physics.rho_rest = 1.0e-3;
    cfg.physics.gamma = 0.7;
    cfg.physics.a_coef = 0.0;
    cfg.physics.b_coef = 1.0;
    cfg.physics.h = 15.0;
    cfg.policy.kind = params.policy;
    cfg.policy.noncompliance_prob = params.noncompliance;
    cfg.run.dt = 0.075;  // CFL: 0.1 * 15 / 20
    cfg.run.duration = params.duration;
    cfg.run.seed = params.seed;
    cfg.run.metrics_segments = {"inner", "outer"};
    cfg.run.route_sets = {{"inner", {"inner"}}, {"outer", {"outer"}}};

    // 60% of every entry's vehicles aim for the main exit; the rest leave by
    // the minor exits on their own side.
    auto demand_for = [&](const std::string& entry,
                          std::vector<std::pair<std::string, double>> others) {
        EntryDemand d;
        d.entry = entry;
        d.rate = params.entry_rate;
        d.mix = {0.7, 0.15, 0.15};
        d.destinations = {{"X_main", 0.6}};
        for (auto& [id, w] : others) d.destinations.emplace_back(id, w);
        return d;
    };
    cfg.demand = {
        demand_for("En_N", {{"X_1", 0.4}}),
        demand_for("En_S", {{"X_2", 0.4}}),
        demand_for("En_E", {{"X_3", 0.2}, {"X_4", 0.2}}),
        demand_for("En_W", {{"X_5", 0.2}, {"X_6", 0.2}}),
    };
    return cfg;
}

ScenarioConfig builtin_scenario(const std::string& name) {
    if (name == "two_route") return two_route();
    if (name == "two_route_closed") return two_route_closed();
    if (name == "three_route") return three_route();
    if (name == "cloverleaf") return cloverleaf();
    throw ValidationError("unknown builtin scenario '" + name + "'");
}

}  // namespace sphtraffic
