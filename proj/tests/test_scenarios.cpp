#include "doctest.h"

#include "sphtraffic/config_io.hpp"
#include "sphtraffic/engine.hpp"
#include "sphtraffic/scenario.hpp"

#include <cmath>
#include <initializer_list>

using namespace sphtraffic;

TEST_CASE("two_route: four segments, two candidates at the split, slope order") {
    const ScenarioConfig cfg = two_route();
    const RoadNetwork net = validate_config(cfg);
    CHECK(net.segments().size() == 4);
    const auto& cands =
        net.outgoing_candidates(net.node_index("S"), net.node_index("X"));
    CHECK(cands.size() == 2);
    const double theta_a = net.segment(net.segment_index("routeA")).slope_theta;
    const double theta_b = net.segment(net.segment_index("routeB")).slope_theta;
    CHECK(theta_a == doctest::Approx(std::asin(0.8)).epsilon(1e-12));
    CHECK(theta_b == doctest::Approx(std::asin(800.0 / 1500.0)).epsilon(1e-12));
    CHECK(theta_a > theta_b);
}

TEST_CASE("two_route: zero demand runs to empty metrics") {
    TwoRouteParams params;
    params.demand_rate = 0.0;
    params.duration = 5.0;
    ScenarioConfig cfg = two_route(params);
    const RunResult result = run(cfg);
    CHECK(result.final_state.spawned_total == 0);
    for (const auto& row : result.rows) {
        CHECK(row.agent_count == 0);
        CHECK(row.lyapunov.value() == 0.0);
    }
}

TEST_CASE("three_route: three candidates, slope strictly decreasing with length") {
    const ScenarioConfig cfg = three_route();
    const RoadNetwork net = validate_config(cfg);
    const auto& cands =
        net.outgoing_candidates(net.node_index("S"), net.node_index("X"));
    CHECK(cands.size() == 3);
    const double ta = net.segment(net.segment_index("routeA")).slope_theta;
    const double tb = net.segment(net.segment_index("routeB")).slope_theta;
    const double tc = net.segment(net.segment_index("routeC")).slope_theta;
    CHECK(ta > tb);
    CHECK(tb > tc);
}

TEST_CASE("three_route: blind policy always opens on route A when empty") {
    ScenarioConfig cfg = three_route();
    const RoadNetwork net = validate_config(cfg);
    SimulationState state = make_initial_state(cfg, net);
    const FieldState fields = compute_fields(state, net, cfg.physics);
    RoutingPolicy blind;
    blind.kind = PolicyKind::blind_greedy;
    Agent chooser;
    chooser.policy = PolicyKind::blind_greedy;
    chooser.destination = net.node_index("X");
    chooser.segment = net.segment_index("entry");
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const std::uint32_t choice = choose_segment(
            chooser, net.node_index("S"), fields, net, cfg.physics, blind, seed);
        CHECK(net.segment(choice).id == "routeA");
    }
}

TEST_CASE("two_route_closed: valid, parked mode, clamp off, agents fit") {
    const ScenarioConfig cfg = two_route_closed();
    const RoadNetwork net = validate_config(cfg);
    CHECK(cfg.run.arrived_mode == ArrivedMode::park);
    CHECK_FALSE(cfg.run.speed_clamp);
    CHECK(cfg.closed());
    SimulationState state = make_initial_state(cfg, net);
    CHECK(state.agents.size() == 100);
    for (const auto& a : state.agents) {
        CHECK(a.s >= 0.0);
        CHECK(a.s <= net.segment(a.segment).length);
        CHECK(a.mass == 1.0);  // equal masses for the stability run
    }
}

TEST_CASE("cloverleaf: sixty percent of every entry's demand heads to the "
          "main exit") {
    const ScenarioConfig cfg = cloverleaf();
    validate_config(cfg);
    REQUIRE(cfg.demand.size() == 4);
    for (const auto& d : cfg.demand) {
        double main_share = 0.0;
        double total = 0.0;
        for (const auto& [id, w] : d.destinations) {
            total += w;
            if (id == "X_main") main_share += w;
        }
        CHECK(main_share == doctest::Approx(0.6).epsilon(1e-12));
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(d.mix.car == doctest::Approx(0.7));
        CHECK(d.mix.truck == doctest::Approx(0.15));
        CHECK(d.mix.bus == doctest::Approx(0.15));
    }
}

TEST_CASE("cloverleaf: inner bundle saturates under the main-exit demand while "
          "the combined bundles do not") {
    const ScenarioConfig cfg = cloverleaf();
    const RoadNetwork net = validate_config(cfg);
    const RoadSegment& inner = net.segment(net.segment_index("inner"));
    const RoadSegment& outer = net.segment(net.segment_index("outer"));
    // Capacity counts from the congestion detector's formula.
    const double cap_inner = inner.lanes * inner.length / cfg.run.s_min_gap;
    const double cap_outer = outer.lanes * outer.length / cfg.run.s_min_gap;
    // Steady-state occupancy if all main-exit flow crowds the inner bundle:
    // rate * transit time at the damped slope speed.
    const double lambda_main = 0.6 * 4.0 * cfg.demand[0].rate;
    const double creep_inner =
        cfg.physics.g * std::sin(inner.slope_theta) / cfg.physics.xi;
    const double creep_outer =
        cfg.physics.g * std::sin(outer.slope_theta) / cfg.physics.xi;
    const double blind_load = lambda_main * inner.length / creep_inner;
    CHECK(blind_load > cfg.run.congestion.occ_frac * cap_inner);
    // An even split keeps both bundles under their detection thresholds.
    const double split_inner = 0.5 * lambda_main * inner.length / creep_inner;
    const double split_outer = 0.5 * lambda_main * outer.length / creep_outer;
    CHECK(split_inner < cfg.run.congestion.occ_frac * cap_inner);
    CHECK(split_outer < cfg.run.congestion.occ_frac * cap_outer);
    // Equal advance, shorter length: the blind policy prefers the inner
    // bundle deterministically.
    CHECK(inner.advance == outer.advance);
    CHECK(inner.slope_theta > outer.slope_theta);
}

TEST_CASE("cloverleaf: seven exits, four entries, all demand destinations "
          "reachable") {
    const ScenarioConfig cfg = cloverleaf();
    const RoadNetwork net = validate_config(cfg);
    CHECK(net.destination_nodes().size() == 7);
    CHECK(net.entry_nodes().size() == 4);
    for (const auto& d : cfg.demand) {
        const std::uint32_t entry = net.node_index(d.entry);
        for (const auto& [id, w] : d.destinations) {
            if (w <= 0.0) continue;
            CHECK(net.dis_remaining(entry, net.node_index(id)) !=
                  RoadNetwork::kUnreachable);
        }
    }
}

namespace {

// Brute-force oracle: enumerate all simple candidate paths from `node` to
// `dest` and check each path's advance sum telescopes to the table entry.
void check_paths(const RoadNetwork& net, std::uint32_t node, std::uint32_t dest,
                 double advance_so_far, double expected_total, int depth) {
    REQUIRE(depth < 32);
    if (node == dest) {
        CHECK(advance_so_far == doctest::Approx(expected_total).epsilon(1e-9));
        return;
    }
    for (std::uint32_t cand : net.outgoing_candidates(node, dest)) {
        const RoadSegment& seg = net.segment(cand);
        check_paths(net, seg.to_node, dest, advance_so_far + seg.advance,
                    expected_total, depth + 1);
    }
}

}  // namespace

TEST_CASE("telescoping: every candidate path's advance sum equals the table "
          "entry (cloverleaf enumeration oracle)") {
    const ScenarioConfig cfg = cloverleaf();
    const RoadNetwork net = validate_config(cfg);
    for (std::uint32_t entry : net.entry_nodes()) {
        for (std::uint32_t dest : net.destination_nodes()) {
            const double expected = net.dis_remaining(entry, dest);
            if (expected == RoadNetwork::kUnreachable) continue;
            check_paths(net, entry, dest, 0.0, expected, 0);
        }
    }
}

TEST_CASE("builders are deterministic: identical parameters, identical bytes") {
    CHECK(serialize_config(two_route()) == serialize_config(two_route()));
    CHECK(serialize_config(cloverleaf()) == serialize_config(cloverleaf()));
    CHECK(serialize_config(three_route()) == serialize_config(three_route()));
    CHECK(serialize_config(two_route_closed()) == serialize_config(two_route_closed()));
    CHECK(config_hash(two_route()) == config_hash(two_route()));
    CHECK(config_hash(two_route()) != config_hash(cloverleaf()));
}

TEST_CASE("builtin lookup resolves every builder and rejects unknown names") {
    CHECK(builtin_scenario("two_route").name == "two_route");
    CHECK(builtin_scenario("two_route_closed").name == "two_route_closed");
    CHECK(builtin_scenario("three_route").name == "three_route");
    CHECK(builtin_scenario("cloverleaf").name == "cloverleaf");
    CHECK_THROWS_AS(builtin_scenario("motorway"), ValidationError);
}
