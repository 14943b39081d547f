#include "doctest.h"

#include "sphtraffic/config_io.hpp"
#include "sphtraffic/engine.hpp"
#include "sphtraffic/rng.hpp"

#include <cmath>
#include <set>
#include <initializer_list>

using namespace sphtraffic;

namespace {

// Minimal one-segment world for integrator checks.
ScenarioConfig sole_segment_config(double advance) {
    ScenarioConfig cfg;
    cfg.name = "sole";
    cfg.network.nodes = {{"U", {0.0, 0.0}}, {"V", {1000.0, 0.0}}};
    cfg.network.segments = {{"only", "U", "V", 1000.0, advance, 30.0, 1, {}}};
    cfg.network.entries = {"U"};
    cfg.network.destinations = {"V"};
    cfg.physics.h = 30.0;
    cfg.run.dt = 0.1;
    cfg.run.duration = 1.0;
    cfg.run.speed_clamp = false;
    InitialPlacement place;
    place.segment = "only";
    place.count = 1;
    place.start_s = 0.0;
    place.spacing = 8.0;
    place.destination = "V";
    cfg.initial_agents = {place};
    return cfg;
}

std::uint64_t queued_total(const SimulationState& state) {
    std::uint64_t n = 0;
    for (const auto& q : state.spawn_queues) n += q.size();
    return n;
}

}  // namespace

TEST_CASE("empty state steps to an empty state with the clock advanced") {
    ScenarioConfig cfg = sole_segment_config(500.0);
    cfg.initial_agents.clear();
    const RoadNetwork net = validate_config(cfg);
    SimulationState state = make_initial_state(cfg, net);
    const SimulationState next = step(state, cfg, net);
    CHECK(next.agents.empty());
    CHECK(next.t == doctest::Approx(cfg.run.dt));
    CHECK(next.step_index == 1);
}

TEST_CASE("single agent on a flat segment at rest stays at rest") {
    ScenarioConfig cfg = sole_segment_config(0.0);  // level: no slope pull
    const RoadNetwork net = validate_config(cfg);
    SimulationState state = make_initial_state(cfg, net);
    for (int k = 0; k < 20; ++k) state = step(state, cfg, net);
    REQUIRE(state.agents.size() == 1);
    CHECK(state.agents[0].s == 0.0);
    CHECK(state.agents[0].v == 0.0);
}

TEST_CASE("hand-stepped semi-implicit Euler: theta=pi/6, dt=0.1, clamp off") {
    ScenarioConfig cfg = sole_segment_config(500.0);  // sin(theta) = 0.5
    const RoadNetwork net = validate_config(cfg);
    SimulationState state = make_initial_state(cfg, net);
    const SimulationState next = step(state, cfg, net);
    REQUIRE(next.agents.size() == 1);
    // u = 9.81*0.5 = 4.905; v' = 0.4905; s' = v' * dt = 0.04905.
    CHECK(next.agents[0].v == doctest::Approx(0.4905).epsilon(1e-12));
    CHECK(next.agents[0].s == doctest::Approx(0.04905).epsilon(1e-12));
}

TEST_CASE("speed clamp caps at v_free times the class multiplier") {
    ScenarioConfig cfg = sole_segment_config(999.0);  // near-vertical pull
    cfg.run.speed_clamp = true;
    cfg.network.segments[0].v_free = 2.0;
    cfg.run.dt = 0.1;  // CFL: 0.1*30/2 = 1.5
    cfg.initial_agents[0].vehicle_class = "truck";   // v_mult 0.7
    const RoadNetwork net = validate_config(cfg);
    SimulationState state = make_initial_state(cfg, net);
    for (int k = 0; k < 100; ++k) state = step(state, cfg, net);
    REQUIRE(state.agents.size() == 1);
    CHECK(state.agents[0].v <= 2.0 * 0.7 + 1e-12);
    CHECK(state.agents[0].v == doctest::Approx(1.4));
}

TEST_CASE("spawn: zero rate never spawns") {
    ScenarioConfig cfg = sole_segment_config(500.0);
    cfg.initial_agents.clear();
    EntryDemand d;
    d.entry = "U";
    d.rate = 0.0;
    d.destinations = {{"V", 1.0}};
    cfg.demand = {d};
    const RoadNetwork net = validate_config(cfg);
    SimulationState state = make_initial_state(cfg, net);
    for (int k = 0; k < 200; ++k) {
        state = spawn_arrivals(state, cfg, net);
        state = step(state, cfg, net);
    }
    CHECK(state.spawned_total == 0);
    CHECK(state.agents.empty());
}

TEST_CASE("spawn gap rule: huge demand queues instead of overlapping") {
    ScenarioConfig cfg = sole_segment_config(500.0);
    cfg.initial_agents.clear();
    cfg.run.speed_clamp = true;
    cfg.network.segments[0].v_free = 1.0;
    cfg.run.dt = 1.0;  // CFL: 0.1*30/1 = 3; lambda*dt = 1000 per step
    EntryDemand d;
    d.entry = "U";
    d.rate = 1000.0;
    d.destinations = {{"V", 1.0}};
    cfg.demand = {d};
    const RoadNetwork net = validate_config(cfg);
    SimulationState state = make_initial_state(cfg, net);
    for (int k = 0; k < 20; ++k) {
        state = spawn_arrivals(state, cfg, net);
        state = step(state, cfg, net);
        // No two active agents within the spawn gap of the entry start, and
        // conservation holds with the queue included.
        int near_start = 0;
        for (const auto& a : state.agents)
            if (a.segment == 0 && a.s < cfg.run.s_min_gap) ++near_start;
        CHECK(near_start <= 1);
        CHECK(state.spawned_total ==
              state.agents.size() + state.arrived.size() + queued_total(state));
    }
    CHECK(queued_total(state) > 0);  // the queue really grew
}

TEST_CASE("poisson sampler: law of large numbers at lambda*dt = 0.05") {
    // 10^6 steps at rate 0.5/s, dt 0.1 -> expect 50,000 within 1%.
    std::uint64_t total = 0;
    for (std::uint64_t step_idx = 0; step_idx < 1000000; ++step_idx) {
        RngStream stream(1234, RngPurpose::spawn_count, 0, step_idx);
        total += stream.next_poisson(0.05);
    }
    CHECK(static_cast<double>(total) == doctest::Approx(50000.0).epsilon(0.01));
}

TEST_CASE("run: duration 0 gives empty metrics and zero steps") {
    ScenarioConfig cfg = sole_segment_config(500.0);
    cfg.run.duration = 0.0;
    const RunResult result = run(cfg);
    CHECK(result.rows.empty());
    CHECK(result.final_state.t == 0.0);
}

TEST_CASE("run: closed scenario conserves agents and stops when everyone arrived") {
    ScenarioConfig cfg = sole_segment_config(500.0);
    cfg.initial_agents[0].count = 10;
    cfg.initial_agents[0].spacing = 10.0;
    cfg.run.duration = 600.0;
    cfg.run.speed_clamp = true;
    const RunResult result = run(cfg);
    CHECK(result.final_state.arrived.size() == 10);
    CHECK(result.final_state.agents.empty());
    // Stopped early: everyone arrived well before the duration elapsed.
    CHECK(result.final_state.t < 600.0);
    // Conservation audit across the whole run.
    CHECK(result.final_state.spawned_total == 10);
    for (const auto& rec : result.final_state.arrived) {
        CHECK(rec.arrival_time > 0.0);
        CHECK(rec.spawn_time == 0.0);
    }
}

TEST_CASE("run: overshoot carries onto the next segment within one step") {
    ScenarioConfig cfg = sole_segment_config(800.0);
    cfg.network.nodes.push_back({"W", {1500.0, 0.0}});
    cfg.network.segments.push_back({"tail", "V", "W", 500.0, 400.0, 30.0, 1, {}});
    cfg.network.destinations = {"W"};
    cfg.initial_agents[0].destination = "W";
    cfg.initial_agents[0].start_s = 999.0;
    cfg.run.speed_clamp = true;
    const RoadNetwork net = validate_config(cfg);
    SimulationState state = make_initial_state(cfg, net);
    state.agents[0].v = 20.0;  // will cross V this step
    const SimulationState next = step(state, cfg, net);
    REQUIRE(next.agents.size() == 1);
    CHECK(next.agents[0].segment == net.segment_index("tail"));
    CHECK(next.agents[0].s > 0.0);
    CHECK(next.agents[0].s < 5.0);
    CHECK(next.agents[0].junctions_crossed == 1);
}

TEST_CASE("run: positions stay inside segments; speeds never negative with clamp") {
    ScenarioConfig cfg = sole_segment_config(500.0);
    cfg.initial_agents[0].count = 30;
    cfg.initial_agents[0].spacing = 8.0;
    cfg.run.duration = 50.0;
    cfg.run.speed_clamp = true;
    const RoadNetwork net = validate_config(cfg);
    SimulationState state = make_initial_state(cfg, net);
    for (int k = 0; k < 500; ++k) {
        state = step(state, cfg, net);
        for (const auto& a : state.agents) {
            CHECK(a.s >= 0.0);
            CHECK(a.s <= net.segment(a.segment).length);
            CHECK(a.v >= 0.0);
            // CFL respect: per-step displacement within 0.1 h.
            CHECK(a.v * cfg.run.dt <= 0.1 * cfg.physics.h + 1e-12);
        }
    }
}

TEST_CASE("determinism: identical config and seed give identical trajectories") {
    ScenarioConfig cfg = builtin_scenario("two_route");
    cfg.run.duration = 40.0;
    cfg.demand[0].rate = 0.5;
    const RunResult r1 = run(cfg);
    const RunResult r2 = run(cfg);
    REQUIRE(r1.rows.size() == r2.rows.size());
    for (std::size_t i = 0; i < r1.rows.size(); ++i) {
        CHECK(r1.rows[i].lyapunov.value() == r2.rows[i].lyapunov.value());
        CHECK(r1.rows[i].agent_count == r2.rows[i].agent_count);
        CHECK(r1.rows[i].occupancy == r2.rows[i].occupancy);
    }
    REQUIRE(r1.final_state.agents.size() == r2.final_state.agents.size());
    for (std::size_t i = 0; i < r1.final_state.agents.size(); ++i) {
        CHECK(r1.final_state.agents[i].s == r2.final_state.agents[i].s);
        CHECK(r1.final_state.agents[i].v == r2.final_state.agents[i].v);
        CHECK(r1.final_state.agents[i].segment == r2.final_state.agents[i].segment);
    }
}

TEST_CASE("CFL violation is rejected at validation with the bound named") {
    ScenarioConfig cfg = sole_segment_config(500.0);
    cfg.run.dt = 0.5;  // bound = 0.1*30/30 = 0.1
    CHECK_THROWS_WITH_AS(validate_config(cfg), doctest::Contains("0.1*h/v_max"),
                         ValidationError);
}

TEST_CASE("agent ids stay unique across spawning") {
    ScenarioConfig cfg = sole_segment_config(500.0);
    cfg.initial_agents.clear();
    cfg.run.speed_clamp = true;
    EntryDemand d;
    d.entry = "U";
    d.rate = 2.0;
    d.destinations = {{"V", 1.0}};
    cfg.demand = {d};
    const RoadNetwork net = validate_config(cfg);
    SimulationState state = make_initial_state(cfg, net);
    std::set<std::uint64_t> seen;
    for (int k = 0; k < 300; ++k) {
        state = spawn_arrivals(state, cfg, net);
        state = step(state, cfg, net);
    }
    for (const auto& a : state.agents) CHECK(seen.insert(a.id).second);
    for (const auto& rec : state.arrived) CHECK(seen.insert(rec.id).second);
}
