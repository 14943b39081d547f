#include "doctest.h"

#include "sphtraffic/road_network.hpp"

#include <cmath>
#include <numbers>

using namespace sphtraffic;

namespace {

// Straight-line chain E -> S -> X plus a parallel detour S -> X, with
// consistent per-destination advances.
NetworkSpec small_spec() {
    NetworkSpec spec;
    spec.nodes = {{"E", {-100.0, 0.0}},
                  {"S", {0.0, 0.0}},
                  {"M", {100.0, 0.0}},
                  {"X", {160.0, 0.0}}};
    spec.segments = {
        {"entry", "E", "S", 100.0, 50.0, 10.0, 1, {}},
        {"a", "S", "M", 100.0, 80.0, 10.0, 1, {}},
        {"b", "S", "M", 140.0, 80.0, 10.0, 1,
         {{0.0, 0.0}, {0.0, -20.0}, {100.0, -20.0}, {100.0, 0.0}}},
        {"exit", "M", "X", 60.0, 30.0, 10.0, 1, {}},
    };
    spec.entries = {"E"};
    spec.destinations = {"X"};
    return spec;
}

// Arc-length walk oracle: step along the polyline in tiny increments.
Vec2 walk_polyline(const std::vector<Vec2>& pts, double s) {
    double remaining = s;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double leg = (pts[i] - pts[i - 1]).norm();
        if (remaining <= leg)
            return pts[i - 1] + (pts[i] - pts[i - 1]) * (remaining / leg);
        remaining -= leg;
    }
    return pts.back();
}

}  // namespace

TEST_CASE("slope derivation: arcsin of advance over length") {
    const RoadNetwork net = RoadNetwork::build(small_spec());
    // L=100, Dis=50 -> theta = pi/6
    CHECK(net.segment(net.segment_index("entry")).slope_theta ==
          doctest::Approx(std::numbers::pi / 6.0).epsilon(1e-14));
    CHECK(net.segment(net.segment_index("a")).slope_theta ==
          doctest::Approx(std::asin(0.8)).epsilon(1e-14));
}

TEST_CASE("zero-advance segment derives a level slope") {
    NetworkSpec spec = small_spec();
    // Flat spur hanging off M; it is never a candidate but must validate.
    spec.nodes.push_back({"P", {160.0, 80.0}});
    spec.segments.push_back({"flat", "M", "P", 100.0, 0.0, 10.0, 1, {}});
    const RoadNetwork net = RoadNetwork::build(spec);
    CHECK(net.segment(net.segment_index("flat")).slope_theta == 0.0);
}

TEST_CASE("slope clamp just below vertical when advance equals length") {
    NetworkSpec spec = small_spec();
    spec.segments[1].advance = 100.0;  // a: Dis == L
    spec.segments[2].advance = 100.0;  // keep the parallel route consistent
    const RoadNetwork net = RoadNetwork::build(spec);
    const double theta = net.segment(net.segment_index("a")).slope_theta;
    CHECK(theta < std::numbers::pi / 2.0);
    CHECK(theta == doctest::Approx(std::numbers::pi / 2.0 - 1e-6).epsilon(1e-9));
}

TEST_CASE("build rejections: arcsin domain, nonpositive length, unreachable") {
    NetworkSpec bad = small_spec();
    bad.segments[0].advance = 120.0;
    CHECK_THROWS_WITH_AS(RoadNetwork::build(bad),
                         doctest::Contains("advance exceeds length"), ValidationError);

    bad = small_spec();
    bad.segments[0].length = 0.0;
    CHECK_THROWS_AS(RoadNetwork::build(bad), ValidationError);

    bad = small_spec();
    bad.segments[0].length = -5.0;
    CHECK_THROWS_AS(RoadNetwork::build(bad), ValidationError);

    // Destination nobody can reach.
    bad = small_spec();
    bad.nodes.push_back({"Z", {0.0, 500.0}});
    bad.destinations.push_back("Z");
    CHECK_THROWS_WITH_AS(RoadNetwork::build(bad), doctest::Contains("unreachable"),
                         ValidationError);
}

TEST_CASE("inconsistent parallel advances are rejected") {
    NetworkSpec bad = small_spec();
    bad.segments[2].advance = 70.0;  // b disagrees with a over the same span
    CHECK_THROWS_WITH_AS(RoadNetwork::build(bad), doctest::Contains("inconsistent"),
                         ValidationError);
}

TEST_CASE("advance table telescopes along every simple path") {
    const RoadNetwork net = RoadNetwork::build(small_spec());
    const std::uint32_t X = net.node_index("X");
    CHECK(net.dis_remaining(X, X) == 0.0);
    CHECK(net.dis_remaining(net.node_index("M"), X) == doctest::Approx(30.0));
    CHECK(net.dis_remaining(net.node_index("S"), X) == doctest::Approx(110.0));
    CHECK(net.dis_remaining(net.node_index("E"), X) == doctest::Approx(160.0));
    // Path sums: entry+a+exit and entry+b+exit both equal 160 (the paper's
    // Dis = sum of per-segment advances along any route).
    const double via_a = 50.0 + 80.0 + 30.0;
    const double via_b = 50.0 + 80.0 + 30.0;
    CHECK(via_a == doctest::Approx(net.dis_remaining(net.node_index("E"), X)));
    CHECK(via_b == doctest::Approx(net.dis_remaining(net.node_index("E"), X)));
}

TEST_CASE("outgoing candidates: strict progress, ascending segment id") {
    const RoadNetwork net = RoadNetwork::build(small_spec());
    const std::uint32_t X = net.node_index("X");
    const auto& at_split = net.outgoing_candidates(net.node_index("S"), X);
    REQUIRE(at_split.size() == 2);
    CHECK(net.segment(at_split[0]).id == "a");
    CHECK(net.segment(at_split[1]).id == "b");
    const auto& at_merge = net.outgoing_candidates(net.node_index("M"), X);
    REQUIRE(at_merge.size() == 1);
    CHECK(net.segment(at_merge[0]).id == "exit");
    // Candidates never increase the remaining advance.
    for (std::uint32_t node = 0; node < net.node_count(); ++node) {
        if (net.dis_remaining(node, X) == RoadNetwork::kUnreachable) continue;
        for (std::uint32_t cand : net.outgoing_candidates(node, X)) {
            const auto& seg = net.segment(cand);
            CHECK(net.dis_remaining(seg.to_node, X) < net.dis_remaining(node, X));
        }
    }
}

TEST_CASE("three-branch junction lists candidates in ascending id order") {
    NetworkSpec spec = small_spec();
    spec.segments.push_back({"c", "S", "M", 180.0, 80.0, 10.0, 1,
                             {{0.0, 0.0}, {0.0, 40.0}, {100.0, 40.0}, {100.0, 0.0}}});
    const RoadNetwork net = RoadNetwork::build(spec);
    const auto& cands =
        net.outgoing_candidates(net.node_index("S"), net.node_index("X"));
    REQUIRE(cands.size() == 3);
    CHECK(net.segment(cands[0]).id == "a");
    CHECK(net.segment(cands[1]).id == "b");
    CHECK(net.segment(cands[2]).id == "c");
}

TEST_CASE("slope_theta is monotone in advance for fixed length") {
    double prev = -1.0;
    for (double adv : {0.0, 10.0, 25.0, 50.0, 75.0, 99.0, 100.0}) {
        NetworkSpec spec = small_spec();
        spec.segments[1].advance = adv;
        spec.segments[2].advance = adv;
        const RoadNetwork net = RoadNetwork::build(spec);
        const double theta = net.segment(net.segment_index("a")).slope_theta;
        CHECK(theta > prev);
        prev = theta;
    }
}

TEST_CASE("embed_position: straight segment, endpoints, polyline walk oracle") {
    const RoadNetwork net = RoadNetwork::build(small_spec());
    const std::uint32_t a = net.segment_index("a");
    const Vec2 p = net.embed_position(a, 25.0);
    CHECK(p.x == doctest::Approx(25.0).epsilon(1e-12));
    CHECK(p.y == doctest::Approx(0.0));
    const Vec2 at_zero = net.embed_position(a, 0.0);
    CHECK(at_zero.x == doctest::Approx(0.0));
    CHECK(at_zero.y == doctest::Approx(0.0));

    // Two-leg oracle case: (0,0)->(50,0)->(50,50), s=75 -> (50,25).
    NetworkSpec two_leg;
    two_leg.nodes = {{"U", {0.0, 0.0}}, {"V", {50.0, 50.0}}};
    two_leg.segments = {{"s", "U", "V", 100.0, 50.0, 10.0, 1,
                         {{0.0, 0.0}, {50.0, 0.0}, {50.0, 50.0}}}};
    two_leg.entries = {"U"};
    two_leg.destinations = {"V"};
    const RoadNetwork bent = RoadNetwork::build(two_leg);
    const Vec2 q = bent.embed_position(0, 75.0);
    CHECK(q.x == doctest::Approx(50.0).epsilon(1e-12));
    CHECK(q.y == doctest::Approx(25.0).epsilon(1e-12));
    // Dense sweep against the arc-length walk oracle.
    for (double s = 0.0; s <= 100.0; s += 7.3) {
        const Vec2 got = bent.embed_position(0, s);
        const Vec2 want = walk_polyline(two_leg.segments[0].polyline, s);
        CHECK((got - want).norm() < 1e-9);
    }
    CHECK_THROWS_AS(bent.embed_position(0, -1.0), std::out_of_range);
    CHECK_THROWS_AS(bent.embed_position(0, 101.0), std::out_of_range);
}

TEST_CASE("polyline arc length must match declared length") {
    NetworkSpec bad = small_spec();
    bad.segments[2].polyline = {{0.0, 0.0}, {50.0, -20.0}, {100.0, 0.0}};
    CHECK_THROWS_WITH_AS(RoadNetwork::build(bad),
                         doctest::Contains("arc length"), ValidationError);
}

TEST_CASE("tangent follows the polyline legs") {
    const RoadNetwork net = RoadNetwork::build(small_spec());
    const std::uint32_t b = net.segment_index("b");
    const Vec2 t0 = net.tangent(b, 5.0);   // heading south on the first leg
    CHECK(t0.x == doctest::Approx(0.0));
    CHECK(t0.y == doctest::Approx(-1.0));
    const Vec2 t1 = net.tangent(b, 70.0);  // eastbound on the middle leg
    CHECK(t1.x == doctest::Approx(1.0));
    CHECK(t1.y == doctest::Approx(0.0));
}
