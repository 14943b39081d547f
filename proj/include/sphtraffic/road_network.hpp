#pragma once

#include "sphtraffic/vec2.hpp"

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace sphtraffic {

// Thrown by build/validation paths; carries a human-readable reason that the
// CLI surfaces with field context.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SegmentSpec {
    std::string id;
    std::string from;
    std::string to;
    double length = 0.0;        // L, meters
    double advance = 0.0;       // Dis, straight-line progress in meters
    double v_free = 0.0;        // free-flow speed limit, m/s
    int lanes = 1;
    std::vector<Vec2> polyline; // optional; defaults to the straight chord
};

struct NodeSpec {
    std::string id;
    Vec2 position;
};

struct NetworkSpec {
    std::vector<NodeSpec> nodes;
    std::vector<SegmentSpec> segments;
    std::vector<std::string> entries;
    std::vector<std::string> destinations;
};

struct RoadSegment {
    std::string id;
    std::uint32_t index = 0;
    std::uint32_t from_node = 0;
    std::uint32_t to_node = 0;
    double length = 0.0;
    double advance = 0.0;
    double slope_theta = 0.0;   // arcsin(advance/length), clamped below pi/2
    double v_free = 0.0;
    int lanes = 1;
    std::vector<Vec2> polyline;
    std::vector<double> cum_arclen; // per-vertex cumulative arc length
};

// Directed road graph with per-destination remaining-advance tables.
// Immutable after build; safe for concurrent reads.
class RoadNetwork {
public:
    static RoadNetwork build(const NetworkSpec& spec);

    const std::vector<RoadSegment>& segments() const { return segments_; }
    const RoadSegment& segment(std::uint32_t idx) const { return segments_[idx]; }
    std::uint32_t segment_index(const std::string& id) const;
    std::uint32_t node_index(const std::string& id) const;
    const std::string& node_id(std::uint32_t idx) const { return node_ids_[idx]; }
    Vec2 node_position(std::uint32_t idx) const { return node_positions_[idx]; }
    std::size_t node_count() const { return node_ids_.size(); }

    bool is_destination(std::uint32_t node) const;
    const std::vector<std::uint32_t>& destination_nodes() const { return destinations_; }
    const std::vector<std::uint32_t>& entry_nodes() const { return entries_; }

    // Remaining straight-line advance from node toward destination;
    // infinity when the destination is unreachable from the node.
    double dis_remaining(std::uint32_t node, std::uint32_t destination) const;

    // Outgoing segments from `node` whose far end strictly decreases
    // dis_remaining toward `destination`, ascending by segment id.
    const std::vector<std::uint32_t>& outgoing_candidates(std::uint32_t node,
                                                          std::uint32_t destination) const;

    // Point on the segment centerline at arc length s in [0, length].
    Vec2 embed_position(std::uint32_t segment, double s) const;
    // Unit tangent (direction of increasing s) at arc length s.
    Vec2 tangent(std::uint32_t segment, double s) const;

    // Axis-aligned bounds over all polyline vertices.
    void bounding_box(Vec2& lo, Vec2& hi) const;

    static constexpr double kUnreachable = std::numeric_limits<double>::infinity();

private:
    std::vector<RoadSegment> segments_;
    std::vector<std::string> node_ids_;
    std::vector<Vec2> node_positions_;
    std::vector<std::uint32_t> destinations_;  // node indices
    std::vector<std::uint32_t> entries_;
    std::vector<std::vector<std::uint32_t>> outgoing_;  // node -> segment indices
    // dis_remaining_[d * node_count + node], d indexes destinations_.
    std::vector<double> dis_remaining_;
    // candidates_[d * node_count + node]
    std::vector<std::vector<std::uint32_t>> candidates_;
    std::size_t dest_slot(std::uint32_t destination) const;
};

}  // namespace sphtraffic
