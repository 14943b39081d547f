#include "sphtraffic/road_network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace sphtraffic {

namespace {

constexpr double kThetaMax = 1.5707963267948966 - 1e-6;  // pi/2 - 1e-6
constexpr double kRelTol = 1e-9;

double polyline_arclen(const std::vector<Vec2>& pts, std::vector<double>& cum) {
    cum.assign(pts.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double leg = (pts[i] - pts[i - 1]).norm();
        if (leg <= 0.0)
            throw ValidationError("segment polyline has a zero-length leg");
        total += leg;
        cum[i] = total;
    }
    return total;
}

}  // namespace

RoadNetwork RoadNetwork::build(const NetworkSpec& spec) {
    RoadNetwork net;
    if (spec.nodes.empty()) throw ValidationError("network has no nodes");
    if (spec.segments.empty()) throw ValidationError("network has no segments");
    if (spec.destinations.empty()) throw ValidationError("network has no destinations");

    std::map<std::string, std::uint32_t> node_index;
    for (const auto& n : spec.nodes) {
        if (node_index.count(n.id))
            throw ValidationError("duplicate node id '" + n.id + "'");
        node_index[n.id] = static_cast<std::uint32_t>(net.node_ids_.size());
        net.node_ids_.push_back(n.id);
        net.node_positions_.push_back(n.position);
    }

    std::map<std::string, std::uint32_t> seg_index;
    net.outgoing_.assign(net.node_ids_.size(), {});
    for (const auto& s : spec.segments) {
        if (seg_index.count(s.id))
            throw ValidationError("duplicate segment id '" + s.id + "'");
        if (!(s.length > 0.0))
            throw ValidationError("segment '" + s.id + "': length must be > 0");
        if (s.advance < 0.0)
            throw ValidationError("segment '" + s.id + "': advance must be >= 0");
        if (s.advance > s.length)
            throw ValidationError("segment '" + s.id +
                                  "': advance exceeds length (arcsin domain)");
        if (!(s.v_free > 0.0))
            throw ValidationError("segment '" + s.id + "': v_free must be > 0");
        if (s.lanes < 1)
            throw ValidationError("segment '" + s.id + "': lanes must be >= 1");
        auto from_it = node_index.find(s.from);
        auto to_it = node_index.find(s.to);
        if (from_it == node_index.end() || to_it == node_index.end())
            throw ValidationError("segment '" + s.id + "': unknown endpoint node");
        if (s.from == s.to)
            throw ValidationError("segment '" + s.id + "': from == to");

        RoadSegment seg;
        seg.id = s.id;
        seg.index = static_cast<std::uint32_t>(net.segments_.size());
        seg.from_node = from_it->second;
        seg.to_node = to_it->second;
        seg.length = s.length;
        seg.advance = s.advance;
        seg.slope_theta = std::min(std::asin(s.advance / s.length), kThetaMax);
        seg.v_free = s.v_free;
        seg.lanes = s.lanes;

        seg.polyline = s.polyline;
        if (seg.polyline.empty()) {
            seg.polyline = {net.node_positions_[seg.from_node],
                            net.node_positions_[seg.to_node]};
        }
        if (seg.polyline.size() < 2)
            throw ValidationError("segment '" + s.id + "': polyline needs >= 2 points");
        if ((seg.polyline.front() - net.node_positions_[seg.from_node]).norm() >
            kRelTol * std::max(1.0, s.length))
            throw ValidationError("segment '" + s.id +
                                  "': polyline does not start at from-node");
        if ((seg.polyline.back() - net.node_positions_[seg.to_node]).norm() >
            kRelTol * std::max(1.0, s.length))
            throw ValidationError("segment '" + s.id +
                                  "': polyline does not end at to-node");
        const double arclen = polyline_arclen(seg.polyline, seg.cum_arclen);
        if (std::abs(arclen - s.length) > kRelTol * std::max(1.0, s.length))
            throw ValidationError("segment '" + s.id +
                                  "': polyline arc length does not equal length");

        seg_index[s.id] = seg.index;
        net.outgoing_[seg.from_node].push_back(seg.index);
        net.segments_.push_back(std::move(seg));
    }

    for (const auto& d : spec.destinations) {
        auto it = node_index.find(d);
        if (it == node_index.end())
            throw ValidationError("destination '" + d + "' is not a node");
        net.destinations_.push_back(it->second);
    }
    for (const auto& e : spec.entries) {
        auto it = node_index.find(e);
        if (it == node_index.end())
            throw ValidationError("entry '" + e + "' is not a node");
        net.entries_.push_back(it->second);
    }

    // Per-destination remaining-advance tables by minimum accumulation, then
    // a telescoping consistency pass: any edge that strictly decreases the
    // remaining advance must decrease it by exactly its own advance, so that
    // the sum of advances along every usable route equals the table entry.
    const std::size_t n_nodes = net.node_ids_.size();
    net.dis_remaining_.assign(net.destinations_.size() * n_nodes, kUnreachable);
    net.candidates_.assign(net.destinations_.size() * n_nodes, {});
    for (std::size_t slot = 0; slot < net.destinations_.size(); ++slot) {
        double* dr = net.dis_remaining_.data() + slot * n_nodes;
        dr[net.destinations_[slot]] = 0.0;
        bool changed = true;
        std::size_t rounds = 0;
        while (changed) {
            if (++rounds > n_nodes + 1)
                throw ValidationError("advance table failed to converge (cycle with "
                                      "decreasing advance?)");
            changed = false;
            for (const auto& seg : net.segments_) {
                if (dr[seg.to_node] == kUnreachable) continue;
                const double candidate = seg.advance + dr[seg.to_node];
                if (candidate < dr[seg.from_node] - 1e-12) {
                    dr[seg.from_node] = candidate;
                    changed = true;
                }
            }
        }
        for (const auto& seg : net.segments_) {
            if (dr[seg.to_node] == kUnreachable || dr[seg.from_node] == kUnreachable)
                continue;
            const double diff = dr[seg.from_node] - dr[seg.to_node];
            if (diff <= 0.0) continue;  // backtracking w.r.t. this destination
            if (std::abs(diff - seg.advance) > kRelTol * std::max(1.0, diff))
                throw ValidationError(
                    "segment '" + seg.id + "': advance " + std::to_string(seg.advance) +
                    " is inconsistent with the advance table toward destination '" +
                    net.node_ids_[net.destinations_[slot]] +
                    "' (parallel routes must declare equal total advance)");
            auto& cands = net.candidates_[slot * n_nodes + seg.from_node];
            cands.push_back(seg.index);
        }
        for (auto& cands : net.candidates_) {
            std::sort(cands.begin(), cands.end(),
                      [&](std::uint32_t a, std::uint32_t b) {
                          return net.segments_[a].id < net.segments_[b].id;
                      });
        }
        // A reachable interior node with no strictly-progressing segment is
        // caught when a decision is actually requested there (the network may
        // legitimately contain level spurs nobody routes through).
    }

    // Every entry must reach at least one destination, and every destination
    // must be reachable from at least one entry. Which destinations a given
    // entry serves is a demand-level concern, checked against its
    // destination distribution at config validation.
    for (auto entry : net.entries_) {
        bool reaches_any = false;
        for (std::size_t slot = 0; slot < net.destinations_.size(); ++slot)
            if (net.dis_remaining_[slot * n_nodes + entry] != kUnreachable)
                reaches_any = true;
        if (!reaches_any && !net.destinations_.empty())
            throw ValidationError("entry '" + net.node_ids_[entry] +
                                  "' cannot reach any destination");
    }
    for (std::size_t slot = 0; slot < net.destinations_.size(); ++slot) {
        bool reachable = net.entries_.empty();
        for (auto entry : net.entries_)
            if (net.dis_remaining_[slot * n_nodes + entry] != kUnreachable)
                reachable = true;
        if (!reachable)
            throw ValidationError("destination '" +
                                  net.node_ids_[net.destinations_[slot]] +
                                  "' is unreachable from every entry");
    }
    return net;
}

std::uint32_t RoadNetwork::segment_index(const std::string& id) const {
    for (const auto& s : segments_)
        if (s.id == id) return s.index;
    throw ValidationError("unknown segment id '" + id + "'");
}

std::uint32_t RoadNetwork::node_index(const std::string& id) const {
    for (std::uint32_t i = 0; i < node_ids_.size(); ++i)
        if (node_ids_[i] == id) return i;
    throw ValidationError("unknown node id '" + id + "'");
}

bool RoadNetwork::is_destination(std::uint32_t node) const {
    return std::find(destinations_.begin(), destinations_.end(), node) !=
           destinations_.end();
}

std::size_t RoadNetwork::dest_slot(std::uint32_t destination) const {
    for (std::size_t i = 0; i < destinations_.size(); ++i)
        if (destinations_[i] == destination) return i;
    throw ValidationError("node '" + node_ids_[destination] + "' is not a destination");
}

double RoadNetwork::dis_remaining(std::uint32_t node, std::uint32_t destination) const {
    return dis_remaining_[dest_slot(destination) * node_ids_.size() + node];
}

const std::vector<std::uint32_t>& RoadNetwork::outgoing_candidates(
    std::uint32_t node, std::uint32_t destination) const {
    return candidates_[dest_slot(destination) * node_ids_.size() + node];
}

Vec2 RoadNetwork::embed_position(std::uint32_t segment, double s) const {
    const RoadSegment& seg = segments_[segment];
    if (s < -kRelTol * seg.length || s > seg.length * (1.0 + kRelTol))
        throw std::out_of_range("arc position " + std::to_string(s) +
                                " outside segment '" + seg.id + "'");
    s = std::clamp(s, 0.0, seg.length);
    auto it = std::upper_bound(seg.cum_arclen.begin(), seg.cum_arclen.end(), s);
    std::size_t leg = std::min<std::size_t>(
        it == seg.cum_arclen.begin() ? 0 : (it - seg.cum_arclen.begin() - 1),
        seg.polyline.size() - 2);
    const double s0 = seg.cum_arclen[leg];
    const double leg_len = seg.cum_arclen[leg + 1] - s0;
    const double f = leg_len > 0.0 ? (s - s0) / leg_len : 0.0;
    return seg.polyline[leg] + (seg.polyline[leg + 1] - seg.polyline[leg]) * f;
}

Vec2 RoadNetwork::tangent(std::uint32_t segment, double s) const {
    const RoadSegment& seg = segments_[segment];
    s = std::clamp(s, 0.0, seg.length);
    auto it = std::upper_bound(seg.cum_arclen.begin(), seg.cum_arclen.end(), s);
    std::size_t leg = std::min<std::size_t>(
        it == seg.cum_arclen.begin() ? 0 : (it - seg.cum_arclen.begin() - 1),
        seg.polyline.size() - 2);
    return (seg.polyline[leg + 1] - seg.polyline[leg]).normalized();
}

void RoadNetwork::bounding_box(Vec2& lo, Vec2& hi) const {
    lo = {std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
    hi = {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
    for (const auto& seg : segments_) {
        for (const auto& p : seg.polyline) {
            lo.x = std::min(lo.x, p.x);
            lo.y = std::min(lo.y, p.y);
            hi.x = std::max(hi.x, p.x);
            hi.y = std::max(hi.y, p.y);
        }
    }
}

}  // namespace sphtraffic
