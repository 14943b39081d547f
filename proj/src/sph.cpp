#include "sphtraffic/sph.hpp"

#include <algorithm>
#include <cmath>

namespace sphtraffic {

NeighborGrid::NeighborGrid(const std::vector<Vec2>& positions, double h)
    : positions_(positions), h_(h) {
    if (!(h > 0.0)) throw ValidationError("neighbor search requires h > 0");
    if (positions_.empty()) {
        ncx_ = ncy_ = 0;
        cell_start_.assign(1, 0);
        return;
    }
    double min_x = positions_[0].x, max_x = positions_[0].x;
    double min_y = positions_[0].y, max_y = positions_[0].y;
    for (const auto& p : positions_) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    min_cx_ = static_cast<std::int64_t>(std::floor(min_x / h_));
    min_cy_ = static_cast<std::int64_t>(std::floor(min_y / h_));
    ncx_ = static_cast<std::int64_t>(std::floor(max_x / h_)) - min_cx_ + 1;
    ncy_ = static_cast<std::int64_t>(std::floor(max_y / h_)) - min_cy_ + 1;

    const std::size_t n_cells = static_cast<std::size_t>(ncx_ * ncy_);
    std::vector<std::uint32_t> counts(n_cells, 0);
    auto cell_id = [&](const Vec2& p) {
        const std::int64_t cx = cell_of(p.x, min_cx_);
        const std::int64_t cy = cell_of(p.y, min_cy_);
        return static_cast<std::size_t>(cy * ncx_ + cx);
    };
    for (const auto& p : positions_) ++counts[cell_id(p)];
    cell_start_.assign(n_cells + 1, 0);
    for (std::size_t c = 0; c < n_cells; ++c)
        cell_start_[c + 1] = cell_start_[c] + counts[c];
    cell_items_.assign(positions_.size(), 0);
    std::vector<std::uint32_t> cursor(cell_start_.begin(), cell_start_.end() - 1);
    for (std::uint32_t i = 0; i < positions_.size(); ++i)
        cell_items_[cursor[cell_id(positions_[i])]++] = i;
    // Indices inside a cell stay ascending because insertion follows i.
}

std::int64_t NeighborGrid::cell_of(double coord, std::int64_t min_c) const {
    return static_cast<std::int64_t>(std::floor(coord / h_)) - min_c;
}

void NeighborGrid::collect(const Vec2& probe, std::uint32_t skip,
                           std::vector<NeighborEntry>& out) const {
    out.clear();
    if (positions_.empty()) return;
    const std::int64_t pcx =
        static_cast<std::int64_t>(std::floor(probe.x / h_)) - min_cx_;
    const std::int64_t pcy =
        static_cast<std::int64_t>(std::floor(probe.y / h_)) - min_cy_;
    for (std::int64_t dy = -1; dy <= 1; ++dy) {
        const std::int64_t cy = pcy + dy;
        if (cy < 0 || cy >= ncy_) continue;
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
            const std::int64_t cx = pcx + dx;
            if (cx < 0 || cx >= ncx_) continue;
            const std::size_t c = static_cast<std::size_t>(cy * ncx_ + cx);
            for (std::uint32_t k = cell_start_[c]; k < cell_start_[c + 1]; ++k) {
                const std::uint32_t j = cell_items_[k];
                if (j == skip) continue;
                const Vec2 off = probe - positions_[j];
                const double d = off.norm();
                if (d < h_) out.push_back({j, off, d});
            }
        }
    }
    std::sort(out.begin(), out.end(),
              [](const NeighborEntry& a, const NeighborEntry& b) {
                  return a.index < b.index;
              });
}

void NeighborGrid::neighbors_of(std::uint32_t center,
                                std::vector<NeighborEntry>& out) const {
    collect(positions_[center], center, out);
}

void NeighborGrid::neighbors_near(const Vec2& probe,
                                  std::vector<NeighborEntry>& out) const {
    collect(probe, static_cast<std::uint32_t>(positions_.size()), out);
}

std::vector<Neighborhood> find_neighbors(const std::vector<Vec2>& positions, double h) {
    NeighborGrid grid(positions, h);
    std::vector<Neighborhood> hoods(positions.size());
    for (std::uint32_t i = 0; i < positions.size(); ++i) {
        hoods[i].center = i;
        grid.neighbors_of(i, hoods[i].members);
    }
    return hoods;
}

double density(double self_mass, const Neighborhood& hood,
               const std::vector<double>& masses, double h) {
    double rho = self_mass * density_self_weight(h);
    for (const auto& nb : hood.members)
        rho += masses[nb.index] * poly6_value(nb.distance, h);
    return rho;
}

}  // namespace sphtraffic
