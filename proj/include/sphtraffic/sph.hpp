#pragma once

#include "sphtraffic/kernels.hpp"
#include "sphtraffic/road_network.hpp"
#include "sphtraffic/snapshot.hpp"
#include "sphtraffic/vec2.hpp"

#include <cstdint>
#include <vector>

namespace sphtraffic {

struct NeighborEntry {
    std::uint32_t index = 0;  // position-array index of the neighbor
    Vec2 offset;              // q_center - q_neighbor
    double distance = 0.0;    // < h
};

struct Neighborhood {
    std::uint32_t center = 0;
    std::vector<NeighborEntry> members;  // ascending neighbor index
};

// Uniform spatial hash over the 2-D embedding, cell size = h. Query results
// are exact (equal to the brute-force pairwise check) and ordered by index.
class NeighborGrid {
public:
    NeighborGrid(const std::vector<Vec2>& positions, double h);

    // All points within Euclidean distance < h of positions[center],
    // excluding center itself.
    void neighbors_of(std::uint32_t center, std::vector<NeighborEntry>& out) const;

    // All points within distance < h of an arbitrary probe point (no
    // exclusions).
    void neighbors_near(const Vec2& probe, std::vector<NeighborEntry>& out) const;

    const std::vector<Vec2>& positions() const { return positions_; }
    double h() const { return h_; }

private:
    std::vector<Vec2> positions_;
    double h_ = 0.0;
    std::int64_t min_cx_ = 0, min_cy_ = 0;
    std::int64_t ncx_ = 0, ncy_ = 0;
    std::vector<std::uint32_t> cell_start_;  // CSR layout over cells
    std::vector<std::uint32_t> cell_items_;
    std::int64_t cell_of(double coord, std::int64_t min_c) const;
    void collect(const Vec2& probe, std::uint32_t skip,
                 std::vector<NeighborEntry>& out) const;
};

// All neighborhoods of the embedded agents (parked agents excluded: they are
// off the carriageway). Returned vector is indexed like `positions`.
std::vector<Neighborhood> find_neighbors(const std::vector<Vec2>& positions, double h);

// SPH density: self-contribution plus mass-weighted kernel sum over the
// neighborhood (density kernel). Strictly positive for m > 0.
double density(double self_mass, const Neighborhood& hood,
               const std::vector<double>& masses, double h);

}  // namespace sphtraffic
