#include "sphtraffic/diagnostics.hpp"

#include "sphtraffic/engine.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace sphtraffic {

LyapunovSample lyapunov_sample(const SimulationState& state, const RoadNetwork& net,
                               const PhysicsParams& params) {
    LyapunovSample sample;
    sample.t = state.t;
    const FieldState fields = compute_fields(state, net, params);
    for (std::size_t i = 0; i < fields.agent_slot.size(); ++i) {
        const Agent& a = state.agents[fields.agent_slot[i]];
        sample.phi_s += potential(a, net, params);
        sample.kinetic += 0.5 * fields.velocities[i].norm2();
        // e-dot: 0.5 sum_j m_j (P_i/rho_i^2) v_ij . grad_i W_ij
        const double self_term =
            fields.pressures[i] / (fields.densities[i] * fields.densities[i]);
        double edot = 0.0;
        for (const auto& nb : fields.hoods[i].members) {
            if (nb.distance < kCoincidentDistance) continue;
            const Vec2 grad =
                kernel_gradient(KernelFamily::pressure_gradient, nb.offset, params.h);
            const Vec2 v_diff = fields.velocities[i] - fields.velocities[nb.index];
            edot += 0.5 * fields.masses[nb.index] * self_term * v_diff.dot(grad);
        }
        sample.energy_rate += edot;
    }
    return sample;
}

DescentReport check_descent(const RunResult& result, double eps) {
    if (!result.closed_run)
        throw ValidationError("check_descent requires a closed run (no demand)");
    if (!result.park_mode)
        throw ValidationError("check_descent requires park-at-destination mode");
    if (!result.clamp_disabled)
        throw ValidationError("check_descent requires the speed clamp disabled");
    if (result.rows.size() < 2)
        throw ValidationError("check_descent needs at least two samples");

    DescentReport report;
    report.eps = eps;
    report.min_value = result.rows.front().lyapunov.value();
    std::uint64_t considered = 0;
    std::uint64_t descents = 0;
    for (std::size_t i = 1; i < result.rows.size(); ++i) {
        const double prev = result.rows[i - 1].lyapunov.value();
        const double cur = result.rows[i].lyapunov.value();
        report.min_value = std::min(report.min_value, cur);
        if (result.rows[i - 1].t < 10.0) continue;  // transient
        ++considered;
        if (cur <= prev + eps) ++descents;
        report.max_increase = std::max(report.max_increase, cur - prev);
    }
    report.descent_fraction =
        considered > 0 ? static_cast<double>(descents) / considered : 1.0;
    for (const Agent& a : result.final_state.agents)
        report.terminal_max_speed = std::max(report.terminal_max_speed, std::abs(a.v));
    report.passed = report.descent_fraction >= 0.99 &&
                    report.terminal_max_speed < 1e-3 * result.v_free_max;
    return report;
}

DensityGrid density_map(const SimulationState& state, const RoadNetwork& net,
                        const PhysicsParams& params, int grid_n) {
    if (grid_n < 4)
        throw ValidationError("density_map grid_n must be >= 4");
    Vec2 lo, hi;
    net.bounding_box(lo, hi);
    lo -= {params.h, params.h};
    hi += {params.h, params.h};
    const double extent = std::max(hi.x - lo.x, hi.y - lo.y);
    DensityGrid grid;
    grid.cell = extent / grid_n;
    grid.x_min = lo.x;
    grid.y_min = lo.y;
    grid.nx = static_cast<int>(std::ceil((hi.x - lo.x) / grid.cell));
    grid.ny = static_cast<int>(std::ceil((hi.y - lo.y) / grid.cell));
    grid.values.assign(static_cast<std::size_t>(grid.nx) * grid.ny, 0.0);

    std::vector<Vec2> positions;
    std::vector<double> masses;
    for (const Agent& a : state.agents) {
        if (a.parked) continue;
        positions.push_back(net.embed_position(a.segment, a.s));
        masses.push_back(a.mass);
    }
    for (int row = 0; row < grid.ny; ++row) {
        for (int col = 0; col < grid.nx; ++col) {
            const Vec2 center{grid.x_min + (col + 0.5) * grid.cell,
                              grid.y_min + (row + 0.5) * grid.cell};
            double rho = 0.0;
            for (std::size_t j = 0; j < positions.size(); ++j)
                rho += masses[j] * poly6_value((center - positions[j]).norm(), params.h);
            grid.values[static_cast<std::size_t>(row) * grid.nx + col] = rho;
        }
    }
    return grid;
}

CongestionReport congestion_onset(const SegmentSeries& series, const RoadSegment& seg,
                                  const CongestionThresholds& thresholds,
                                  double s_min_gap) {
    CongestionReport report;
    report.segment = series.segment;
    report.v_jam_frac = thresholds.v_jam_frac;
    report.occ_frac = thresholds.occ_frac;
    report.window = thresholds.window;

    const double capacity = seg.lanes * seg.length / s_min_gap;
    const double occ_threshold = thresholds.occ_frac * capacity;
    const double speed_threshold = thresholds.v_jam_frac * seg.v_free;
    const std::size_t n = series.t.size();
    std::vector<char> jammed(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        jammed[i] = series.mean_speed[i] < speed_threshold &&
                    static_cast<double>(series.occupancy[i]) >= occ_threshold;

    std::size_t run_start = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!jammed[i]) {
            run_start = i + 1;
            continue;
        }
        if (series.t[i] - series.t[run_start] >= thresholds.window) {
            report.onset_time = series.t[run_start];
            break;
        }
    }
    return report;
}

std::vector<double> load_balance_index(const SimulationState& state,
                                       const RoadNetwork& net,
                                       const std::vector<RouteSet>& route_sets) {
    std::set<std::uint32_t> seen;
    std::vector<std::vector<std::uint32_t>> sets;
    for (const auto& rs : route_sets) {
        std::vector<std::uint32_t> segs;
        for (const auto& id : rs.segments) {
            const std::uint32_t idx = net.segment_index(id);
            if (!seen.insert(idx).second)
                throw ValidationError("route sets overlap on segment '" + id + "'");
            segs.push_back(idx);
        }
        sets.push_back(std::move(segs));
    }
    std::vector<double> counts(sets.size(), 0.0);
    double total = 0.0;
    for (const Agent& a : state.agents) {
        if (a.parked) continue;
        for (std::size_t r = 0; r < sets.size(); ++r) {
            if (std::find(sets[r].begin(), sets[r].end(), a.segment) != sets[r].end()) {
                counts[r] += 1.0;
                total += 1.0;
                break;
            }
        }
    }
    if (total > 0.0)
        for (double& c : counts) c /= total;
    return counts;
}

}  // namespace sphtraffic
