#include "sphtraffic/artifacts.hpp"

#include "sphtraffic/config_io.hpp"
#include "sphtraffic/diagnostics.hpp"

#include "json.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

namespace sphtraffic {

namespace {

namespace fs = std::filesystem;

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot write '" + path + "'");
    out << content;
    if (!out) throw std::ios_base::failure("write failed for '" + path + "'");
}

std::string grid_to_text(const DensityGrid& grid) {
    std::string text = std::to_string(grid.nx) + " " + std::to_string(grid.ny) + " " +
                       fmt9(grid.x_min) + " " + fmt9(grid.y_min) + " " +
                       fmt9(grid.cell) + "\n";
    for (int row = 0; row < grid.ny; ++row) {
        for (int col = 0; col < grid.nx; ++col) {
            if (col) text += ' ';
            text += fmt9(grid.values[static_cast<std::size_t>(row) * grid.nx + col]);
        }
        text += '\n';
    }
    return text;
}

}  // namespace

RunArtifacts run_command(const ScenarioConfig& cfg, const std::string& out_dir) {
    RunArtifacts artifacts;
    artifacts.out_dir = out_dir;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        throw std::ios_base::failure("cannot create output directory '" + out_dir +
                                     "': " + ec.message());

    // Density grids are rasterized on the sample hook at their own cadence.
    double next_grid_t = 0.0;
    int grid_index = 0;
    SampleHook hook;
    if (cfg.run.density_grid_n >= 4) {
        hook = [&](const SimulationState& state, const RoadNetwork& net) {
            if (state.t + 1e-12 < next_grid_t) return;
            next_grid_t = state.t + cfg.run.density_grid_period;
            const DensityGrid grid =
                density_map(state, net, cfg.physics, cfg.run.density_grid_n);
            char name[64];
            std::snprintf(name, sizeof(name), "density_%06d.grid", grid_index++);
            const std::string path = (fs::path(out_dir) / name).string();
            write_file(path, grid_to_text(grid));
            artifacts.density_grid_paths.push_back(path);
        };
    }

    artifacts.result = run(cfg, hook);

    std::string csv = "t,agent_count,arrived_count,V,phi_S,kinetic,energy_rate";
    for (const auto& seg : cfg.run.metrics_segments)
        csv += ",occupancy_" + seg + ",mean_speed_" + seg;
    csv += '\n';
    for (const auto& row : artifacts.result.rows) {
        csv += fmt9(row.t);
        csv += ',' + std::to_string(row.agent_count);
        csv += ',' + std::to_string(row.arrived_count);
        csv += ',' + fmt9(row.lyapunov.value());
        csv += ',' + fmt9(row.lyapunov.phi_s);
        csv += ',' + fmt9(row.lyapunov.kinetic);
        csv += ',' + fmt9(row.lyapunov.energy_rate);
        for (std::size_t m = 0; m < row.occupancy.size(); ++m) {
            csv += ',' + std::to_string(row.occupancy[m]);
            csv += ',' + fmt9(row.mean_speed[m]);
        }
        csv += '\n';
    }
    artifacts.metrics_path = (fs::path(out_dir) / "metrics.csv").string();
    write_file(artifacts.metrics_path, csv);

    std::string congestion = "segment,onset_time,v_jam_frac,occ_frac,window\n";
    for (const auto& report : artifacts.result.congestion) {
        congestion += report.segment;
        congestion += ',';
        congestion += report.onset_time ? fmt9(*report.onset_time) : "N/A";
        congestion += ',' + fmt9(report.v_jam_frac);
        congestion += ',' + fmt9(report.occ_frac);
        congestion += ',' + fmt9(report.window);
        congestion += '\n';
    }
    artifacts.congestion_path = (fs::path(out_dir) / "congestion.csv").string();
    write_file(artifacts.congestion_path, congestion);

    nlohmann::ordered_json manifest;
    char hash_hex[32];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016" PRIx64, config_hash(cfg));
    manifest["tool_version"] = kToolVersion;
    manifest["config_hash"] = hash_hex;
    manifest["seed"] = cfg.run.seed;
    manifest["policy"] = cfg.policy.kind == PolicyKind::sph_dynamic ? "sph" : "blind";
    manifest["config"] = nlohmann::ordered_json::parse(serialize_config(cfg));
    artifacts.manifest_path = (fs::path(out_dir) / "manifest.json").string();
    write_file(artifacts.manifest_path, manifest.dump(2) + "\n");
    return artifacts;
}

SweepArtifacts sweep_command(const ScenarioConfig& base,
                             const std::vector<std::uint64_t>& seeds,
                             const std::vector<std::string>& policies, int jobs,
                             const std::string& out_dir) {
    if (jobs < 1) jobs = 1;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        throw std::ios_base::failure("cannot create output directory '" + out_dir +
                                     "': " + ec.message());

    struct Task {
        std::uint64_t seed;
        std::string policy;
    };
    std::vector<Task> tasks;
    for (std::uint64_t seed : seeds)
        for (const auto& policy : policies) tasks.push_back({seed, policy});

    SweepArtifacts artifacts;
    artifacts.rows.resize(tasks.size());
    std::mutex mu;
    std::size_t next_task = 0;
    auto worker = [&] {
        for (;;) {
            std::size_t idx;
            {
                std::lock_guard<std::mutex> lock(mu);
                if (next_task >= tasks.size()) return;
                idx = next_task++;
            }
            const Task& task = tasks[idx];
            SweepRow row;
            row.seed = task.seed;
            row.policy = task.policy;
            try {
                ScenarioConfig cfg = base;
                cfg.run.seed = task.seed;
                if (task.policy == "sph") cfg.policy.kind = PolicyKind::sph_dynamic;
                else if (task.policy == "blind") cfg.policy.kind = PolicyKind::blind_greedy;
                else throw ValidationError("unknown policy '" + task.policy + "'");
                const std::string run_dir =
                    (fs::path(out_dir) /
                     ("run_" + std::to_string(task.seed) + "_" + task.policy))
                        .string();
                RunArtifacts run_artifacts = run_command(cfg, run_dir);
                if (!run_artifacts.result.congestion.empty())
                    row.onset = run_artifacts.result.congestion.front().onset_time;
            } catch (const std::exception& e) {
                row.failed = true;
                row.error = e.what();
            }
            artifacts.rows[idx] = std::move(row);
        }
    };
    std::vector<std::thread> pool;
    const int n_threads = std::min<std::size_t>(jobs, tasks.size());
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    std::string summary = "seed,policy,onset_time\n";
    for (const auto& row : artifacts.rows) {
        summary += std::to_string(row.seed) + ',' + row.policy + ',';
        if (row.failed) summary += "ERROR: " + row.error;
        else summary += row.onset ? fmt9(*row.onset) : "N/A";
        summary += '\n';
    }
    artifacts.summary_path = (fs::path(out_dir) / "summary.csv").string();
    write_file(artifacts.summary_path, summary);
    return artifacts;
}

}  // namespace sphtraffic
