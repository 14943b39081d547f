// Command-line front end; drives the simulation core through the C API only.

#include "sphtraffic.h"

#include "CLI11.hpp"

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

namespace {

int fail_with(st_status status) {
    std::fprintf(stderr, "error: %s\n", st_last_error());
    switch (status) {
        case ST_ERR_VALIDATION: return 2;
        case ST_ERR_IO: return 3;
        default: return 1;
    }
}

struct ConfigHandle {
    st_config* cfg = nullptr;
    ~ConfigHandle() { st_config_free(cfg); }
};

// "a..b" (inclusive) or comma-separated list.
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    const auto range_pos = text.find("..");
    if (range_pos != std::string::npos) {
        const std::uint64_t lo = std::stoull(text.substr(0, range_pos));
        const std::uint64_t hi = std::stoull(text.substr(range_pos + 2));
        for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
        return seeds;
    }
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const std::string tok =
            text.substr(start, comma == std::string::npos ? comma : comma - start);
        if (!tok.empty()) seeds.push_back(std::stoull(tok));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return seeds;
}

int apply_common(ConfigHandle& handle, std::uint64_t seed, bool seed_set,
                 const std::string& policy, double duration, double dt,
                 int density_grid) {
    if (seed_set && st_config_set_u64(handle.cfg, "seed", seed) != ST_OK)
        return fail_with(ST_ERR_ARG);
    if (!policy.empty() && st_config_set_str(handle.cfg, "policy", policy.c_str()) != ST_OK)
        return fail_with(ST_ERR_ARG);
    if (duration >= 0.0 && st_config_set_f64(handle.cfg, "duration", duration) != ST_OK)
        return fail_with(ST_ERR_ARG);
    if (dt > 0.0 && st_config_set_f64(handle.cfg, "dt", dt) != ST_OK)
        return fail_with(ST_ERR_ARG);
    if (density_grid > 0 && st_config_set_i32(handle.cfg, "density_grid_n", density_grid) != ST_OK)
        return fail_with(ST_ERR_ARG);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SPH-based multi-agent traffic simulator"};
    app.require_subcommand(1);

    std::string scenario, out_dir, policy;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double duration = -1.0, dt = 0.0;
    int density_grid = 0;

    auto* run_cmd = app.add_subcommand("run", "Execute one simulation");
    run_cmd->add_option("--scenario", scenario, "Config file or builtin:<name>")
        ->required();
    run_cmd->add_option("--seed", seed, "RNG seed (u64)")
        ->each([&](const std::string&) { seed_set = true; });
    run_cmd->add_option("--policy", policy, "Routing policy: sph | blind");
    run_cmd->add_option("--out", out_dir, "Output directory")->required();
    run_cmd->add_option("--duration", duration, "Simulated seconds");
    run_cmd->add_option("--dt", dt, "Step length in seconds");
    run_cmd->add_option("--density-grid", density_grid,
                        "Density raster cells per side (>= 4)");

    std::string seeds_text = "1..1", policies_text = "sph,blind";
    int jobs = 1;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a seed x policy cross product");
    sweep_cmd->add_option("--scenario", scenario, "Config file or builtin:<name>")
        ->required();
    sweep_cmd->add_option("--seeds", seeds_text, "Range a..b or comma list")->required();
    sweep_cmd->add_option("--policies", policies_text, "Comma list: sph,blind");
    sweep_cmd->add_option("--jobs", jobs, "Parallel runs");
    sweep_cmd->add_option("--out", out_dir, "Output directory")->required();
    sweep_cmd->add_option("--duration", duration, "Simulated seconds");
    sweep_cmd->add_option("--dt", dt, "Step length in seconds");

    std::string export_path;
    auto* export_cmd =
        app.add_subcommand("export", "Write a scenario config as an editable file");
    export_cmd->add_option("--scenario", scenario, "Config file or builtin:<name>")
        ->required();
    export_cmd->add_option("--out", export_path, "Output file path")->required();

    CLI11_PARSE(app, argc, argv);

    ConfigHandle handle;
    st_status status = st_config_load(scenario.c_str(), &handle.cfg);
    if (status != ST_OK) return fail_with(status);

    if (run_cmd->parsed()) {
        if (int rc = apply_common(handle, seed, seed_set, policy, duration, dt,
                                  density_grid))
            return rc;
        st_result* result = nullptr;
        status = st_run(handle.cfg, out_dir.c_str(), &result);
        if (status != ST_OK) return fail_with(status);
        std::printf("final_time=%.9g spawned=%llu arrived=%llu active=%llu\n",
                    st_result_final_time(result),
                    static_cast<unsigned long long>(st_result_spawned(result)),
                    static_cast<unsigned long long>(st_result_arrived(result)),
                    static_cast<unsigned long long>(st_result_active(result)));
        st_result_free(result);
        return 0;
    }

    if (sweep_cmd->parsed()) {
        if (int rc = apply_common(handle, seed, false, policy, duration, dt, 0))
            return rc;
        const std::vector<std::uint64_t> seeds = parse_seeds(seeds_text);
        std::vector<std::string> policies;
        std::size_t start = 0;
        while (start <= policies_text.size()) {
            const auto comma = policies_text.find(',', start);
            const std::string tok = policies_text.substr(
                start, comma == std::string::npos ? comma : comma - start);
            if (!tok.empty()) policies.push_back(tok);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        std::vector<const char*> policy_ptrs;
        for (const auto& p : policies) policy_ptrs.push_back(p.c_str());
        status = st_sweep(handle.cfg, seeds.data(), seeds.size(), policy_ptrs.data(),
                          policy_ptrs.size(), jobs, out_dir.c_str());
        if (status != ST_OK) return fail_with(status);
        std::printf("sweep complete: %zu runs -> %s/summary.csv\n",
                    seeds.size() * policies.size(), out_dir.c_str());
        return 0;
    }

    if (export_cmd->parsed()) {
        char* json = nullptr;
        status = st_config_to_json(handle.cfg, &json);
        if (status != ST_OK) return fail_with(status);
        std::FILE* f = std::fopen(export_path.c_str(), "wb");
        if (!f) {
            std::fprintf(stderr, "error: cannot write '%s'\n", export_path.c_str());
            st_string_free(json);
            return 3;
        }
        std::fputs(json, f);
        std::fputc('\n', f);
        std::fclose(f);
        st_string_free(json);
        std::printf("wrote %s\n", export_path.c_str());
        return 0;
    }
    return 1;
}
