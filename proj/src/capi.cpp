#include "sphtraffic.h"

#include "sphtraffic/artifacts.hpp"
#include "sphtraffic/config_io.hpp"
#include "sphtraffic/engine.hpp"

#include <cstring>
#include <string>

namespace {

thread_local std::string g_last_error;

st_status set_error(st_status code, const std::string& message) {
    g_last_error = message;
    return code;
}

template <typename Fn>
st_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const sphtraffic::ValidationError& e) {
        return set_error(ST_ERR_VALIDATION, e.what());
    } catch (const std::ios_base::failure& e) {
        return set_error(ST_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return set_error(ST_ERR_RUNTIME, e.what());
    }
}

}  // namespace

struct st_config {
    sphtraffic::ScenarioConfig cfg;
};

struct st_result {
    sphtraffic::RunArtifacts artifacts;
};

extern "C" {

const char* st_version(void) { return sphtraffic::kToolVersion; }

const char* st_last_error(void) { return g_last_error.c_str(); }

st_status st_config_load(const char* scenario, st_config** out) {
    if (!scenario || !out) return set_error(ST_ERR_ARG, "null argument");
    *out = nullptr;
    return guarded([&]() {
        auto handle = new st_config{sphtraffic::load_scenario(scenario)};
        *out = handle;
        return ST_OK;
    });
}

void st_config_free(st_config* cfg) { delete cfg; }

st_status st_config_set_u64(st_config* cfg, const char* key, uint64_t value) {
    if (!cfg || !key) return set_error(ST_ERR_ARG, "null argument");
    if (std::strcmp(key, "seed") == 0) {
        cfg->cfg.run.seed = value;
        return ST_OK;
    }
    return set_error(ST_ERR_ARG, std::string("unknown u64 key '") + key + "'");
}

st_status st_config_set_f64(st_config* cfg, const char* key, double value) {
    if (!cfg || !key) return set_error(ST_ERR_ARG, "null argument");
    if (std::strcmp(key, "duration") == 0) cfg->cfg.run.duration = value;
    else if (std::strcmp(key, "dt") == 0) cfg->cfg.run.dt = value;
    else if (std::strcmp(key, "density_grid_period") == 0)
        cfg->cfg.run.density_grid_period = value;
    else if (std::strcmp(key, "noncompliance_prob") == 0)
        cfg->cfg.policy.noncompliance_prob = value;
    else return set_error(ST_ERR_ARG, std::string("unknown f64 key '") + key + "'");
    return ST_OK;
}

st_status st_config_set_i32(st_config* cfg, const char* key, int32_t value) {
    if (!cfg || !key) return set_error(ST_ERR_ARG, "null argument");
    if (std::strcmp(key, "density_grid_n") == 0) {
        cfg->cfg.run.density_grid_n = value;
        return ST_OK;
    }
    return set_error(ST_ERR_ARG, std::string("unknown i32 key '") + key + "'");
}

st_status st_config_set_str(st_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value) return set_error(ST_ERR_ARG, "null argument");
    if (std::strcmp(key, "policy") == 0) {
        if (std::strcmp(value, "sph") == 0)
            cfg->cfg.policy.kind = sphtraffic::PolicyKind::sph_dynamic;
        else if (std::strcmp(value, "blind") == 0)
            cfg->cfg.policy.kind = sphtraffic::PolicyKind::blind_greedy;
        else return set_error(ST_ERR_ARG, "policy must be 'sph' or 'blind'");
        return ST_OK;
    }
    return set_error(ST_ERR_ARG, std::string("unknown string key '") + key + "'");
}

st_status st_config_to_json(const st_config* cfg, char** out_json) {
    if (!cfg || !out_json) return set_error(ST_ERR_ARG, "null argument");
    return guarded([&]() {
        const std::string text = sphtraffic::serialize_config(cfg->cfg);
        *out_json = new char[text.size() + 1];
        std::memcpy(*out_json, text.c_str(), text.size() + 1);
        return ST_OK;
    });
}

void st_string_free(char* s) { delete[] s; }

st_status st_config_validate(const st_config* cfg) {
    if (!cfg) return set_error(ST_ERR_ARG, "null argument");
    return guarded([&]() {
        sphtraffic::validate_config(cfg->cfg);
        return ST_OK;
    });
}

st_status st_run(const st_config* cfg, const char* out_dir, st_result** out) {
    if (!cfg || !out_dir) return set_error(ST_ERR_ARG, "null argument");
    if (out) *out = nullptr;
    return guarded([&]() {
        auto artifacts = sphtraffic::run_command(cfg->cfg, out_dir);
        if (out) *out = new st_result{std::move(artifacts)};
        return ST_OK;
    });
}

void st_result_free(st_result* result) { delete result; }

double st_result_final_time(const st_result* result) {
    return result ? result->artifacts.result.final_state.t : 0.0;
}

uint64_t st_result_spawned(const st_result* result) {
    return result ? result->artifacts.result.final_state.spawned_total : 0;
}

uint64_t st_result_arrived(const st_result* result) {
    return result ? result->artifacts.result.final_state.arrived.size() : 0;
}

uint64_t st_result_active(const st_result* result) {
    if (!result) return 0;
    uint64_t active = 0;
    for (const auto& agent : result->artifacts.result.final_state.agents)
        if (!agent.parked) ++active;
    return active;
}

st_status st_result_congestion_onset(const st_result* result, const char* segment,
                                     int* has_onset, double* onset_time) {
    if (!result || !segment || !has_onset || !onset_time)
        return set_error(ST_ERR_ARG, "null argument");
    for (const auto& report : result->artifacts.result.congestion) {
        if (report.segment == segment) {
            *has_onset = report.onset_time.has_value() ? 1 : 0;
            *onset_time = report.onset_time.value_or(0.0);
            return ST_OK;
        }
    }
    return set_error(ST_ERR_ARG,
                     std::string("segment '") + segment + "' is not monitored");
}

st_status st_sweep(const st_config* cfg, const uint64_t* seeds, size_t n_seeds,
                   const char* const* policies, size_t n_policies, int jobs,
                   const char* out_dir) {
    if (!cfg || !seeds || !policies || !out_dir || n_seeds == 0 || n_policies == 0)
        return set_error(ST_ERR_ARG, "null or empty argument");
    return guarded([&]() {
        std::vector<uint64_t> seed_list(seeds, seeds + n_seeds);
        std::vector<std::string> policy_list;
        for (size_t i = 0; i < n_policies; ++i) policy_list.emplace_back(policies[i]);
        sphtraffic::sweep_command(cfg->cfg, seed_list, policy_list, jobs, out_dir);
        return ST_OK;
    });
}

}  // extern "C"
