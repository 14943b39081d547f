#include "doctest.h"

#include "sphtraffic.h"

#include <cstring>
#include <filesystem>
#include <string>
#include <unistd.h>

namespace {

std::filesystem::path temp_dir(const std::string& tag) {
    const auto dir = std::filesystem::temp_directory_path() /
                     ("sphtraffic_capi_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("c api: version and error surface") {
    CHECK(std::strlen(st_version()) > 0);
    st_config* cfg = nullptr;
    CHECK(st_config_load("builtin:not_a_thing", &cfg) == ST_ERR_VALIDATION);
    CHECK(cfg == nullptr);
    CHECK(std::string(st_last_error()).find("not_a_thing") != std::string::npos);
    CHECK(st_config_load("/no/such/file.json", &cfg) == ST_ERR_IO);
}

TEST_CASE("c api: load builtin, tweak, validate, serialize") {
    st_config* cfg = nullptr;
    REQUIRE(st_config_load("builtin:two_route", &cfg) == ST_OK);
    REQUIRE(cfg != nullptr);
    CHECK(st_config_set_u64(cfg, "seed", 99) == ST_OK);
    CHECK(st_config_set_f64(cfg, "duration", 12.0) == ST_OK);
    CHECK(st_config_set_str(cfg, "policy", "blind") == ST_OK);
    CHECK(st_config_set_str(cfg, "policy", "ramming-speed") == ST_ERR_ARG);
    CHECK(st_config_set_f64(cfg, "warp", 1.0) == ST_ERR_ARG);
    CHECK(st_config_validate(cfg) == ST_OK);
    char* json = nullptr;
    REQUIRE(st_config_to_json(cfg, &json) == ST_OK);
    const std::string text(json);
    st_string_free(json);
    CHECK(text.find("\"seed\": 99") != std::string::npos);
    CHECK(text.find("\"blind\"") != std::string::npos);
    st_config_free(cfg);
}

TEST_CASE("c api: invalid physics reported as validation failure") {
    st_config* cfg = nullptr;
    REQUIRE(st_config_load("builtin:two_route", &cfg) == ST_OK);
    CHECK(st_config_set_f64(cfg, "dt", 100.0) == ST_OK);
    CHECK(st_config_validate(cfg) == ST_ERR_VALIDATION);
    CHECK(std::string(st_last_error()).find("0.1*h/v_max") != std::string::npos);
    st_config_free(cfg);
}

TEST_CASE("c api: run end-to-end, query results, rerun reproduces bytes") {
    st_config* cfg = nullptr;
    REQUIRE(st_config_load("builtin:two_route", &cfg) == ST_OK);
    REQUIRE(st_config_set_f64(cfg, "duration", 24.0) == ST_OK);
    const auto dir = temp_dir("run");
    st_result* result = nullptr;
    REQUIRE(st_run(cfg, dir.string().c_str(), &result) == ST_OK);
    REQUIRE(result != nullptr);
    CHECK(st_result_final_time(result) == doctest::Approx(24.0));
    // Conservation: anything drawn but not yet on the road sits in a queue.
    CHECK(st_result_spawned(result) >=
          st_result_arrived(result) + st_result_active(result));

    int has_onset = -1;
    double onset = -1.0;
    CHECK(st_result_congestion_onset(result, "routeA", &has_onset, &onset) == ST_OK);
    CHECK(has_onset == 0);  // 24 simulated seconds cannot sustain a 60 s window
    CHECK(st_result_congestion_onset(result, "exit", &has_onset, &onset) ==
          ST_ERR_ARG);
    st_result_free(result);

    CHECK(std::filesystem::exists(dir / "metrics.csv"));
    CHECK(std::filesystem::exists(dir / "congestion.csv"));
    CHECK(std::filesystem::exists(dir / "manifest.json"));
    std::filesystem::remove_all(dir);
    st_config_free(cfg);
}

TEST_CASE("c api: sweep writes a summary with one row per seed and policy") {
    st_config* cfg = nullptr;
    REQUIRE(st_config_load("builtin:two_route", &cfg) == ST_OK);
    REQUIRE(st_config_set_f64(cfg, "duration", 10.0) == ST_OK);
    const auto dir = temp_dir("sweep");
    const uint64_t seeds[] = {1, 2};
    const char* policies[] = {"sph", "blind"};
    REQUIRE(st_sweep(cfg, seeds, 2, policies, 2, 2, dir.string().c_str()) == ST_OK);
    CHECK(std::filesystem::exists(dir / "summary.csv"));
    CHECK(std::filesystem::exists(dir / "run_1_sph" / "metrics.csv"));
    CHECK(std::filesystem::exists(dir / "run_2_blind" / "manifest.json"));
    std::filesystem::remove_all(dir);
    st_config_free(cfg);
}
