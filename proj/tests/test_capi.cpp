#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "fracfilt.h"

namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("fracfilt_capi_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

} // namespace

TEST_CASE("version and error strings are always available") {
    CHECK(std::strlen(ff_version()) > 0);
    CHECK(ff_last_error() != nullptr);
}

TEST_CASE("config lifecycle and setters") {
    ff_config* cfg = nullptr;
    REQUIRE(ff_config_default(&cfg) == FF_OK);
    CHECK(ff_config_set_seed(cfg, 123) == FF_OK);
    CHECK(ff_config_set_jobs(cfg, 2) == FF_OK);
    CHECK(ff_config_set_jobs(cfg, 0) == FF_ERR_INVALID);
    CHECK(ff_config_set_check_level(cfg, "fast") == FF_OK);
    CHECK(ff_config_set_check_level(cfg, "bogus") == FF_ERR_INVALID);
    std::string echo = ff_config_json(cfg);
    CHECK(echo.find("\"master\": 123") != std::string::npos);
    ff_config_free(cfg);
    ff_config_free(nullptr);  // harmless
}

TEST_CASE("invalid config json surfaces field-level messages") {
    ff_config* cfg = nullptr;
    CHECK(ff_config_load_string("{\"hurst\": {\"alpha\": 0.4}}", &cfg) == FF_ERR_CONFIG);
    std::string err = ff_last_error();
    CHECK(err.find("alpha") != std::string::npos);
    CHECK(cfg == nullptr);
    CHECK(ff_config_load_file("/no/such/file.json", &cfg) != FF_OK);
}

TEST_CASE("run simulate through the C surface") {
    auto dir = fresh_dir("simulate");
    ff_config* cfg = nullptr;
    REQUIRE(ff_config_load_string("{\"grid\": {\"n1\": 5, \"n2\": 5}}", &cfg) == FF_OK);
    REQUIRE(ff_config_set_output_dir(cfg, dir.string().c_str()) == FF_OK);
    ff_report* rep = nullptr;
    CHECK(ff_run(cfg, "simulate", &rep) == FF_OK);
    REQUIRE(rep != nullptr);
    CHECK(ff_report_ok(rep) == 1);
    CHECK(ff_report_exit_code(rep) == 0);
    std::string body = ff_report_json(rep);
    CHECK(body.find("\"subcommand\": \"simulate\"") != std::string::npos);
    CHECK(fs::exists(dir / "report.json"));
    ff_report_free(rep);
    ff_config_free(cfg);
}

TEST_CASE("unknown subcommand maps to the config status") {
    ff_config* cfg = nullptr;
    REQUIRE(ff_config_default(&cfg) == FF_OK);
    ff_report* rep = nullptr;
    CHECK(ff_run(cfg, "frobnicate", &rep) == FF_ERR_CONFIG);
    CHECK(rep == nullptr);
    CHECK(std::string(ff_last_error()).find("subcommand") != std::string::npos);
    ff_config_free(cfg);
}

TEST_CASE("null arguments are rejected, not crashed on") {
    CHECK(ff_config_load_file(nullptr, nullptr) == FF_ERR_INVALID);
    CHECK(ff_config_set_seed(nullptr, 1) == FF_ERR_INVALID);
    CHECK(ff_run(nullptr, "simulate", nullptr) == FF_ERR_INVALID);
    CHECK(ff_report_ok(nullptr) == 0);
    ff_report_free(nullptr);
}
