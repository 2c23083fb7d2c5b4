#include "fracfilt.h"

#include <string>

#include "fracfilt/config.hpp"
#include "fracfilt/runner.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

} // namespace

struct ff_config {
    ff::harness::ExperimentConfig cfg;
    mutable std::string json_echo;
};

struct ff_report {
    ff::harness::RunReport rep;
};

extern "C" {

const char* ff_version(void) { return "0.1.0"; }

const char* ff_last_error(void) { return g_last_error.c_str(); }

ff_status ff_config_load_file(const char* path, ff_config** out) {
    if (!path || !out) {
        set_error("null argument");
        return FF_ERR_INVALID;
    }
    try {
        auto cfg = ff::harness::ExperimentConfig::load_file(path);
        *out = new ff_config{std::move(cfg), {}};
        return FF_OK;
    } catch (const ff::harness::ConfigError& e) {
        set_error(e.what());
        return FF_ERR_CONFIG;
    } catch (const std::exception& e) {
        set_error(e.what());
        return FF_ERR_IO;
    }
}

ff_status ff_config_load_string(const char* json_text, ff_config** out) {
    if (!json_text || !out) {
        set_error("null argument");
        return FF_ERR_INVALID;
    }
    try {
        auto cfg = ff::harness::ExperimentConfig::from_json_text(json_text);
        *out = new ff_config{std::move(cfg), {}};
        return FF_OK;
    } catch (const ff::harness::ConfigError& e) {
        set_error(e.what());
        return FF_ERR_CONFIG;
    } catch (const std::exception& e) {
        set_error(e.what());
        return FF_ERR_CONFIG;
    }
}

ff_status ff_config_default(ff_config** out) {
    if (!out) {
        set_error("null argument");
        return FF_ERR_INVALID;
    }
    *out = new ff_config{ff::harness::ExperimentConfig{}, {}};
    return FF_OK;
}

void ff_config_free(ff_config* cfg) { delete cfg; }

ff_status ff_config_set_seed(ff_config* cfg, uint64_t master_seed) {
    if (!cfg) {
        set_error("null config");
        return FF_ERR_INVALID;
    }
    cfg->cfg.master_seed = master_seed;
    return FF_OK;
}

ff_status ff_config_set_output_dir(ff_config* cfg, const char* dir) {
    if (!cfg || !dir) {
        set_error("null argument");
        return FF_ERR_INVALID;
    }
    cfg->cfg.out_dir = dir;
    return FF_OK;
}

ff_status ff_config_set_jobs(ff_config* cfg, int jobs) {
    if (!cfg || jobs < 1) {
        set_error("jobs must be >= 1");
        return FF_ERR_INVALID;
    }
    cfg->cfg.jobs = jobs;
    return FF_OK;
}

ff_status ff_config_set_check_level(ff_config* cfg, const char* level) {
    if (!cfg || !level) {
        set_error("null argument");
        return FF_ERR_INVALID;
    }
    std::string l = level;
    if (l != "fast" && l != "full") {
        set_error("check level must be 'fast' or 'full'");
        return FF_ERR_INVALID;
    }
    cfg->cfg.check_level = l;
    return FF_OK;
}

const char* ff_config_json(const ff_config* cfg) {
    if (!cfg) return "";
    cfg->json_echo = cfg->cfg.to_json_text();
    return cfg->json_echo.c_str();
}

ff_status ff_run(const ff_config* cfg, const char* subcommand, ff_report** out) {
    if (!cfg || !subcommand || !out) {
        set_error("null argument");
        return FF_ERR_INVALID;
    }
    try {
        auto rep = ff::harness::run_subcommand(cfg->cfg, subcommand);
        *out = new ff_report{std::move(rep)};
        return (*out)->rep.exit_code == 0 ? FF_OK : FF_ERR_CHECKS;
    } catch (const ff::harness::ConfigError& e) {
        set_error(e.what());
        return FF_ERR_CONFIG;
    } catch (const std::exception& e) {
        set_error(e.what());
        return FF_ERR_NUMERIC;
    }
}

const char* ff_report_json(const ff_report* rep) {
    return rep ? rep->rep.summary_json.c_str() : "";
}

int ff_report_ok(const ff_report* rep) { return rep && rep->rep.exit_code == 0 ? 1 : 0; }

int ff_report_exit_code(const ff_report* rep) { return rep ? rep->rep.exit_code : FF_ERR_INVALID; }

void ff_report_free(ff_report* rep) { delete rep; }

} // extern "C"
