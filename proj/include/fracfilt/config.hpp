#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fracfilt/filter.hpp"
#include "fracfilt/gaussfield.hpp"
#include "fracfilt/lattice.hpp"
#include "fracfilt/model.hpp"

namespace ff::harness {

/// Invalid configuration, carrying field-level messages. Maps to exit code 2.
struct ConfigError : std::runtime_error {
    std::vector<std::string> messages;
    explicit ConfigError(std::vector<std::string> msgs);
};

/// Named function with parameters, resolved against a fixed registry.
struct FnSpec {
    std::string name;
    std::map<std::string, double> params;

    double param(const std::string& key, double fallback) const;
};

struct X0Law {
    std::string law = "gaussian";  // gaussian | const
    double mean = 0.5;
    double sd = 0.2;
};

struct ExperimentConfig {
    int schema_version = 1;

    double T1 = 1.0, T2 = 1.0;
    std::size_t n1 = 8, n2 = 8;

    double alpha = 0.6, beta = 0.6;

    FnSpec drift{"affine", {{"a0", 0.15}, {"a1", -0.3}}};
    FnSpec diffusion{"const", {{"c", 0.25}}};
    X0Law x0;

    FnSpec sensor{"scaled_sin", {{"scale", 0.25}, {"freq", 1.0}}};
    double holder_order = 1.0;

    std::size_t particles = 5000;
    std::string test_function = "sin";
    std::string path = "diagonal";  // diagonal | axis1 | axis2 | custom
    std::vector<std::pair<std::size_t, std::size_t>> custom_path;

    std::uint64_t master_seed = 42;

    double sigma_mult = 5.0;
    std::vector<std::size_t> refinement_levels{128, 256, 512, 1024};
    double stability_threshold = 0.25;
    double order_min = 0.8;

    std::string out_dir = "out";
    std::vector<std::string> formats{"csv", "json"};

    int jobs = 1;
    std::string check_level = "full";          // fast | full
    std::string wy_source = "decomposition";   // decomposition | whiten

    /// Parse + validate; throws ConfigError with field-level messages.
    static ExperimentConfig from_json_text(const std::string& text);
    static ExperimentConfig load_file(const std::string& path);
    std::string to_json_text() const;  // round-trip echo

    // resolved builders
    lattice::Grid2D make_grid() const;
    gauss::HurstPair make_hurst() const;
    model::RealFn make_drift() const;
    model::RealFn make_diffusion() const;
    model::SensorFunction make_sensor() const;
    filter::TestFunction make_test_function() const;
    std::function<double(std::mt19937_64&)> make_x0_sampler() const;
    filter::MonotonePath make_path(const lattice::Grid2D& g) const;
};

/// Registry lookups shared by config and tests.
model::RealFn resolve_scalar_fn(const FnSpec& spec);
filter::TestFunction resolve_test_function(const std::string& name);

} // namespace ff::harness
