#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fracfilt/config.hpp"
#include "fracfilt/io.hpp"
#include "fracfilt/rng.hpp"
#include "fracfilt/runner.hpp"

using namespace ff;
using namespace ff::harness;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("fracfilt_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

} // namespace

TEST_CASE("config round trip is idempotent") {
    ExperimentConfig a;
    auto text = a.to_json_text();
    auto b = ExperimentConfig::from_json_text(text);
    CHECK(b.to_json_text() == text);
    CHECK(b.alpha == a.alpha);
    CHECK(b.particles == a.particles);
    CHECK(b.master_seed == a.master_seed);
}

TEST_CASE("config validation: persistence constraint is enforced with a message") {
    try {
        (void)ExperimentConfig::from_json_text(R"({"hurst": {"alpha": 0.4, "beta": 0.6}})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        bool mentions = false;
        for (const auto& m : e.messages)
            if (m.find("persistence") != std::string::npos) mentions = true;
        CHECK(mentions);
    }
}

TEST_CASE("config validation: condition (A1), particle floor, registry names") {
    CHECK_THROWS_AS((void)ExperimentConfig::from_json_text(
                        R"({"hurst": {"alpha": 0.9, "beta": 0.6}, "sensor": {"holder_order": 0.5}})"),
                    ConfigError);
    CHECK_THROWS_AS((void)ExperimentConfig::from_json_text(R"({"filter": {"particles": 3}})"),
                    ConfigError);
    CHECK_THROWS_AS((void)ExperimentConfig::from_json_text(
                        R"({"sde": {"drift": {"name": "nosuch"}}})"),
                    ConfigError);
    CHECK_THROWS_AS((void)ExperimentConfig::from_json_text(R"({"filter": {"path": "bogus"}})"),
                    ConfigError);
    CHECK_THROWS_AS((void)ExperimentConfig::from_json_text("{nonsense"), ConfigError);
}

TEST_CASE("rng streams: reproducible, distinct, decorrelated") {
    auto a = rng::stream(7, 1), b = rng::stream(7, 1), c = rng::stream(7, 2);
    std::normal_distribution<double> nda, ndb, ndc;
    const std::size_t N = 100000;
    double dot = 0.0, ssa = 0.0, ssc = 0.0;
    bool all_equal = true;
    for (std::size_t k = 0; k < N; ++k) {
        double xa = nda(a), xb = ndb(b), xc = ndc(c);
        if (xa != xb) all_equal = false;
        dot += xa * xc;
        ssa += xa * xa;
        ssc += xc * xc;
    }
    CHECK(all_equal);
    double corr = dot / std::sqrt(ssa * ssc);
    CHECK(std::abs(corr) < 5.0 / std::sqrt(static_cast<double>(N)));
    // documented stream assignment
    CHECK(rng::kStreamSignalSheet == 1);
    CHECK(rng::kStreamNoiseSheet == 2);
    CHECK(rng::kStreamParticleBase == 3);
}

TEST_CASE("field CSV header and binary round trip") {
    auto dir = fresh_dir("io");
    lattice::Grid2D g(1.0, 2.0, 3, 4);
    Matrix v(3, 4);
    for (std::size_t k = 0; k < v.size(); ++k) v.data()[k] = std::sin(static_cast<double>(k));
    lattice::SampledField2D f(g, v);

    io::write_field_csv((dir / "f.csv").string(), f);
    std::string csv = slurp(dir / "f.csv");
    CHECK(csv.rfind("i,j,z1,z2,value\n", 0) == 0);

    io::write_field_bin((dir / "f.ffld").string(), f);
    auto back = io::read_field_bin((dir / "f.ffld").string());
    CHECK(back.grid == g);
    for (std::size_t k = 0; k < v.size(); ++k)
        CHECK(back.values.data()[k] == v.data()[k]);  // bit-exact

    io::write_trace_csv((dir / "t.csv").string(), {{0.1, 0.2, 1.0, 0.5, 0.01, 99.0}});
    CHECK(slurp(dir / "t.csv").rfind("z1,z2,sigma,pi,se,n_eff\n", 0) == 0);
}

TEST_CASE("simulate subcommand writes the documented artifacts") {
    auto dir = fresh_dir("simulate");
    ExperimentConfig cfg;
    cfg.n1 = cfg.n2 = 6;
    cfg.out_dir = dir.string();
    auto rep = run_subcommand(cfg, "simulate");
    CHECK(rep.exit_code == 0);
    for (const char* f : {"report.json", "wiener_signal.csv", "fbs_noise.csv", "signal.csv",
                          "observation.csv", "whitened_observation.csv", "observation.ffld"})
        CHECK(fs::exists(dir / f));
    // binary artifact round-trips
    auto y = io::read_field_bin((dir / "observation.ffld").string());
    CHECK(y.grid.n1() == 6);
}

TEST_CASE("filter-curve with g == 0 and frozen dynamics reproduces the prior mean") {
    auto dir = fresh_dir("curve");
    ExperimentConfig cfg;
    cfg.n1 = cfg.n2 = 6;
    cfg.particles = 60;
    cfg.sensor = {"zero", {}};
    cfg.drift = {"zero", {}};
    cfg.diffusion = {"zero", {}};
    cfg.out_dir = dir.string();
    auto rep = run_subcommand(cfg, "filter-curve");
    CHECK(rep.exit_code == 0);
    // prior mean of F(x0) with x0 ~ the config law, from the same particle streams
    double prior = 0.0;
    auto F = cfg.make_test_function();
    for (std::size_t p = 0; p < cfg.particles; ++p) {
        auto gen = rng::stream(cfg.master_seed, rng::kStreamParticleBase + p);
        prior += F.F(cfg.make_x0_sampler()(gen));
    }
    prior /= static_cast<double>(cfg.particles);
    std::ifstream in(dir / "curve_trace.csv");
    std::string line;
    std::getline(in, line);  // header
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        auto p1 = line.find(',', line.find(',') + 1);
        auto p2 = line.find(',', p1 + 1);
        auto p3 = line.find(',', p2 + 1);
        double pi = std::stod(line.substr(p2 + 1, p3 - p2 - 1));
        CHECK(pi == doctest::Approx(prior).epsilon(1e-12));
    }
    CHECK(rows == 6 + 6 - 1);
}

TEST_CASE("filter-bayes writes a full-grid trace") {
    auto dir = fresh_dir("bayes");
    ExperimentConfig cfg;
    cfg.n1 = cfg.n2 = 5;
    cfg.particles = 40;
    cfg.out_dir = dir.string();
    auto rep = run_subcommand(cfg, "filter-bayes");
    CHECK(rep.exit_code == 0);
    std::ifstream in(dir / "bayes_trace.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "z1,z2,sigma,pi,se,n_eff");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 25);
}

TEST_CASE("properties at fast level passes and is byte-identical across runs") {
    ExperimentConfig cfg;
    cfg.check_level = "fast";
    cfg.particles = 200;

    auto dirA = fresh_dir("propA");
    cfg.out_dir = dirA.string();
    auto repA = run_subcommand(cfg, "properties");
    CHECK(repA.exit_code == 0);
    for (const auto& c : repA.checks) {
        INFO(c.name, ": ", c.note);
        CHECK(c.pass);
    }

    auto dirB = fresh_dir("propB");
    cfg.out_dir = dirB.string();
    auto repB = run_subcommand(cfg, "properties");
    CHECK(repB.exit_code == 0);

    // every artifact byte-identical (report echoes the differing out_dir, so
    // compare reports structurally and data files byte-wise)
    for (const auto& entry : fs::directory_iterator(dirA)) {
        auto name = entry.path().filename();
        CHECK(fs::exists(dirB / name));
        if (name == "report.json") continue;
        CHECK(slurp(entry.path()) == slurp(dirB / name));
    }
    auto a = slurp(dirA / "report.json"), b = slurp(dirB / "report.json");
    // neutralize the configured output directory before comparing
    auto scrub = [](std::string s, const std::string& dir) {
        for (auto pos = s.find(dir); pos != std::string::npos; pos = s.find(dir))
            s.erase(pos, dir.size());
        return s;
    };
    CHECK(scrub(a, dirA.string()) == scrub(b, dirB.string()));
}

TEST_CASE("convergence subcommand writes refinement tables") {
    auto dir = fresh_dir("conv");
    ExperimentConfig cfg;
    cfg.check_level = "fast";
    cfg.refinement_levels = {32, 64};
    cfg.out_dir = dir.string();
    auto rep = run_subcommand(cfg, "convergence");
    CHECK(rep.exit_code == 0);
    CHECK(fs::exists(dir / "convergence_fraccalc.csv"));
    CHECK(fs::exists(dir / "convergence_kernel_bias.csv"));
}

TEST_CASE("unknown subcommand is a config error") {
    ExperimentConfig cfg;
    CHECK_THROWS_AS((void)run_subcommand(cfg, "no-such"), ConfigError);
}
