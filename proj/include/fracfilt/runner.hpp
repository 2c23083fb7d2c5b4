#pragma once

#include <string>
#include <vector>

#include "fracfilt/config.hpp"

namespace ff::harness {

struct CheckResult {
    std::string name;
    bool pass = false;
    double statistic = 0.0;  // the measured quantity
    double threshold = 0.0;  // what it was compared against
    std::string note;
};

struct RunReport {
    int exit_code = 0;  // 0 ok, 1 check failure, 2 config, 3 numerical
    std::vector<CheckResult> checks;
    std::string summary_json;  // deterministic report body (config echo + checks + extras)
};

/// Execute one subcommand: simulate | filter-bayes | filter-curve | dmz-check |
/// properties | convergence. Writes artifacts under cfg.out_dir.
RunReport run_subcommand(const ExperimentConfig& cfg, const std::string& subcommand);

/// The individual acceptance-grade checks (also reachable through `properties`).
std::vector<CheckResult> check_frac_oracles(const ExperimentConfig& cfg);        // criterion 1
std::vector<CheckResult> check_algebraic_laws(const ExperimentConfig& cfg);      // criterion 2
std::vector<CheckResult> check_lemma1(const ExperimentConfig& cfg);              // criterion 3
std::vector<CheckResult> check_fbs_law(const ExperimentConfig& cfg);             // criterion 4
std::vector<CheckResult> check_whitening(const ExperimentConfig& cfg);           // criterion 5
std::vector<CheckResult> check_likelihood_norm(const ExperimentConfig& cfg);     // criterion 6
std::vector<CheckResult> check_filter_consistency(const ExperimentConfig& cfg);  // criterion 7
std::vector<CheckResult> check_conjugate(const ExperimentConfig& cfg);           // criterion 8
std::vector<CheckResult> check_dmz(const ExperimentConfig& cfg);                 // criterion 9
std::vector<CheckResult> check_condexp(const ExperimentConfig& cfg);             // criterion 10

} // namespace ff::harness
