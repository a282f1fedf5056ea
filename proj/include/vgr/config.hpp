#pragma once

// Flat "section.key = value" configuration files.
//
//   # comment
//   generator.n = 20
//   solver.alpha = 0.1
//   experiment.r_grid = 50, 100, 200, 400
//
// Unknown keys are rejected so typos fail loudly.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "vgr/eval_metrics.hpp"
#include "vgr/prox_solver.hpp"
#include "vgr/rips_baseline.hpp"
#include "vgr/volterra_model.hpp"

namespace vgr {

struct ExperimentConfig {
    GeneratorConfig generator;
    SolveConfig solver;
    RcConfig rc;
    std::vector<Index> r_grid{50, 100, 200, 400};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    // Empty hyperparameter grids fall back to the single solver / rc value.
    std::vector<double> alpha_grid;
    std::vector<double> beta_grid;
    std::vector<double> gamma_grid;
    std::vector<double> eps_grid;
    bool v_known = true;
    Thresholds thresholds;
    std::filesystem::path output_dir;
    int oracle_iterations = 200000;
    int threads = 1;

    void validate() const;

    std::vector<double> alphas() const { return alpha_grid.empty() ? std::vector{solver.alpha} : alpha_grid; }
    std::vector<double> betas() const { return beta_grid.empty() ? std::vector{solver.beta} : beta_grid; }
    std::vector<double> gammas() const { return gamma_grid.empty() ? std::vector{solver.gamma} : gamma_grid; }
    std::vector<double> epsilons() const { return eps_grid.empty() ? std::vector{rc.threshold} : eps_grid; }
};

using KeyValues = std::map<std::string, std::string>;

/// Parses "key = value" lines; InputError carries file:line.
KeyValues read_key_values(const std::filesystem::path& path);
/// Parses one "key=value" override.
std::pair<std::string, std::string> parse_assignment(const std::string& text);

/// Applies key/values on top of `cfg`. InputError on unknown keys or bad values.
void apply_key_values(ExperimentConfig& cfg, const KeyValues& kv);

/// Every key with its resolved value, in key order; apply_key_values(to_key_values(c))
/// reproduces c.
KeyValues to_key_values(const ExperimentConfig& cfg);

} // namespace vgr
