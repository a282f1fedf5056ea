#pragma once

// Subcommands behind the `vgr` executable. Each returns the process exit
// code: 0 when the command ran (a non-converged solve still counts), 2 on any
// input or configuration error.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vgr/config.hpp"

namespace vgr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "VGR_OUTPUT_DIR";

struct Options {
    std::optional<std::filesystem::path> config;
    std::vector<std::string> overrides; // "key=value"
    std::optional<std::string> method;
    std::optional<bool> v_known;
    std::optional<std::filesystem::path> out;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<std::filesystem::path> x;
    std::optional<std::filesystem::path> v;
    std::optional<std::filesystem::path> estimate;
    std::optional<std::filesystem::path> truth;
    std::optional<Index> n;
};

/// Defaults, then the config file, then --set overrides, then dedicated flags.
ExperimentConfig resolve_config(const Options& opts);

/// Flag, then config file, then $VGR_OUTPUT_DIR, then "vgr_out".
std::filesystem::path resolve_output_dir(const Options& opts, const ExperimentConfig& cfg);

int cmd_generate(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_infer(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_eval(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_oracle(const Options& opts, std::ostream& out, std::ostream& err);

} // namespace vgr::cli
