#pragma once

#include "ccrlab/ccr_matrix.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ccrlab::cli {

enum ExitCode : int { kSuccess = 0, kRuntimeFailure = 1, kValidationError = 2 };

struct RunConfig {
    std::string subcommand;
    std::uint64_t seed = 1;
    std::vector<ccr::Scheme> schemes{ccr::Scheme::oscillator};
    std::vector<int> dims{1024};
    std::vector<double> alphas;  // empty means {2pi/3}
    double t = 0.5;
    int m = 1 << 14;
    std::int64_t samples = 10000;
    std::vector<int> n_list{64, 256, 1024, 4096, 8192};
    std::vector<double> delta_list{0.015625, 0.00390625, 0.0009765625, 0.000244140625};
    std::string profile = "WB";
    double basin = 0.0078125;
    double zeta = 0.5;
    int trials = 100;
    int threads = 1;
    bool record_timing = false;
    std::string out;  // empty: default file name in the output directory
    std::string format;  // empty: json for weyl-suite and obstruction, else csv
    std::string norm_from;
    std::string lemma43_from;
};

/// Throws std::invalid_argument on any inconsistent field, including
/// grid-misaligned (n, delta, m) combinations.
void validate(const RunConfig& cfg);

/// Output path: cfg.out, else <CCRLAB_OUT_DIR or .>/<subcommand default>.
std::string output_path(const RunConfig& cfg);

/// Runs a validated config, writes the artifact and a one-line summary.
int dispatch(const RunConfig& cfg, std::ostream& summary, std::ostream& errors);

/// Parses argv-style arguments (without the program name), validates and
/// dispatches. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& summary, std::ostream& errors);

} // namespace ccrlab::cli
