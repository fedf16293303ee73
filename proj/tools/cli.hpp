#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cbeta::cli {

inline constexpr int kFormatVersion = 1;

enum ExitCode : int
{
    kSuccess = 0,
    kValidationFailure = 2,
    kAbortThresholdExceeded = 3,
};

//! Fraction of aborted trajectories above which a run exits with status 3.
inline constexpr double kAbortFractionLimit = 0.01;

struct RunConfig
{
    std::string command;
    double beta = 2.0;
    std::optional<std::size_t> n_max;
    std::optional<std::size_t> trials;
    std::string measure = "q";
    std::optional<double> theta;
    std::uint64_t seed = 0;
    unsigned workers = 0;
    std::string out_format = "json";
    std::string out_path = "-";
    std::optional<std::size_t> grid_resolution;
    std::optional<double> truncate_delta;
    std::size_t k = 0;
    std::uint64_t stream_id = 0;
    std::size_t bins = 40;
    std::vector<std::size_t> n_ladder;
    bool override_cap = false;
};

std::vector<std::string> const& command_names();

//! Throws std::invalid_argument describing the first problem found.
void validate(RunConfig const& config);

//! Runs the experiment, writes the artifact to config.out_path ("-" for
//! stdout) and a one-line summary to `out`, or to `err` when the artifact
//! goes to stdout. Returns an ExitCode.
int dispatch(RunConfig const& config, std::ostream& out, std::ostream& err);

//! Parses argv into a RunConfig and dispatches it.
int run(int argc, char const* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cbeta::cli
