#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace ratclust {

enum class ExitCode : int {
    ok = 0,
    check_failed = 1,
    unknown_subcommand = 2,
    invalid_parameters = 3,
    io_failure = 4,
};

/// A reproducible experiment: subcommand, string parameters and output location.
struct ExperimentManifest {
    std::string name;
    std::string subcommand;  // e.g. "approx sweep"
    std::map<std::string, std::string> parameters;
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    bool check = false;
    bool csv_only = false;

    [[nodiscard]] std::string to_json() const;
    /// Throws InvalidArgument on malformed input.
    [[nodiscard]] static ExperimentManifest from_json(const std::string& text);
};

struct ExperimentResult {
    ExitCode status = ExitCode::ok;
    std::vector<std::string> artifacts;  // paths written, in order
    std::vector<std::string> report;     // human-readable summary lines
};

[[nodiscard]] const std::vector<std::string>& known_subcommands();

/// Runs the experiment, writes CSVs (and gnuplot scripts unless csv_only) plus
/// manifest.json into out_dir. Never throws; failures map to the exit code.
[[nodiscard]] ExperimentResult run(const ExperimentManifest& manifest);

/// Worker count from CR_THREADS (default: hardware concurrency, at least 1).
[[nodiscard]] unsigned worker_count();

/// Calls body(i) for i in [0, count) on up to worker_count() threads.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace ratclust
