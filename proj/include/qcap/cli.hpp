#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qcap/serialization.hpp"

namespace qcap::cli {

enum ExitCode : int {
  kOk = 0,
  kUnexpected = 1,
  kInputError = 2,
  kDomainError = 3,
  kResourceError = 4,
};

struct RunConfig {
  std::string command;
  std::string channel;
  std::string distribution;  // comma-separated weights, typicality only
  std::optional<Index> code_dim;
  std::optional<Index> dim;
  std::optional<double> rate;
  std::optional<int> n_min;
  std::optional<int> n_max;
  std::optional<double> epsilon;
  std::optional<std::uint64_t> samples;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string out;
  int threads = 1;
  bool canonical = false;  // omit the run block (timestamp, threads)
};

// Fills command-specific defaults and checks required fields.
RunConfig resolve(RunConfig config);

Json config_to_json(const RunConfig& config);

/// Runs one subcommand and returns the report. The "run" block holds the
/// values that may differ between otherwise identical invocations.
Json execute(const RunConfig& config);

// Removes the "run" block.
Json canonical(Json report);

// CSV rendering of a report produced by execute().
std::string to_csv(const Json& report);

// Full command line entry point; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qcap::cli
