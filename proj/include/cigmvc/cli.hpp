#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "cigmvc/dataset_io.hpp"
#include "cigmvc/solver.hpp"

namespace cigmvc::cli {

struct RunConfig {
  std::optional<std::filesystem::path> manifest;
  std::optional<SyntheticSpec> synthetic;
  Hyperparams hp;
  /// 0 means "take C from the dataset".
  int clusters = 0;
  int repetitions = 1;
  std::uint64_t seed = 0;
  bool standardize = false;
  std::filesystem::path out_dir = "out";
};

/// Parses "n=50,c=3,v=3,dim=5,noise=0.3"; unspecified keys keep defaults.
SyntheticSpec parse_synthetic_spec(const std::string& text);

/// Runs the solver per repetition; writes labels.csv, trace.csv and
/// metrics.json under out_dir. Returns a process exit code.
int cmd_run(const RunConfig& config);

/// Runs the full method and baseline mode on shared similarity graphs;
/// writes ci/ and baseline/ outputs plus comparison.csv and metrics.json.
int cmd_compare(const RunConfig& config);

/// Writes trace rows with a header; formatting is locale-independent and
/// round-trips doubles.
void write_trace_csv(const SolverState& state, const std::filesystem::path& path);

int main(int argc, char** argv);

}  // namespace cigmvc::cli
