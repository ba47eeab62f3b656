#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace loopm {

struct RunConfig {
  enum class Format { Text, Json };

  std::string benchmark;
  /// "E(x**2)", "c2(x)", "k3(x)"; empty means E(v) for every program variable.
  std::vector<std::string> goals;
  bool invariants = false;
  bool after_loop = false;
  std::optional<std::string> sens_diff;
  std::optional<std::string> sens;
  bool synth_unsolv_inv = false;
  bool synth_solv_loop = false;
  unsigned inv_deg = 2;
  Format format = Format::Text;
  bool dump = false;

  /// Simulation instead of symbolic analysis when set (iteration count).
  std::optional<std::size_t> simulate;
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  /// "p=1/2"
  std::vector<std::string> bind;
  std::string csv;
};

enum ExitCode { kExitOk = 0, kExitAnalysis = 1, kExitUsage = 2 };

/// Runs the pipeline for one benchmark and writes the report.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Command-line front end shared by the binary and tests.
int main_with_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace loopm
