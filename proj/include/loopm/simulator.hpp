#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "loopm/ast.hpp"
#include "loopm/moments.hpp"

namespace loopm {

/// Sampled values of one run. values[i][v] is variable `vars[v]` after i
/// iterations (i = 0 is right after the initializations).
struct Trace {
  std::uint64_t seed = 0;
  std::size_t sample = 0;
  std::vector<std::string> vars;
  std::vector<std::vector<double>> values;

  double value(std::size_t iteration, const std::string& var) const;
};

struct SimulationOptions {
  std::size_t iterations = 10;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  Bindings bindings;
  /// 0 picks the hardware concurrency. Results do not depend on it.
  unsigned threads = 0;
};

/// Independent runs of the program. Every draw takes its randomness from a
/// stream keyed by (seed, sample, iteration, statement, target). A false
/// guard leaves the state unchanged.
std::vector<Trace> run_samples(const Ast& ast, const SimulationOptions& options);

struct Estimate {
  double value = 0;
  double stderr_ = 0;
};

/// Sample mean of the goal at iteration n; central moments and cumulants
/// are plug-in estimates with batch-means standard errors.
Estimate estimate_moment(const std::vector<Trace>& traces, const MomentGoal& goal, std::size_t n);

/// "sample,iteration,<vars...>" with one row per sample and iteration.
void write_csv(const std::vector<Trace>& traces, std::ostream& out);

/// Counter-based generator: splitmix64 over a hashed key.
class CounterRng {
 public:
  using result_type = std::uint64_t;
  CounterRng(std::uint64_t seed, std::uint64_t sample, std::uint64_t iteration, std::uint64_t statement,
             std::uint64_t target);
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()();
  /// Uniform in [0, 1).
  double uniform();

 private:
  std::uint64_t state_;
};

}  // namespace loopm
