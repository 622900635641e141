#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "sketchridge/ridge.hpp"
#include "sketchridge/sketch.hpp"

namespace sketchridge {

struct BenchConfig {
  std::vector<std::size_t> grid;  ///< sketch rows to try
  SketchFamily family = SketchFamily::OSNAP;
  std::size_t s = 8;
  std::size_t t = 1;
  std::size_t seeds = 5;
  std::size_t timing_repeats = 3;
  std::uint64_t seed = 0;
};

struct BenchRow {
  std::size_t m = 0;
  std::size_t s = 0;
  std::size_t t = 0;
  std::vector<double> cost_ratios;  ///< cost(x̂)/Opt per seed
  std::vector<double> rel_errors;   ///< ‖x̂ − x*‖/‖x*‖ per seed
  double cost_ratio = 0.0;          ///< mean over seeds
  double rel_err = 0.0;             ///< mean over seeds
  double time_ratio = 0.0;          ///< t_alg / t_naive (timing only)
};

struct BenchResult {
  double opt = 0.0;
  double naive_seconds = 0.0;
  std::vector<BenchRow> rows;
};

/// Sweeps the sketch rows over `grid` on one problem. Quality columns average
/// `seeds` independent sketches; timings are medians over `timing_repeats`
/// runs, with the exact solver timed in the same process.
BenchResult run_bench(const RidgeProblem& p, const BenchConfig& config);

/// Versioned header comment, then m,s,t,cost_ratio,rel_err,t_alg/t_naive.
void write_bench_csv(std::ostream& out, const BenchResult& result);

}  // namespace sketchridge
