#include "sketchridge/bench.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>

#include "sketchridge/errors.hpp"
#include "sketchridge/io.hpp"
#include "sketchridge/rng.hpp"

namespace sketchridge {

namespace {

template <class F>
double median_seconds(std::size_t repeats, F&& f) {
  std::vector<double> times;
  for (std::size_t r = 0; r < std::max<std::size_t>(repeats, 1); ++r) {
    const auto start = std::chrono::steady_clock::now();
    f();
    times.push_back(std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - start).count());
  }
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace

BenchResult run_bench(const RidgeProblem& p, const BenchConfig& config) {
  if (config.grid.empty()) throw InvalidArgument("bench: empty grid");
  if (config.seeds < 1) throw InvalidArgument("bench: need at least one seed");
  p.validate();

  BenchResult result;
  Vector x_star;
  result.naive_seconds =
      median_seconds(config.timing_repeats, [&] { x_star = ridge_exact(p); });
  result.opt = cost(p, x_star);
  const double x_norm = l2_norm(x_star);

  for (std::size_t g = 0; g < config.grid.size(); ++g) {
    const std::size_t m = config.grid[g];
    SketchSpec base{config.family, m, p.d(), config.s, 0};
    if (config.family == SketchFamily::CountSketch ||
        config.family == SketchFamily::Identity) {
      base.s = 1;
    }
    if (config.family == SketchFamily::Gaussian) base.s = m;

    BenchRow row;
    row.m = m;
    row.s = base.s;
    row.t = config.t;
    std::vector<double> seed_times;
    for (std::size_t k = 0; k < config.seeds; ++k) {
      base.seed = derive_seed(config.seed, (g << 20) | k);
      const SketchFactory factory = fresh_sketches(base);
      SolveReport report;
      seed_times.push_back(median_seconds(config.timing_repeats, [&] {
        report = ridge_sketched_iterative(p, config.t, factory);
      }));
      Vector diff = report.x_hat;
      for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= x_star[i];
      row.cost_ratios.push_back(report.cost / result.opt);
      row.rel_errors.push_back(x_norm > 0.0 ? l2_norm(diff) / x_norm : l2_norm(diff));
    }
    row.cost_ratio = mean(row.cost_ratios);
    row.rel_err = mean(row.rel_errors);
    row.time_ratio = mean(seed_times) / result.naive_seconds;
    result.rows.push_back(std::move(row));
  }
  return result;
}

void write_bench_csv(std::ostream& out, const BenchResult& result) {
  out << "# sketchridge bench v1\n";
  out << "m,s,t,cost_ratio,rel_err,t_alg/t_naive\n";
  for (const auto& row : result.rows) {
    out << row.m << ',' << row.s << ',' << row.t << ',' << format_real(row.cost_ratio)
        << ',' << format_real(row.rel_err) << ',' << format_real(row.time_ratio) << '\n';
  }
}

}  // namespace sketchridge
