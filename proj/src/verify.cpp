#include "sketchridge/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <ostream>
#include <string>

#include "parallel.hpp"
#include "sketchridge/errors.hpp"
#include "sketchridge/rng.hpp"

namespace sketchridge {

AmmReport amm_error(const SparseSketch& S, const DenseMatrix& M,
                    const DenseMatrix& N) {
  if (M.rows() != S.cols() || N.rows() != S.cols()) {
    throw DimensionError("amm_error: operands " + shape_string(M) + " and " +
                         shape_string(N) + " for sketch with " +
                         std::to_string(S.cols()) + " columns");
  }
  const double denom = frobenius_norm(M) * frobenius_norm(N);
  if (denom == 0.0) throw InvalidArgument("amm_error: zero-norm operand");

  const DenseMatrix sm = apply_sketch(S, M);
  const DenseMatrix sn = apply_sketch(S, N);
  DenseMatrix err = matmul(transpose(sm), sn);
  const DenseMatrix exact = matmul(transpose(M), N);
  for (std::size_t k = 0; k < err.size(); ++k) err.data()[k] -= exact.data()[k];

  return {frobenius_norm(err) / denom, S.spec().m, S.spec().s, S.spec().seed};
}

DistortionReport subspace_distortion(const SparseSketch& S, const DenseMatrix& V) {
  if (V.rows() != S.cols()) {
    throw DimensionError("subspace_distortion: basis " + shape_string(V) +
                         " for sketch with " + std::to_string(S.cols()) +
                         " columns");
  }
  DenseMatrix vtv = gram_cols(V);
  add_to_diagonal(vtv, -1.0);
  if (max_abs(vtv) > 1e-8) {
    throw InvalidArgument("subspace_distortion: V is not orthonormal");
  }
  DenseMatrix E = gram_cols(apply_sketch(S, V));
  add_to_diagonal(E, -1.0);
  const std::vector<double> eig = symmetric_eigenvalues(E);

  DistortionReport report;
  report.frobenius_error = frobenius_norm(E);
  if (!eig.empty()) {
    report.distortion = std::max(std::abs(eig.front()), std::abs(eig.back()));
    report.sketched_norm = std::sqrt(std::max(0.0, 1.0 + eig.back()));
  }
  return report;
}

namespace {

double squared_norm(std::span<const double> v) {
  const double n = l2_norm(v);
  return n * n;
}

SketchSpec with_seed(SketchSpec spec, std::uint64_t seed) {
  spec.seed = seed;
  return spec;
}

}  // namespace

JlMoments jl_moment_estimate(const SketchSpec& spec, std::span<const double> x,
                             std::size_t trials) {
  spec.validate();
  if (x.size() != spec.d) {
    throw DimensionError("jl_moment_estimate: vector of length " +
                         std::to_string(x.size()) + " for d = " +
                         std::to_string(spec.d));
  }
  if (std::abs(l2_norm(x) - 1.0) > 1e-10) {
    throw InvalidArgument("jl_moment_estimate: x must have unit norm");
  }
  if (trials < 1000) throw InvalidArgument("jl_moment_estimate: need >= 1000 trials");

  std::vector<double> values(trials);
  detail::parallel_for(trials, configured_threads(), [&](std::size_t k) {
    const SparseSketch S(with_seed(spec, derive_seed(spec.seed, k)));
    values[k] = squared_norm(apply_sketch(S, x));
  });

  const double count = static_cast<double>(trials);
  double mean = 0.0, second = 0.0;
  for (double v : values) {
    mean += v;
    second += (v - 1.0) * (v - 1.0);
  }
  mean /= count;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= count - 1.0;

  JlMoments out;
  out.mean = mean;
  out.l2_moment = std::sqrt(second / count);
  out.variance = var;
  out.std_err = std::sqrt(var / count);
  for (double& v : values) v = std::abs(v - 1.0);
  out.q50 = quantile(values, 0.5);
  out.q90 = quantile(values, 0.9);
  return out;
}

std::vector<double> frobenius_relative_errors(const SketchSpec& spec,
                                              const DenseMatrix& A,
                                              std::size_t trials) {
  spec.validate();
  if (A.rows() != spec.d) {
    throw DimensionError("frobenius check: " + shape_string(A) + " for d = " +
                         std::to_string(spec.d));
  }
  if (trials == 0) throw InvalidArgument("need at least one trial");
  const double target = squared_norm(A.data());
  if (target == 0.0) throw InvalidArgument("frobenius check: A is zero");
  std::vector<double> errors(trials);
  detail::parallel_for(trials, configured_threads(), [&](std::size_t k) {
    const SparseSketch S(with_seed(spec, derive_seed(spec.seed, k)));
    errors[k] = std::abs(squared_norm(apply_sketch(S, A).data()) - target) / target;
  });
  return errors;
}

double frobenius_preservation_check(const SketchSpec& spec, const DenseMatrix& A,
                                    double epsilon, std::size_t trials) {
  if (spec.family != SketchFamily::CountSketch) {
    throw InvalidArgument("frobenius_preservation_check needs a CountSketch spec");
  }
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be > 0");
  if (static_cast<double>(spec.m) < 200.0 / (epsilon * epsilon)) {
    throw InvalidArgument("frobenius_preservation_check needs m >= 200/eps^2");
  }
  const std::vector<double> errors = frobenius_relative_errors(spec, A, trials);
  const auto hits = std::count_if(errors.begin(), errors.end(),
                                  [&](double e) { return e <= epsilon; });
  return static_cast<double>(hits) / static_cast<double>(trials);
}

double quantile(std::vector<double> samples, double level) {
  if (samples.empty()) throw InvalidArgument("quantile of empty sample");
  std::sort(samples.begin(), samples.end());
  const double pos = level * static_cast<double>(samples.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, samples.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return samples[lo] + frac * (samples[hi] - samples[lo]);
}

SweepCurve amm_lowerbound_probe(const ProbeConfig& config) {
  const auto& grid = config.m_grid;
  if (grid.empty()) throw InvalidArgument("probe: empty m grid");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (grid[k] <= grid[k - 1]) {
      throw InvalidArgument("probe: m grid must be strictly increasing");
    }
  }
  if (config.n < 1) throw InvalidArgument("probe: n must be >= 1");
  if (!(config.epsilon > 0.0) ||
      config.epsilon > 0.5 / std::sqrt(static_cast<double>(config.n))) {
    throw InvalidArgument("probe: need 0 < epsilon <= 0.5/sqrt(n)");
  }
  const bool identity = config.family == SketchFamily::Identity;
  if (!identity && config.d < 4 * grid.back()) {
    throw InvalidArgument("probe: need d >= 4 * max(m)");
  }
  if (config.d < config.n) throw InvalidArgument("probe: need d >= n");
  if (config.trials < 100) throw InvalidArgument("probe: need >= 100 trials");

  SweepCurve curve;
  curve.family = config.family;
  curve.s = config.s;
  curve.seed_base = config.seed;
  const double n = static_cast<double>(config.n);

  for (std::size_t g = 0; g < grid.size(); ++g) {
    SketchSpec spec{config.family, grid[g], config.d, config.s, 0};
    spec.validate();
    std::vector<double> errors(config.trials);
    detail::parallel_for(config.trials, configured_threads(), [&](std::size_t t) {
      const std::uint64_t key = (static_cast<std::uint64_t>(g) << 32) | t;
      const DenseMatrix V = orthonormal_columns(
          gaussian_matrix(config.d, config.n, derive_seed(config.seed, 2 * key)));
      const SparseSketch S(with_seed(spec, derive_seed(config.seed, 2 * key + 1)));
      DenseMatrix E = gram_cols(apply_sketch(S, V));
      add_to_diagonal(E, -1.0);
      errors[t] = frobenius_norm(E) / n;
    });
    curve.points.push_back({grid[g], quantile(errors, 0.5),
                            quantile(errors, 0.9), config.trials});
  }
  return curve;
}

double loglog_slope(const SweepCurve& curve) {
  const std::size_t k = curve.points.size();
  if (k < 2) throw InvalidArgument("loglog_slope needs >= 2 points");
  double sx = 0.0, sy = 0.0;
  std::vector<double> xs(k), ys(k);
  for (std::size_t i = 0; i < k; ++i) {
    if (!(curve.points[i].q50 > 0.0)) {
      throw InvalidArgument("loglog_slope needs positive medians");
    }
    xs[i] = std::log(static_cast<double>(curve.points[i].m));
    ys[i] = std::log(curve.points[i].q50);
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / static_cast<double>(k);
  const double my = sy / static_cast<double>(k);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  return num / den;
}

std::size_t configured_threads() {
  const char* env = std::getenv("SKETCHRIDGE_THREADS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  const long value = std::strtol(env, &end, 10);
  if (*end != '\0' || value < 1) return 1;
  return static_cast<std::size_t>(value);
}

void write_sweep_csv(std::ostream& out, const SweepCurve& curve) {
  out << "# sketchridge sweep v1 family=" << to_string(curve.family) << "\n";
  out << "m,s,seed_base,trials,q50,q90\n";
  char buf[64];
  for (const auto& p : curve.points) {
    out << p.m << ',' << curve.s << ',' << curve.seed_base << ',' << p.trials;
    std::snprintf(buf, sizeof buf, ",%.17g", p.q50);
    out << buf;
    std::snprintf(buf, sizeof buf, ",%.17g", p.q90);
    out << buf << '\n';
  }
}

}  // namespace sketchridge
