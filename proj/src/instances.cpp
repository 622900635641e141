#include "sketchridge/instances.hpp"

#include "sketchridge/errors.hpp"
#include "sketchridge/rng.hpp"

namespace sketchridge {

GaussianInstance gen_gaussian_instance(std::size_t n, std::size_t d,
                                       std::uint64_t seed, double target_ratio) {
  if (n < 1 || n > d) throw InvalidArgument("gaussian instance needs 1 <= n <= d");
  if (!(target_ratio > 0.0)) throw InvalidArgument("target ratio must be > 0");
  GaussianInstance out;
  out.problem.A = gaussian_matrix(n, d, derive_seed(seed, 0));
  CounterRng rng(seed, 1);
  out.problem.b.resize(n);
  for (double& v : out.problem.b) v = rng.normal();
  out.sigma = spectral_norm(out.problem.A).value;
  out.problem.lambda = out.sigma * out.sigma / target_ratio;
  out.achieved_ratio = out.sigma * out.sigma / out.problem.lambda;
  return out;
}

double gap_hamming_opt(std::size_t hamming, double lambda) {
  return 2.0 * lambda / (lambda + 2.0 * static_cast<double>(hamming));
}

GapHammingInstance gen_gap_hamming(std::span<const double> x,
                                   std::span<const double> y, double lambda) {
  if (x.size() != y.size() || x.empty()) {
    throw DimensionError("gap-hamming vectors must be non-empty and equal length");
  }
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be > 0");
  GapHammingInstance out;
  const std::size_t d = x.size();
  out.problem.A = DenseMatrix(2, d);
  for (std::size_t k = 0; k < d; ++k) {
    if ((x[k] != 1.0 && x[k] != -1.0) || (y[k] != 1.0 && y[k] != -1.0)) {
      throw InvalidArgument("gap-hamming entries must be +1 or -1 (index " +
                            std::to_string(k) + ")");
    }
    out.problem.A(0, k) = x[k];
    out.problem.A(1, k) = y[k];
    if (x[k] != y[k]) ++out.hamming;
  }
  out.problem.b = {1.0, -1.0};
  out.problem.lambda = lambda;
  out.opt_closed_form = gap_hamming_opt(out.hamming, lambda);
  return out;
}

std::vector<double> random_sign_vector(std::size_t d, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<double> v(d);
  for (double& x : v) x = rng.sign();
  return v;
}

}  // namespace sketchridge
