#include "sketchridge/ridge.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "sketchridge/errors.hpp"
#include "sketchridge/rng.hpp"

namespace sketchridge {

void RidgeProblem::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument("ridge problem: lambda must be a finite value > 0");
  }
  if (A.rows() == 0 || A.cols() == 0) {
    throw DimensionError("ridge problem: empty matrix " + shape_string(A));
  }
  if (b.size() != A.rows()) {
    throw DimensionError("ridge problem: A is " + shape_string(A) +
                         " but b has " + std::to_string(b.size()) +
                         " entries");
  }
  require_finite(A.data(), "A");
  require_finite(b, "b");
  if (max_abs(A) == 0.0) throw InvalidArgument("ridge problem: A is zero");
}

ProblemStats problem_stats(const RidgeProblem& p) {
  p.validate();
  ProblemStats stats;
  stats.sigma = spectral_norm(p.A).value;
  stats.ratio = stats.sigma * stats.sigma / p.lambda;
  stats.opt = cost(p, ridge_exact(p));
  return stats;
}

double cost(const RidgeProblem& p, std::span<const double> x) {
  if (x.size() != p.d()) {
    throw DimensionError("cost: x has " + std::to_string(x.size()) +
                         " entries, A is " + shape_string(p.A));
  }
  Vector r = matvec(p.A, x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= p.b[i];
  const double rn = l2_norm(r);
  const double xn = l2_norm(x);
  return rn * rn + p.lambda * xn * xn;
}

Vector exact_dual_solve(const DenseMatrix& A, std::span<const double> rhs,
                        double lambda) {
  DenseMatrix G = gram_rows(A);
  add_to_diagonal(G, lambda);
  return spd_solve(G, rhs);
}

Vector ridge_exact(const RidgeProblem& p) {
  p.validate();
  return matvec_transposed(p.A, exact_dual_solve(p.A, p.b, p.lambda));
}

Vector sketched_dual_solve(const DenseMatrix& A, const SparseSketch& S,
                           std::span<const double> rhs, double lambda) {
  // A·Sᵀ is (S·Aᵀ)ᵀ; its row Gram equals (SAᵀ)ᵀ(SAᵀ).
  const DenseMatrix sketched = apply_sketch_to_rows(S, A);
  DenseMatrix G = gram_rows(sketched);
  add_to_diagonal(G, lambda);
  return spd_solve(G, rhs);
}

Vector one_shot_solution(const RidgeProblem& p, const SparseSketch& S) {
  p.validate();
  if (S.cols() != p.d()) {
    throw DimensionError("sketch has " + std::to_string(S.cols()) +
                         " columns, A is " + shape_string(p.A));
  }
  return matvec_transposed(p.A, sketched_dual_solve(p.A, S, p.b, p.lambda));
}

std::uint64_t iteration_seed(std::uint64_t base_seed, std::size_t iteration) {
  return derive_seed(base_seed, 0x17E2A7E0000ULL + iteration);
}

SketchFactory fresh_sketches(const SketchSpec& base) {
  base.validate();
  return [base](std::size_t iteration) {
    SketchSpec spec = base;
    spec.seed = iteration_seed(base.seed, iteration);
    return SparseSketch(spec);
  };
}

SolveReport ridge_sketched_iterative(const RidgeProblem& p, std::size_t t,
                                     const SketchFactory& make_sketch,
                                     const IterativeOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  p.validate();
  if (t == 0) throw InvalidArgument("ridge_sketched_iterative: t must be >= 1");
  if (options.reference && options.reference->size() != p.d()) {
    throw DimensionError("reference solution has wrong length");
  }

  SolveReport report;
  report.x_hat.assign(p.d(), 0.0);
  double ref_norm = 0.0;
  if (options.reference) {
    report.rel_residuals.emplace();
    ref_norm = l2_norm(*options.reference);
  }
  auto record_residual = [&] {
    if (!options.reference) return;
    Vector diff = report.x_hat;
    for (std::size_t k = 0; k < diff.size(); ++k)
      diff[k] -= (*options.reference)[k];
    const double err = l2_norm(diff);
    report.rel_residuals->push_back(ref_norm > 0.0 ? err / ref_norm : err);
  };

  if (l2_norm(p.b) == 0.0) {
    report.cost = cost(p, report.x_hat);
    report.wall_time_seconds = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - start).count();
    return report;
  }

  Vector rhs = p.b;
  Vector y_prev;
  Vector x_prev;
  for (std::size_t j = 1; j <= t; ++j) {
    if (j > 1) {
      const Vector ax = matvec(p.A, x_prev);
      for (std::size_t i = 0; i < rhs.size(); ++i) {
        rhs[i] = rhs[i] - p.lambda * y_prev[i] - ax[i];
      }
    }
    const SparseSketch S = make_sketch(j);
    if (S.cols() != p.d()) {
      throw DimensionError("sketch factory produced " +
                           std::to_string(S.cols()) + " columns for A of " +
                           shape_string(p.A));
    }
    const std::uint64_t seed = S.spec().seed;
    if (std::find(report.sketch_seeds.begin(), report.sketch_seeds.end(),
                  seed) != report.sketch_seeds.end()) {
      throw InvalidArgument("sketch factory reused seed " +
                            std::to_string(seed) + " at iteration " +
                            std::to_string(j));
    }
    report.sketch_seeds.push_back(seed);

    Vector y = sketched_dual_solve(p.A, S, rhs, p.lambda);
    Vector x_tilde = matvec_transposed(p.A, y);
    if (j == 1) {
      report.x_hat = x_tilde;
    } else {
      for (std::size_t k = 0; k < x_tilde.size(); ++k)
        report.x_hat[k] += x_tilde[k];
    }
    report.iterations = j;
    record_residual();
    if (options.keep_iterates) {
      report.iterates.push_back({rhs, y, x_tilde, seed});
    }
    y_prev = std::move(y);
    x_prev = std::move(x_tilde);
  }
  require_finite(report.x_hat, "solution");
  report.cost = cost(p, report.x_hat);
  report.wall_time_seconds = std::chrono::duration<double>(
      std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace sketchridge
