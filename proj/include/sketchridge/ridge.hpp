#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sketchridge/linalg.hpp"
#include "sketchridge/sketch.hpp"

namespace sketchridge {

/// min_x ‖Ax − b‖² + λ‖x‖² with A ∈ R^{n×d}, typically n ≤ d.
struct RidgeProblem {
  DenseMatrix A;
  Vector b;
  double lambda = 1.0;

  std::size_t n() const noexcept { return A.rows(); }
  std::size_t d() const noexcept { return A.cols(); }

  /// Throws on λ ≤ 0, zero A, inconsistent shapes or non-finite data.
  void validate() const;
};

struct ProblemStats {
  double sigma = 0.0;  ///< ‖A‖₂
  double ratio = 0.0;  ///< σ²/λ
  double opt = 0.0;    ///< optimal cost
};

ProblemStats problem_stats(const RidgeProblem& p);

/// ‖Ax − b‖² + λ‖x‖².
double cost(const RidgeProblem& p, std::span<const double> x);

/// x* = Aᵀ(AAᵀ + λI)⁻¹b.
Vector ridge_exact(const RidgeProblem& p);

/// (AAᵀ + λI)⁻¹·rhs.
Vector exact_dual_solve(const DenseMatrix& A, std::span<const double> rhs,
                        double lambda);

/// (A SᵀS Aᵀ + λI)⁻¹·rhs, with the Gram formed as (SAᵀ)ᵀ(SAᵀ).
Vector sketched_dual_solve(const DenseMatrix& A, const SparseSketch& S,
                           std::span<const double> rhs, double lambda);

/// x̃ = Aᵀ(A SᵀS Aᵀ + λI)⁻¹b for a fixed sketch.
Vector one_shot_solution(const RidgeProblem& p, const SparseSketch& S);

/// Produces the sketch for iteration j (1-based). Each call must yield an
/// independent sketch with a distinct seed.
using SketchFactory = std::function<SparseSketch(std::size_t iteration)>;

/// Factory deriving a fresh seed per iteration from `base.seed`.
SketchFactory fresh_sketches(const SketchSpec& base);

/// Seed used by fresh_sketches for iteration j.
std::uint64_t iteration_seed(std::uint64_t base_seed, std::size_t iteration);

struct IterateRecord {
  Vector rhs;      ///< b^(j)
  Vector y;        ///< y^(j)
  Vector x_tilde;  ///< x̃^(j)
  std::uint64_t seed = 0;
};

struct IterativeOptions {
  /// Exact solution x*; when present, the relative error of every partial
  /// sum is recorded.
  std::optional<Vector> reference;
  bool keep_iterates = false;
};

struct SolveReport {
  Vector x_hat;
  std::size_t iterations = 0;
  double cost = 0.0;
  std::optional<std::vector<double>> rel_residuals;
  std::vector<std::uint64_t> sketch_seeds;
  std::vector<IterateRecord> iterates;  ///< filled when keep_iterates
  double wall_time_seconds = 0.0;
};

/// Iterative sketched ridge regression with a fresh sketch per iteration:
///
///   b⁽ʲ⁾ = b⁽ʲ⁻¹⁾ − λy⁽ʲ⁻¹⁾ − Ax̃⁽ʲ⁻¹⁾
///   y⁽ʲ⁾ = (A SⱼᵀSⱼ Aᵀ + λI)⁻¹ b⁽ʲ⁾,   x̃⁽ʲ⁾ = Aᵀy⁽ʲ⁾
///   x̂ = Σⱼ x̃⁽ʲ⁾
///
/// Each step solves for the remaining correction x* − Σ_{i<j} x̃⁽ⁱ⁾, so with
/// sketches that are 1/2-subspace embeddings and √(ε/4n)-AMM the error
/// contracts by √ε per iteration. b = 0 returns x̂ = 0 without sketching.
SolveReport ridge_sketched_iterative(const RidgeProblem& p, std::size_t t,
                                     const SketchFactory& make_sketch,
                                     const IterativeOptions& options = {});

}  // namespace sketchridge
