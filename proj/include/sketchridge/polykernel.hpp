#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "sketchridge/linalg.hpp"
#include "sketchridge/sketch.hpp"

namespace sketchridge {

struct PolySketchParams {
  std::size_t p = 2;  ///< kernel degree
  std::size_t m = 64;  ///< rows at every tree level
  std::size_t d = 1;  ///< input dimension
  std::size_t s = 1;  ///< OSNAP sparsity of the leaves
  std::uint64_t seed = 0;

  bool operator==(const PolySketchParams&) const = default;

  /// Rows for approximate matrix multiplication at accuracy eps:
  /// m = ⌈kAmmRowsPerDegree·p/ε²⌉.
  static PolySketchParams amm_preset(std::size_t p, double eps, std::size_t d,
                                     std::size_t s, std::uint64_t seed);
  /// Rows and sparsity for a subspace embedding of an n-row dataset at
  /// accuracy eps: m = ⌈kOseRowsScale·p⁴·n/ε²⌉, s = ⌈kOseSparsityScale·p⁴⌉,
  /// both capped so that s ≤ m.
  static PolySketchParams ose_preset(std::size_t p, double eps, std::size_t n,
                                     std::size_t d, std::uint64_t seed);
};

// Empirically calibrated (see tests/test_polykernel.cpp).
inline constexpr double kAmmRowsPerDegree = 6.0;
inline constexpr double kOseRowsScale = 6.0;
inline constexpr double kOseSparsityScale = 2.0;

/// Binary-tree sketch for φ(x) = x^{⊗p}. There are q = 2^⌈log₂p⌉ OSNAP
/// leaves (d → m) and q − 1 TensorSketch nodes (m, m → m) in heap order:
/// node 1 is the root, node k has children 2k and 2k+1, leaves are nodes
/// q … 2q−1. Leaves beyond p sketch e₁ instead of x, which leaves ⟨·,·⟩^p
/// unchanged. Every node draws its randomness from (seed, node index).
class PolySketchPlan {
 public:
  explicit PolySketchPlan(const PolySketchParams& params);

  const PolySketchParams& params() const noexcept { return params_; }
  std::size_t p() const noexcept { return params_.p; }
  std::size_t q() const noexcept { return q_; }
  std::size_t m() const noexcept { return params_.m; }
  std::size_t d() const noexcept { return params_.d; }

  /// Leaf i, 0 ≤ i < q.
  const SparseSketch& leaf(std::size_t i) const { return leaves_.at(i); }
  /// Internal node k in heap numbering, 1 ≤ k < q.
  const TensorSketchPair& node(std::size_t k) const { return nodes_.at(k - 1); }

  std::size_t leaf_count() const noexcept { return leaves_.size(); }
  std::size_t node_count() const noexcept { return nodes_.size(); }

 private:
  PolySketchParams params_;
  std::size_t q_ = 1;
  std::vector<SparseSketch> leaves_;
  std::vector<TensorSketchPair> nodes_;
};

/// Smallest power of two ≥ p.
std::size_t padded_degree(std::size_t p);

/// Π^p·φ(x), length m.
Vector poly_sketch_vector(const PolySketchPlan& plan, std::span<const double> x);

/// Π^p·φ(A)ᵀ (m×n): column i sketches row i of A.
DenseMatrix poly_sketch_matrix(const PolySketchPlan& plan, const DenseMatrix& A);

/// ⟨x, y⟩^p.
double polynomial_kernel(std::span<const double> x, std::span<const double> y,
                         std::size_t p);

struct KrrModel {
  Vector beta_tilde;
  PolySketchParams plan;
  double lambda = 1.0;
  std::shared_ptr<const DenseMatrix> training;
};

/// β̃ = (ZᵀZ + λI)⁻¹b with Z = Π^p·φ(A)ᵀ. Neither φ(A) nor the kernel matrix
/// is formed.
KrrModel krr_fit(std::shared_ptr<const DenseMatrix> A, std::span<const double> b,
                 double lambda, const PolySketchPlan& plan);

/// Σᵢ ⟨aᵢ, x⟩^p·β̃ᵢ with the exact kernel.
double krr_predict(const KrrModel& model, std::span<const double> x);

}  // namespace sketchridge
