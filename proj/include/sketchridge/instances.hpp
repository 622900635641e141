#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sketchridge/ridge.hpp"

namespace sketchridge {

struct GaussianInstance {
  RidgeProblem problem;
  double sigma = 0.0;           ///< measured ‖A‖₂
  double achieved_ratio = 0.0;  ///< σ²/λ with the measured σ
};

/// A and b with i.i.d. standard normal entries; λ = σ̂²/target_ratio where σ̂
/// comes from power iteration.
GaussianInstance gen_gaussian_instance(std::size_t n, std::size_t d,
                                       std::uint64_t seed, double target_ratio);

/// The 2×d problem with rows x, y ∈ {±1}^d and b = (1, −1), whose optimal
/// cost is 2λ/(λ + 2N) for N the Hamming distance of x and y.
struct GapHammingInstance {
  RidgeProblem problem;
  std::size_t hamming = 0;
  double opt_closed_form = 0.0;
};

GapHammingInstance gen_gap_hamming(std::span<const double> x,
                                   std::span<const double> y, double lambda);

/// 2λ/(λ + 2N).
double gap_hamming_opt(std::size_t hamming, double lambda);

/// Uniform random ±1 vector.
std::vector<double> random_sign_vector(std::size_t d, std::uint64_t seed);

}  // namespace sketchridge
