#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "sketchridge/linalg.hpp"
#include "sketchridge/sketch.hpp"

namespace sketchridge {

/// ‖MᵀSᵀSN − MᵀN‖_F / (‖M‖_F‖N‖_F) for one sketch.
struct AmmReport {
  double epsilon_hat = 0.0;
  std::size_t m = 0;
  std::size_t s = 0;
  std::uint64_t seed = 0;
};

AmmReport amm_error(const SparseSketch& S, const DenseMatrix& M,
                    const DenseMatrix& N);

/// E = VᵀSᵀSV − I for orthonormal V.
struct DistortionReport {
  double distortion = 0.0;      ///< ‖E‖₂
  double frobenius_error = 0.0;  ///< ‖E‖_F
  double sketched_norm = 0.0;    ///< ‖SV‖₂ = √(1 + λ_max(E))
};

DistortionReport subspace_distortion(const SparseSketch& S, const DenseMatrix& V);

struct JlMoments {
  double mean = 0.0;       ///< sample mean of ‖Sx‖²
  double l2_moment = 0.0;  ///< √(mean of (‖Sx‖² − 1)²)
  double std_err = 0.0;    ///< standard error of `mean`
  double variance = 0.0;   ///< unbiased sample variance of ‖Sx‖²
  double q50 = 0.0;        ///< median of |‖Sx‖² − 1|
  double q90 = 0.0;        ///< 90th percentile of |‖Sx‖² − 1|
};

/// Monte Carlo over `trials` fresh seeds derived from spec.seed.
JlMoments jl_moment_estimate(const SketchSpec& spec, std::span<const double> x,
                             std::size_t trials);

/// |‖SA‖²_F − ‖A‖²_F| / ‖A‖²_F for `trials` fresh seeds derived from spec.seed.
std::vector<double> frobenius_relative_errors(const SketchSpec& spec,
                                              const DenseMatrix& A,
                                              std::size_t trials);

/// Fraction of trials with ‖SA‖²_F ∈ [(1−ε)‖A‖²_F, (1+ε)‖A‖²_F].
/// Requires a CountSketch spec with m ≥ 200/ε².
double frobenius_preservation_check(const SketchSpec& spec, const DenseMatrix& A,
                                    double epsilon, std::size_t trials);

struct SweepPoint {
  std::size_t m = 0;
  double q50 = 0.0;
  double q90 = 0.0;
  std::size_t trials = 0;
};

struct SweepCurve {
  SketchFamily family = SketchFamily::CountSketch;
  std::size_t s = 1;
  std::uint64_t seed_base = 0;
  std::vector<SweepPoint> points;
};

struct ProbeConfig {
  std::size_t n = 4;
  double epsilon = 0.1;
  std::vector<std::size_t> m_grid;
  std::size_t trials = 100;
  std::size_t d = 0;
  SketchFamily family = SketchFamily::CountSketch;
  std::size_t s = 1;
  std::uint64_t seed = 0;
};

/// For each m, ‖AᵀSᵀSA − I‖_F / n over random d×n orthonormal A (QR of a
/// Gaussian) and fresh sketches; reports the median and 90th percentile.
/// Requires ε ≤ 0.5/√n, d ≥ 4·max(m), a strictly increasing grid and at least
/// 100 trials.
SweepCurve amm_lowerbound_probe(const ProbeConfig& config);

/// Least-squares slope of log(q50) against log(m).
double loglog_slope(const SweepCurve& curve);

/// Type-7 (linear interpolation) quantile of unsorted samples.
double quantile(std::vector<double> samples, double level);

/// Worker count from SKETCHRIDGE_THREADS (default 1).
std::size_t configured_threads();

/// Header comment, column header and one row per point:
/// m,s,seed_base,trials,q50,q90
void write_sweep_csv(std::ostream& out, const SweepCurve& curve);

}  // namespace sketchridge
