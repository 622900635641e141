#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>

#include "sketchridge/linalg.hpp"
#include "sketchridge/sketch.hpp"

namespace sketchridge {

/// A[i][j] += v.
struct TurnstileUpdate {
  std::size_t i = 0;
  std::size_t j = 0;
  double v = 0.0;

  bool operator==(const TurnstileUpdate&) const = default;
};

/// Pass-1 state of the two-pass streaming solver: maintains S·Aᵀ under
/// turnstile updates in O(s) per update. Storage is O(m·n) plus the sketch,
/// independent of the stream length.
class StreamState {
 public:
  /// `spec.d` is the column count of A, `n` its row count.
  StreamState(const SketchSpec& spec, std::size_t n);

  /// Throws StreamError (carrying the stream position) on out-of-range
  /// indices or a non-finite delta; the state is left unchanged.
  void ingest(const TurnstileUpdate& u);

  /// y = ((SAᵀ)ᵀ(SAᵀ) + λI)⁻¹b.
  Vector finalize_pass1(std::span<const double> b, double lambda) const;

  /// The running S·Aᵀ (m×n).
  DenseMatrix sketched() const;

  const SparseSketch& sketch() const noexcept { return sketch_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t d() const noexcept { return sketch_.cols(); }
  std::size_t update_count() const noexcept { return updates_; }

  /// Bytes held by the accumulator and the sketch tables.
  std::size_t memory_bytes() const noexcept;

 private:
  SparseSketch sketch_;
  std::size_t n_;
  std::size_t updates_ = 0;
  DenseMatrix acc_;  // n×m, row i is (S·Aᵀ)[:, i]
};

/// x_acc[j] += v·y[i]. After a full second pass x_acc = Aᵀy.
void stream_pass2_accumulate(std::span<double> x_acc, const TurnstileUpdate& u,
                             std::span<const double> y);

/// Parses "i j v" lines; blank lines and '#' comments are skipped. Calls
/// f(update, line_number) for each update and returns the count. Malformed
/// lines throw ParseError with the 1-based line number.
std::size_t for_each_update(
    std::istream& in,
    const std::function<void(const TurnstileUpdate&, std::size_t)>& f);

struct TwoPassResult {
  Vector y;
  Vector x_tilde;
  std::size_t updates = 0;
  double pass1_seconds = 0.0;
  double pass2_seconds = 0.0;
};

/// Reads the update file twice: pass 1 builds S·Aᵀ and solves for y, pass 2
/// accumulates x̃ = Aᵀy.
TwoPassResult stream_solve_file(const std::string& path, const SketchSpec& spec,
                                std::span<const double> b, double lambda);

}  // namespace sketchridge
