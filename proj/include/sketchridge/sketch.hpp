#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sketchridge/linalg.hpp"

namespace sketchridge {

/// Oblivious sketch distributions. `Identity` is the exact embedding S = I
/// (m = d), used as a reference point; `Gaussian` is a dense verification
/// baseline with N(0, 1/m) entries.
enum class SketchFamily { CountSketch, OSNAP, Gaussian, Identity };

std::string_view to_string(SketchFamily family) noexcept;
/// Accepts "countsketch", "osnap", "gaussian", "identity" (case-insensitive).
SketchFamily parse_family(std::string_view name);

struct SketchSpec {
  SketchFamily family = SketchFamily::OSNAP;
  std::size_t m = 1;  ///< rows
  std::size_t d = 1;  ///< columns (input dimension)
  std::size_t s = 1;  ///< nonzeros per column
  std::uint64_t seed = 0;

  /// Throws InvalidArgument describing the first violated constraint.
  void validate() const;

  static SketchSpec count_sketch(std::size_t m, std::size_t d,
                                 std::uint64_t seed);
  static SketchSpec osnap(std::size_t m, std::size_t d, std::size_t s,
                          std::uint64_t seed);
  static SketchSpec gaussian(std::size_t m, std::size_t d, std::uint64_t seed);
  static SketchSpec identity(std::size_t d);

  bool operator==(const SketchSpec&) const = default;
};

/// An m×d sketch stored column by column: column j holds exactly
/// `nnz_per_column()` (row, value) pairs with distinct rows.
///
/// For CountSketch/OSNAP/Identity only the signs are stored and every value
/// is ±1/√s. The Gaussian baseline stores all m values of each column.
/// Construction is a pure function of the spec; column j depends only on
/// (seed, j).
class SparseSketch {
 public:
  explicit SparseSketch(const SketchSpec& spec);

  const SketchSpec& spec() const noexcept { return spec_; }
  std::size_t rows() const noexcept { return spec_.m; }
  std::size_t cols() const noexcept { return spec_.d; }
  std::size_t nnz_per_column() const noexcept { return per_col_; }

  std::span<const std::uint32_t> column_rows(std::size_t j) const noexcept {
    return {rows_.data() + j * per_col_, per_col_};
  }
  double value(std::size_t j, std::size_t k) const noexcept {
    const std::size_t idx = j * per_col_ + k;
    return dense_values_.empty() ? signs_[idx] * scale_ : dense_values_[idx];
  }

  /// Calls f(row, value) for every stored entry of column j.
  template <class F>
  void for_each_in_column(std::size_t j, F&& f) const {
    const std::size_t base = j * per_col_;
    if (dense_values_.empty()) {
      for (std::size_t k = 0; k < per_col_; ++k)
        f(rows_[base + k], signs_[base + k] * scale_);
    } else {
      for (std::size_t k = 0; k < per_col_; ++k)
        f(rows_[base + k], dense_values_[base + k]);
    }
  }

  DenseMatrix densify() const;

  bool operator==(const SparseSketch&) const = default;

 private:
  SketchSpec spec_;
  std::size_t per_col_ = 0;
  double scale_ = 1.0;
  std::vector<std::uint32_t> rows_;
  std::vector<std::int8_t> signs_;
  std::vector<double> dense_values_;
};

SparseSketch sketch_new(const SketchSpec& spec);

/// S·M, iterating over the nonzeros of S column by column. O(nnz(M)·s).
DenseMatrix apply_sketch(const SparseSketch& S, const DenseMatrix& M);
Vector apply_sketch(const SparseSketch& S, std::span<const double> x);

/// A·Sᵀ = (S·Aᵀ)ᵀ for A with S.cols() columns, without forming Aᵀ.
DenseMatrix apply_sketch_to_rows(const SparseSketch& S, const DenseMatrix& A);

/// acc += v·(column j of S).
void apply_sketch_to_col_update(const SparseSketch& S, std::size_t j, double v,
                                std::span<double> acc);

/// Two independent CountSketch tables (h₁, σ₁) on [d₁] and (h₂, σ₂) on [d₂],
/// both hashing into [m]. Combining u and w yields the TensorSketch of u⊗w.
class TensorSketchPair {
 public:
  TensorSketchPair(std::size_t m, std::size_t d1, std::size_t d2,
                   std::uint64_t seed);

  std::size_t m() const noexcept { return m_; }
  std::size_t d1() const noexcept { return hash1_.size(); }
  std::size_t d2() const noexcept { return hash2_.size(); }
  std::uint64_t seed() const noexcept { return seed_; }

  /// CountSketch of u (first table) or w (second table) into length m.
  Vector count_sketch_first(std::span<const double> u) const;
  Vector count_sketch_second(std::span<const double> w) const;

 private:
  std::size_t m_;
  std::uint64_t seed_;
  std::vector<std::uint32_t> hash1_, hash2_;
  std::vector<std::int8_t> sign1_, sign2_;
};

/// Length-m circular convolution of the two CountSketch images.
Vector tensorsketch_combine(const TensorSketchPair& ts,
                            std::span<const double> u,
                            std::span<const double> w);

/// Circular convolution out[k] = Σ_{i+j ≡ k (mod m)} a[i]·b[j]; direct below
/// kFftThreshold, FFT above.
inline constexpr std::size_t kFftThreshold = 256;
Vector circular_convolution(std::span<const double> a,
                            std::span<const double> b);
Vector circular_convolution_direct(std::span<const double> a,
                                   std::span<const double> b);
Vector circular_convolution_fft(std::span<const double> a,
                                std::span<const double> b);

}  // namespace sketchridge
