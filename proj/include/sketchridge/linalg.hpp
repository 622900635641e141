#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace sketchridge {

using Vector = std::vector<double>;

/// Row-major dense real matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix from_rows(
      std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t i, std::size_t j) noexcept {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * cols_ + j];
  }

  std::span<double> row(std::size_t i) noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

std::string shape_string(const DenseMatrix& M);

/// Throws DimensionError unless every entry is finite.
void require_finite(std::span<const double> values, const char* what);

DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B);
Vector matvec(const DenseMatrix& A, std::span<const double> v);
/// Aᵀ·v without forming the transpose.
Vector matvec_transposed(const DenseMatrix& A, std::span<const double> v);
DenseMatrix transpose(const DenseMatrix& A);

/// M·Mᵀ. The result is exactly symmetric.
DenseMatrix gram_rows(const DenseMatrix& M);
/// Mᵀ·M. The result is exactly symmetric.
DenseMatrix gram_cols(const DenseMatrix& M);

void add_to_diagonal(DenseMatrix& M, double shift);

double dot(std::span<const double> a, std::span<const double> b);
double l2_norm(std::span<const double> v);
double frobenius_norm(const DenseMatrix& A);
double max_abs(const DenseMatrix& A);

/// Lower-triangular Cholesky factor of an SPD matrix.
class Cholesky {
 public:
  /// Throws NotPositiveDefinite carrying the failing pivot index.
  explicit Cholesky(const DenseMatrix& M);

  Vector solve(std::span<const double> rhs) const;
  std::size_t dim() const noexcept { return factor_.rows(); }

 private:
  DenseMatrix factor_;
};

/// Solves M·y = rhs for symmetric positive definite M.
Vector spd_solve(const DenseMatrix& M, std::span<const double> rhs);

struct SpectralNormEstimate {
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

inline constexpr std::uint64_t kSpectralNormSeed = 0x5EED;

/// Largest singular value by power iteration on A·Aᵀ (applied implicitly).
/// Stops when successive estimates agree to `tol` relative.
SpectralNormEstimate spectral_norm(const DenseMatrix& A, double tol = 1e-6,
                                   std::size_t max_iter = 1000,
                                   std::uint64_t seed = kSpectralNormSeed);

/// Eigenvalues of a symmetric matrix in ascending order (cyclic Jacobi).
std::vector<double> symmetric_eigenvalues(const DenseMatrix& M);

/// Thin Q factor of a Householder QR of G (rows >= cols), with columns signed
/// so that R has a positive diagonal.
DenseMatrix orthonormal_columns(const DenseMatrix& G);

/// i.i.d. standard normal entries.
DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols,
                            std::uint64_t seed);

}  // namespace sketchridge
