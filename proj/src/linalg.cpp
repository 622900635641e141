#include "sketchridge/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sketchridge/errors.hpp"
#include "sketchridge/rng.hpp"

namespace sketchridge {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw DimensionError("matrix data has " + std::to_string(data_.size()) +
                         " entries, expected " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix I(n, n);
  for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

DenseMatrix DenseMatrix::from_rows(
    std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.begin()->size() : 0;
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw DimensionError("ragged row list");
    data.insert(data.end(), row.begin(), row.end());
  }
  return DenseMatrix(r, c, std::move(data));
}

std::string shape_string(const DenseMatrix& M) {
  return std::to_string(M.rows()) + "x" + std::to_string(M.cols());
}

void require_finite(std::span<const double> values, const char* what) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k])) {
      throw DimensionError(std::string(what) + " has a non-finite entry at " +
                           std::to_string(k));
    }
  }
}

DenseMatrix matmul(const DenseMatrix& A, const DenseMatrix& B) {
  if (A.cols() != B.rows()) {
    throw DimensionError("matmul: " + shape_string(A) + " times " +
                         shape_string(B));
  }
  DenseMatrix C(A.rows(), B.cols());
  for (std::size_t i = 0; i < A.rows(); ++i) {
    auto out = C.row(i);
    for (std::size_t j = 0; j < A.cols(); ++j) {
      const double a = A(i, j);
      if (a == 0.0) continue;
      const auto b = B.row(j);
      for (std::size_t k = 0; k < b.size(); ++k) out[k] += a * b[k];
    }
  }
  return C;
}

Vector matvec(const DenseMatrix& A, std::span<const double> v) {
  if (A.cols() != v.size()) {
    throw DimensionError("matvec: " + shape_string(A) + " times vector of " +
                         std::to_string(v.size()));
  }
  Vector out(A.rows());
  for (std::size_t i = 0; i < A.rows(); ++i) out[i] = dot(A.row(i), v);
  return out;
}

Vector matvec_transposed(const DenseMatrix& A, std::span<const double> v) {
  if (A.rows() != v.size()) {
    throw DimensionError("matvec_transposed: (" + shape_string(A) +
                         ")^T times vector of " + std::to_string(v.size()));
  }
  Vector out(A.cols(), 0.0);
  for (std::size_t i = 0; i < A.rows(); ++i) {
    const double s = v[i];
    if (s == 0.0) continue;
    const auto row = A.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) out[j] += s * row[j];
  }
  return out;
}

DenseMatrix transpose(const DenseMatrix& A) {
  DenseMatrix T(A.cols(), A.rows());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) T(j, i) = A(i, j);
  return T;
}

namespace {

// Four independent partial sums; fixed order, so results are reproducible.
double dot_unrolled(const double* a, const double* b, std::size_t n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    s0 += a[k] * b[k];
    s1 += a[k + 1] * b[k + 1];
    s2 += a[k + 2] * b[k + 2];
    s3 += a[k + 3] * b[k + 3];
  }
  for (; k < n; ++k) s0 += a[k] * b[k];
  return (s0 + s1) + (s2 + s3);
}

constexpr std::size_t kGramChunk = 256;

}  // namespace

DenseMatrix gram_rows(const DenseMatrix& M) {
  const std::size_t n = M.rows();
  const std::size_t len = M.cols();
  DenseMatrix G(n, n);
  // Column chunks keep the active slice of every row cache-resident.
  for (std::size_t c0 = 0; c0 < len; c0 += kGramChunk) {
    const std::size_t width = std::min(kGramChunk, len - c0);
    for (std::size_t i = 0; i < n; ++i) {
      const double* ri = M.row(i).data() + c0;
      for (std::size_t k = i; k < n; ++k) {
        G(i, k) += dot_unrolled(ri, M.row(k).data() + c0, width);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < i; ++k) G(i, k) = G(k, i);
  return G;
}

DenseMatrix gram_cols(const DenseMatrix& M) {
  const std::size_t n = M.cols();
  DenseMatrix G(n, n);
  for (std::size_t r = 0; r < M.rows(); ++r) {
    const auto row = M.row(r);
    for (std::size_t i = 0; i < n; ++i) {
      const double a = row[i];
      if (a == 0.0) continue;
      auto out = G.row(i);
      for (std::size_t k = i; k < n; ++k) out[k] += a * row[k];
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < i; ++k) G(i, k) = G(k, i);
  return G;
}

void add_to_diagonal(DenseMatrix& M, double shift) {
  const std::size_t n = std::min(M.rows(), M.cols());
  for (std::size_t i = 0; i < n; ++i) M(i, i) += shift;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionError("dot: lengths " + std::to_string(a.size()) + " and " +
                         std::to_string(b.size()));
  }
  return dot_unrolled(a.data(), b.data(), a.size());
}

double l2_norm(std::span<const double> v) {
  // Scaled to avoid overflow on large entries.
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (double x : v) {
    const double t = x / scale;
    sum += t * t;
  }
  return scale * std::sqrt(sum);
}

double frobenius_norm(const DenseMatrix& A) { return l2_norm(A.data()); }

double max_abs(const DenseMatrix& A) {
  double m = 0.0;
  for (double x : A.data()) m = std::max(m, std::abs(x));
  return m;
}

Cholesky::Cholesky(const DenseMatrix& M) : factor_(M.rows(), M.rows()) {
  if (M.rows() != M.cols()) {
    throw DimensionError("Cholesky of non-square " + shape_string(M));
  }
  const std::size_t n = M.rows();
  DenseMatrix& L = factor_;
  for (std::size_t j = 0; j < n; ++j) {
    const double* lj = L.row(j).data();
    double pivot = M(j, j) - dot_unrolled(lj, lj, j);
    if (!(pivot > 0.0)) throw NotPositiveDefinite(j);
    const double diag = std::sqrt(pivot);
    L(j, j) = diag;
    for (std::size_t i = j + 1; i < n; ++i) {
      const double* li = L.row(i).data();
      L(i, j) = (M(i, j) - dot_unrolled(li, lj, j)) / diag;
    }
  }
}

Vector Cholesky::solve(std::span<const double> rhs) const {
  const std::size_t n = dim();
  if (rhs.size() != n) {
    throw DimensionError("Cholesky solve: rhs of " +
                         std::to_string(rhs.size()) + " for order " +
                         std::to_string(n));
  }
  const DenseMatrix& L = factor_;
  Vector y(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = (y[i] - dot_unrolled(L.row(i).data(), y.data(), i)) / L(i, i);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = y[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= L(k, ii) * y[k];
    y[ii] = s / L(ii, ii);
  }
  return y;
}

Vector spd_solve(const DenseMatrix& M, std::span<const double> rhs) {
  if (M.rows() != M.cols() || M.rows() != rhs.size()) {
    throw DimensionError("spd_solve: matrix " + shape_string(M) +
                         " with rhs of " + std::to_string(rhs.size()));
  }
  const double tol = 1e-10 * max_abs(M);
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t k = 0; k < i; ++k)
      if (std::abs(M(i, k) - M(k, i)) > tol) {
        throw InvalidArgument("spd_solve: matrix is not symmetric at (" +
                              std::to_string(i) + ", " + std::to_string(k) +
                              ")");
      }
  Vector y = Cholesky(M).solve(rhs);
  require_finite(y, "spd_solve result");
  return y;
}

SpectralNormEstimate spectral_norm(const DenseMatrix& A, double tol,
                                   std::size_t max_iter, std::uint64_t seed) {
  if (!(tol > 0.0)) throw InvalidArgument("spectral_norm: tol must be > 0");
  if (A.rows() == 0 || A.cols() == 0 || max_abs(A) == 0.0) {
    throw InvalidArgument("spectral_norm: matrix is zero");
  }
  CounterRng rng(seed);
  Vector v(A.rows());
  for (double& x : v) x = rng.normal();
  double norm = l2_norm(v);
  for (double& x : v) x /= norm;

  SpectralNormEstimate est;
  double previous = 0.0;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    const Vector w = matvec_transposed(A, v);
    Vector u = matvec(A, w);
    // Rayleigh quotient vᵀAAᵀv = ‖Aᵀv‖².
    const double sigma = l2_norm(w);
    est.value = std::max(est.value, sigma);
    est.iterations = it;
    if (it > 1 && std::abs(sigma - previous) <= tol * sigma) {
      est.converged = true;
      break;
    }
    previous = sigma;
    norm = l2_norm(u);
    if (norm == 0.0) {
      // v fell into the null space of Aᵀ; restart from a fresh direction.
      for (double& x : v) x = rng.normal();
      norm = l2_norm(v);
      for (double& x : v) x /= norm;
      continue;
    }
    for (std::size_t i = 0; i < u.size(); ++i) v[i] = u[i] / norm;
  }
  return est;
}

std::vector<double> symmetric_eigenvalues(const DenseMatrix& M) {
  if (M.rows() != M.cols()) {
    throw DimensionError("symmetric_eigenvalues of non-square " +
                         shape_string(M));
  }
  const std::size_t n = M.rows();
  DenseMatrix a = M;
  const double total = frobenius_norm(a);
  for (int sweep = 0; sweep < 100 && total > 0.0; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(2.0 * off) <= 1e-15 * total) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

DenseMatrix orthonormal_columns(const DenseMatrix& G) {
  const std::size_t d = G.rows();
  const std::size_t n = G.cols();
  if (d < n) {
    throw DimensionError("orthonormal_columns needs rows >= cols, got " +
                         shape_string(G));
  }
  // Column-major working copy; reflector k lives in work[k][k..d).
  std::vector<Vector> work(n, Vector(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < n; ++j) work[j][i] = G(i, j);

  std::vector<double> beta(n, 0.0);
  std::vector<double> r_sign(n, 1.0);
  for (std::size_t k = 0; k < n; ++k) {
    Vector& x = work[k];
    double norm = 0.0;
    for (std::size_t i = k; i < d; ++i) norm += x[i] * x[i];
    norm = std::sqrt(norm);
    if (norm == 0.0) {
      throw InvalidArgument("orthonormal_columns: rank-deficient input");
    }
    const double alpha = x[k] >= 0.0 ? -norm : norm;  // R(k,k)
    r_sign[k] = alpha > 0.0 ? 1.0 : -1.0;
    x[k] -= alpha;
    double vnorm2 = 0.0;
    for (std::size_t i = k; i < d; ++i) vnorm2 += x[i] * x[i];
    beta[k] = 2.0 / vnorm2;
    for (std::size_t j = k + 1; j < n; ++j) {
      Vector& y = work[j];
      double s = 0.0;
      for (std::size_t i = k; i < d; ++i) s += x[i] * y[i];
      s *= beta[k];
      for (std::size_t i = k; i < d; ++i) y[i] -= s * x[i];
    }
  }

  std::vector<Vector> q(n, Vector(d, 0.0));
  for (std::size_t j = 0; j < n; ++j) q[j][j] = 1.0;
  for (std::size_t k = n; k-- > 0;) {
    const Vector& v = work[k];
    for (std::size_t j = 0; j < n; ++j) {
      Vector& y = q[j];
      double s = 0.0;
      for (std::size_t i = k; i < d; ++i) s += v[i] * y[i];
      s *= beta[k];
      for (std::size_t i = k; i < d; ++i) y[i] -= s * v[i];
    }
  }

  DenseMatrix Q(d, n);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < n; ++j) Q(i, j) = r_sign[j] * q[j][i];
  return Q;
}

DenseMatrix gaussian_matrix(std::size_t rows, std::size_t cols,
                            std::uint64_t seed) {
  DenseMatrix G(rows, cols);
  CounterRng rng(seed);
  for (double& x : G.data()) x = rng.normal();
  return G;
}

}  // namespace sketchridge
