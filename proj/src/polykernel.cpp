#include "sketchridge/polykernel.hpp"

#include <algorithm>
#include <cmath>

#include "sketchridge/errors.hpp"
#include "sketchridge/rng.hpp"

namespace sketchridge {

std::size_t padded_degree(std::size_t p) {
  std::size_t q = 1;
  while (q < p) q <<= 1;
  return q;
}

PolySketchParams PolySketchParams::amm_preset(std::size_t p, double eps,
                                              std::size_t d, std::size_t s,
                                              std::uint64_t seed) {
  if (!(eps > 0.0)) throw InvalidArgument("amm_preset: eps must be > 0");
  const auto m = static_cast<std::size_t>(
      std::ceil(kAmmRowsPerDegree * static_cast<double>(p) / (eps * eps)));
  return {p, m, d, std::min(s, m), seed};
}

PolySketchParams PolySketchParams::ose_preset(std::size_t p, double eps,
                                              std::size_t n, std::size_t d,
                                              std::uint64_t seed) {
  if (!(eps > 0.0)) throw InvalidArgument("ose_preset: eps must be > 0");
  const double p4 = std::pow(static_cast<double>(p), 4.0);
  const auto m = static_cast<std::size_t>(
      std::ceil(kOseRowsScale * p4 * static_cast<double>(n) / (eps * eps)));
  const auto s = static_cast<std::size_t>(std::ceil(kOseSparsityScale * p4));
  return {p, m, d, std::min(std::max<std::size_t>(s, 1), m), seed};
}

PolySketchPlan::PolySketchPlan(const PolySketchParams& params)
    : params_(params), q_(padded_degree(params.p)) {
  if (params_.p < 1) throw InvalidArgument("polynomial degree must be >= 1");
  if (params_.m < 1 || params_.d < 1) {
    throw InvalidArgument("poly sketch needs m, d >= 1");
  }
  leaves_.reserve(q_);
  for (std::size_t i = 0; i < q_; ++i) {
    leaves_.emplace_back(SketchSpec::osnap(params_.m, params_.d, params_.s,
                                           derive_seed(params_.seed, q_ + i)));
  }
  nodes_.reserve(q_ - 1);
  for (std::size_t k = 1; k < q_; ++k) {
    nodes_.emplace_back(params_.m, params_.m, params_.m,
                        derive_seed(params_.seed, k));
  }
}

Vector poly_sketch_vector(const PolySketchPlan& plan, std::span<const double> x) {
  if (x.size() != plan.d()) {
    throw DimensionError("poly_sketch_vector: input of length " +
                         std::to_string(x.size()) + ", plan expects " +
                         std::to_string(plan.d()));
  }
  const std::size_t q = plan.q();
  std::vector<Vector> level(2 * q);
  Vector e1;
  for (std::size_t i = 0; i < q; ++i) {
    if (i < plan.p()) {
      level[q + i] = apply_sketch(plan.leaf(i), x);
    } else {
      if (e1.empty()) {
        e1.assign(plan.d(), 0.0);
        e1[0] = 1.0;
      }
      level[q + i] = apply_sketch(plan.leaf(i), e1);
    }
  }
  for (std::size_t k = q - 1; k >= 1; --k) {
    level[k] = tensorsketch_combine(plan.node(k), level[2 * k], level[2 * k + 1]);
    level[2 * k].clear();
    level[2 * k + 1].clear();
  }
  return std::move(level[1]);
}

namespace {

// Row i holds the sketch of row i of A, i.e. (Π^p·φ(A)ᵀ)ᵀ.
DenseMatrix poly_sketch_rows(const PolySketchPlan& plan, const DenseMatrix& A) {
  if (A.cols() != plan.d()) {
    throw DimensionError("poly_sketch_matrix: " + shape_string(A) +
                         " against plan with d = " + std::to_string(plan.d()));
  }
  DenseMatrix out(A.rows(), plan.m());
  for (std::size_t i = 0; i < A.rows(); ++i) {
    const Vector z = poly_sketch_vector(plan, A.row(i));
    std::copy(z.begin(), z.end(), out.row(i).begin());
  }
  return out;
}

}  // namespace

DenseMatrix poly_sketch_matrix(const PolySketchPlan& plan, const DenseMatrix& A) {
  return transpose(poly_sketch_rows(plan, A));
}

double polynomial_kernel(std::span<const double> x, std::span<const double> y,
                         std::size_t p) {
  const double base = dot(x, y);
  double out = 1.0;
  for (std::size_t k = 0; k < p; ++k) out *= base;
  return out;
}

KrrModel krr_fit(std::shared_ptr<const DenseMatrix> A, std::span<const double> b,
                 double lambda, const PolySketchPlan& plan) {
  if (!A) throw InvalidArgument("krr_fit: no training matrix");
  if (b.size() != A->rows()) {
    throw DimensionError("krr_fit: " + shape_string(*A) + " with " +
                         std::to_string(b.size()) + " targets");
  }
  if (!(lambda > 0.0)) throw InvalidArgument("krr_fit: lambda must be > 0");

  KrrModel model;
  model.plan = plan.params();
  model.lambda = lambda;
  DenseMatrix G = gram_rows(poly_sketch_rows(plan, *A));
  add_to_diagonal(G, lambda);
  model.beta_tilde = spd_solve(G, b);
  model.training = std::move(A);
  return model;
}

double krr_predict(const KrrModel& model, std::span<const double> x) {
  if (!model.training) throw InvalidArgument("krr_predict: model has no data");
  const DenseMatrix& A = *model.training;
  if (x.size() != A.cols()) {
    throw DimensionError("krr_predict: query of length " +
                         std::to_string(x.size()) + ", training d = " +
                         std::to_string(A.cols()));
  }
  if (model.beta_tilde.size() != A.rows()) {
    throw DimensionError("krr_predict: beta has wrong length");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < A.rows(); ++i) {
    sum += polynomial_kernel(A.row(i), x, model.plan.p) * model.beta_tilde[i];
  }
  return sum;
}

}  // namespace sketchridge
