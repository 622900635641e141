#include "doctest.h"
#include "helpers.hpp"
#include "sketchridge/errors.hpp"
#include "sketchridge/polykernel.hpp"
#include "sketchridge/ridge.hpp"
#include "sketchridge/rng.hpp"

using namespace sketchridge;

namespace {

// Explicit m × d^q matrix of the whole tree, assembled from the dense leaf
// matrices and the hash tables read back through basis vectors.
oracle::Mat explicit_tree(const PolySketchPlan& plan) {
  const std::size_t q = plan.q(), m = plan.m();
  std::vector<oracle::Mat> level(2 * q);
  for (std::size_t i = 0; i < q; ++i) level[q + i] = to_mat(plan.leaf(i).densify());
  for (std::size_t k = q - 1; k >= 1; --k) {
    const TensorSketchPair& ts = plan.node(k);
    const oracle::Mat& left = level[2 * k];
    const oracle::Mat& right = level[2 * k + 1];
    oracle::Mat c1(m, oracle::Vec(m)), c2(m, oracle::Vec(m));
    for (std::size_t j = 0; j < m; ++j) {
      Vector e(m, 0.0);
      e[j] = 1.0;
      const Vector a = ts.count_sketch_first(e), b = ts.count_sketch_second(e);
      for (std::size_t i = 0; i < m; ++i) {
        c1[i][j] = a[i];
        c2[i][j] = b[i];
      }
    }
    const oracle::Mat pl = oracle::matmul(c1, left), pr = oracle::matmul(c2, right);
    const std::size_t dl = left[0].size(), dr = right[0].size();
    oracle::Mat out(m, oracle::Vec(dl * dr, 0.0));
    for (std::size_t a = 0; a < dl; ++a)
      for (std::size_t b = 0; b < dr; ++b)
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t j = 0; j < m; ++j)
            out[(i + j) % m][a * dr + b] += pl[i][a] * pr[j][b];
    level[k] = std::move(out);
  }
  return level[1];
}

// x^{⊗p} ⊗ e₁^{⊗(q−p)} flattened with the first factor most significant.
oracle::Vec padded_power(const oracle::Vec& x, std::size_t p, std::size_t q) {
  oracle::Vec e1(x.size(), 0.0);
  e1[0] = 1.0;
  oracle::Vec out = oracle::tensor_power(x, p);
  const oracle::Vec pad = oracle::tensor_power(e1, q - p);
  oracle::Vec full;
  for (double a : out)
    for (double b : pad) full.push_back(a * b);
  return full;
}

struct MeanSe {
  double mean, se;
};

MeanSe sketched_inner_product(std::size_t p, std::size_t d, std::size_t m,
                              std::size_t s, std::size_t seeds, const oracle::Vec& x,
                              const oracle::Vec& y) {
  double sum = 0, sq = 0;
  for (std::size_t k = 0; k < seeds; ++k) {
    const PolySketchPlan plan({p, m, d, s, derive_seed(0xC0FFEE + p, k)});
    const double v = oracle::dot(poly_sketch_vector(plan, x), poly_sketch_vector(plan, y));
    sum += v;
    sq += v * v;
  }
  const double n = static_cast<double>(seeds);
  const double mean = sum / n;
  return {mean, std::sqrt((sq / n - mean * mean) / (n - 1))};
}

}  // namespace

TEST_CASE("padded degree and tree shape") {
  CHECK(padded_degree(1) == 1);
  CHECK(padded_degree(3) == 4);
  CHECK(padded_degree(4) == 4);
  CHECK(padded_degree(5) == 8);
  const PolySketchPlan plan({5, 16, 3, 2, 1});
  CHECK(plan.leaf_count() == 8);
  CHECK(plan.node_count() == 7);
  CHECK_THROWS_AS(PolySketchPlan({0, 16, 3, 2, 1}), InvalidArgument);
  CHECK_THROWS_AS(PolySketchPlan({2, 4, 3, 5, 1}), InvalidArgument);
}

TEST_CASE("zero input sketches to zero") {
  for (std::size_t p : {1, 2, 3, 5}) {
    const PolySketchPlan plan({p, 32, 4, 2, 9});
    for (double v : poly_sketch_vector(plan, Vector(4, 0.0))) CHECK(v == 0.0);
  }
}

TEST_CASE("degree one is the leaf sketch") {
  const PolySketchPlan plan({1, 24, 10, 3, 5});
  const auto x = oracle::random_vec(10, 1);
  CHECK(poly_sketch_vector(plan, x) == apply_sketch(plan.leaf(0), x));
}

TEST_CASE("tree equals an explicit linear map on the padded tensor power") {
  for (std::size_t p = 1; p <= 4; ++p) {
    for (std::size_t d = 1; d <= 3; ++d) {
      const PolySketchPlan plan({p, 8, d, std::min<std::size_t>(2, 8), 100 * p + d});
      const oracle::Mat pi = explicit_tree(plan);
      const auto x = oracle::random_vec(d, p * 10 + d);
      const oracle::Vec ref = oracle::matvec(pi, padded_power(x, p, plan.q()));
      CHECK(rel_diff(poly_sketch_vector(plan, x), ref) < 1e-12);
    }
  }
}

TEST_CASE("padding with e1 leaves the kernel unchanged") {
  for (std::size_t p = 1; p <= 4; ++p)
    for (std::size_t d = 1; d <= 3; ++d) {
      const auto x = oracle::random_vec(d, 7 * p + d), y = oracle::random_vec(d, 9 * p + d);
      const double lhs = oracle::dot(padded_power(x, p, padded_degree(p)),
                                     padded_power(y, p, padded_degree(p)));
      CHECK(lhs == doctest::Approx(polynomial_kernel(x, y, p)).epsilon(1e-12));
    }
}

TEST_CASE("sketched inner products are unbiased") {
  const auto x = oracle::unit(oracle::random_vec(6, 21));
  const auto y = oracle::unit(oracle::random_vec(6, 22));
  for (std::size_t p : {1, 2, 3, 4}) {
    const auto r = sketched_inner_product(p, 6, 64, 2, 1000, x, y);
    CHECK_MESSAGE(std::abs(r.mean - polynomial_kernel(x, y, p)) <= 3 * r.se,
                  "p=" << p << " mean=" << r.mean << " se=" << r.se);
  }
}

TEST_CASE("sketched Gram matches the cubic kernel matrix") {
  const std::size_t n = 10, d = 5, m = 128, seeds = 500;
  const auto a = oracle::random_mat(n, d, 31);
  const DenseMatrix A = to_dense(a);
  std::vector<double> sum(n * n, 0.0), sq(n * n, 0.0);
  for (std::size_t k = 0; k < seeds; ++k) {
    const PolySketchPlan plan({3, m, d, 2, derive_seed(0xB0B, k)});
    const DenseMatrix G = gram_cols(poly_sketch_matrix(plan, A));
    for (std::size_t e = 0; e < n * n; ++e) {
      sum[e] += G.data()[e];
      sq[e] += G.data()[e] * G.data()[e];
    }
  }
  std::size_t within = 0, total = 0;
  double worst = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const std::size_t e = i * n + j;
      const double mean = sum[e] / seeds;
      const double se = std::sqrt((sq[e] / seeds - mean * mean) / (seeds - 1));
      const double z = std::abs(mean - polynomial_kernel(a[i], a[j], 3)) / se;
      within += z <= 3.0;
      worst = std::max(worst, z);
      ++total;
    }
  CHECK(static_cast<double>(within) >= 0.95 * static_cast<double>(total));
  CHECK(worst <= 5.0);
}

TEST_CASE("krr with degree one is sketched ridge in the dual") {
  const auto A = std::make_shared<const DenseMatrix>(to_dense(oracle::random_mat(6, 20, 41)));
  const Vector b = oracle::random_vec(6, 42);
  const PolySketchPlan plan({1, 16, 20, 2, 77});
  const KrrModel model = krr_fit(A, b, 0.7, plan);
  const Vector y = sketched_dual_solve(*A, plan.leaf(0), b, 0.7);
  CHECK(rel_diff(model.beta_tilde, y) < 1e-12);
}

TEST_CASE("krr_fit: b = 0 and argument errors") {
  const auto A = std::make_shared<const DenseMatrix>(to_dense(oracle::random_mat(4, 3, 43)));
  const PolySketchPlan plan({2, 32, 3, 2, 1});
  for (double v : krr_fit(A, Vector(4, 0.0), 1.0, plan).beta_tilde) CHECK(v == 0.0);
  CHECK_THROWS_AS(krr_fit(A, Vector(3, 1.0), 1.0, plan), DimensionError);
  CHECK_THROWS_AS(krr_fit(A, Vector(4, 1.0), 0.0, plan), InvalidArgument);
  CHECK_THROWS_AS(krr_fit(A, Vector(4, 1.0), 1.0, PolySketchPlan({2, 32, 4, 2, 1})),
                  DimensionError);
}

TEST_CASE("krr_fit approaches the explicit kernel solution") {
  const std::size_t n = 8, d = 4;
  const auto a = oracle::random_mat(n, d, 51);
  const auto b = oracle::random_vec(n, 52);
  const double lambda = 1.0;
  oracle::Mat K(n, oracle::Vec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) K[i][j] = std::pow(oracle::dot(a[i], a[j]), 2);
  for (std::size_t i = 0; i < n; ++i) K[i][i] += lambda;
  const auto beta_star = oracle::gauss_solve(K, b);
  const auto A = std::make_shared<const DenseMatrix>(to_dense(a));
  const KrrModel model = krr_fit(A, b, lambda, PolySketchPlan({2, 4096, d, 4, 53}));
  CHECK(rel_diff(model.beta_tilde, beta_star) <= 0.2);
}

TEST_CASE("krr_predict matches a direct sum") {
  const auto a = oracle::random_mat(7, 5, 61);
  KrrModel model;
  model.plan = {3, 16, 5, 2, 0};
  model.training = std::make_shared<const DenseMatrix>(to_dense(a));
  model.beta_tilde = oracle::random_vec(7, 62);
  const auto x = oracle::random_vec(5, 63);
  double ref = 0;
  for (std::size_t i = 0; i < 7; ++i) {
    double ip = 0;
    for (std::size_t k = 0; k < 5; ++k) ip += a[i][k] * x[k];
    ref += ip * ip * ip * model.beta_tilde[i];
  }
  CHECK(std::abs(krr_predict(model, x) - ref) <= 1e-12 * (1 + std::abs(ref)));

  // Zero coefficients and orthogonal queries predict 0.
  KrrModel zero = model;
  zero.beta_tilde.assign(7, 0.0);
  CHECK(krr_predict(zero, x) == 0.0);
  KrrModel ortho = model;
  ortho.training = std::make_shared<const DenseMatrix>(
      DenseMatrix::from_rows({{1, 0, 0, 0, 0}, {0, 2, 0, 0, 0}}));
  ortho.beta_tilde = {1.0, -3.0};
  CHECK(krr_predict(ortho, Vector{0, 0, 1, 1, 0}) == 0.0);
  CHECK_THROWS_AS(krr_predict(model, Vector(4, 1.0)), DimensionError);
}

TEST_CASE("AMM preset reaches its accuracy on most seeds") {
  const double eps = 0.25;
  for (std::size_t p : {1, 2, 3, 4}) {
    const auto x = oracle::unit(oracle::random_vec(6, 70 + p));
    const auto y = oracle::unit(oracle::random_vec(6, 80 + p));
    std::size_t ok = 0;
    const std::size_t seeds = 200;
    for (std::size_t k = 0; k < seeds; ++k) {
      const PolySketchPlan plan(PolySketchParams::amm_preset(p, eps, 6, 2, derive_seed(90 + p, k)));
      const double v = oracle::dot(poly_sketch_vector(plan, x), poly_sketch_vector(plan, y));
      ok += std::abs(v - polynomial_kernel(x, y, p)) <= eps;
    }
    CHECK_MESSAGE(ok >= 0.9 * seeds, "p=" << p << " ok=" << ok);
  }
}

TEST_CASE("OSE preset embeds the span of the feature map") {
  const double eps = 0.5;
  const std::size_t n = 3, d = 4;
  for (std::size_t p : {1, 2, 3}) {
    const auto a = oracle::random_mat(n, d, 100 + p);
    const std::size_t q = padded_degree(p);
    DenseMatrix phi(static_cast<std::size_t>(std::pow(d, q)), n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = padded_power(a[i], p, q);
      for (std::size_t r = 0; r < v.size(); ++r) phi(r, i) = v[r];
    }
    // Φ = U·R with U orthonormal, so ΠU = Z·R⁻¹ where Z = Π·Φ is the tree output.
    const DenseMatrix U = orthonormal_columns(phi);
    const oracle::Mat R = oracle::matmul(oracle::transpose(to_mat(U)), to_mat(phi));
    std::size_t ok = 0;
    const std::size_t seeds = 20;
    for (std::size_t k = 0; k < seeds; ++k) {
      const PolySketchPlan plan(PolySketchParams::ose_preset(p, eps, n, d, derive_seed(110 + p, k)));
      const oracle::Mat Z = to_mat(poly_sketch_matrix(plan, to_dense(a)));
      oracle::Mat W(Z.size(), oracle::Vec(n));
      for (std::size_t r = 0; r < Z.size(); ++r)
        for (std::size_t j = 0; j < n; ++j) {
          double v = Z[r][j];
          for (std::size_t l = 0; l < j; ++l) v -= W[r][l] * R[l][j];
          W[r][j] = v / R[j][j];
        }
      DenseMatrix E = gram_cols(to_dense(W));
      add_to_diagonal(E, -1.0);
      const auto eig = symmetric_eigenvalues(E);
      ok += std::max(std::abs(eig.front()), std::abs(eig.back())) <= eps;
    }
    CHECK_MESSAGE(ok >= 18, "p=" << p << " ok=" << ok);
  }
}
