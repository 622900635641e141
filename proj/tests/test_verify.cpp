#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "sketchridge/errors.hpp"
#include "sketchridge/rng.hpp"
#include "sketchridge/verify.hpp"

using namespace sketchridge;

namespace {

DenseMatrix unit_frobenius(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  DenseMatrix M = to_dense(oracle::random_mat(rows, cols, seed));
  const double f = frobenius_norm(M);
  for (double& v : M.data()) v /= f;
  return M;
}

}  // namespace

TEST_CASE("amm_error: identity and single-column reduction") {
  const DenseMatrix M = to_dense(oracle::random_mat(12, 3, 1));
  const DenseMatrix N = to_dense(oracle::random_mat(12, 2, 2));
  CHECK(amm_error(SparseSketch(SketchSpec::identity(12)), M, N).epsilon_hat < 1e-15);

  const auto x = oracle::unit(oracle::random_vec(40, 3));
  const DenseMatrix X = to_dense(oracle::transpose({x}));
  const SparseSketch S(SketchSpec::osnap(10, 40, 2, 4));
  const double sx = oracle::dot(apply_sketch(S, x), apply_sketch(S, x));
  CHECK(amm_error(S, X, X).epsilon_hat == doctest::Approx(std::abs(sx - 1.0)).epsilon(1e-12));

  CHECK_THROWS_AS(amm_error(S, DenseMatrix(40, 1), X), InvalidArgument);
  CHECK_THROWS_AS(amm_error(S, DenseMatrix(39, 1, 1.0), X), DimensionError);
}

TEST_CASE("amm_error: CountSketch with 20000 rows") {
  const DenseMatrix M = unit_frobenius(500, 3, 5), N = unit_frobenius(500, 3, 6);
  int ok = 0;
  for (std::uint64_t k = 0; k < 100; ++k)
    ok += amm_error(SparseSketch(SketchSpec::count_sketch(20000, 500, derive_seed(8, k))), M, N)
              .epsilon_hat <= 0.05;
  CHECK(ok >= 95);
}

TEST_CASE("subspace_distortion: identity, single column, spectral below Frobenius") {
  const DenseMatrix V = orthonormal_columns(to_dense(oracle::random_mat(60, 4, 9)));
  CHECK(subspace_distortion(SparseSketch(SketchSpec::identity(60)), V).distortion < 1e-12);

  const DenseMatrix v = orthonormal_columns(to_dense(oracle::random_mat(60, 1, 10)));
  const SparseSketch S(SketchSpec::osnap(16, 60, 2, 11));
  const Vector sv = apply_sketch(S, v.data());
  CHECK(subspace_distortion(S, v).distortion ==
        doctest::Approx(std::abs(oracle::dot(sv, sv) - 1.0)).epsilon(1e-10));

  for (std::uint64_t k = 0; k < 20; ++k) {
    const auto r = subspace_distortion(SparseSketch(SketchSpec::osnap(30, 60, 3, k)), V);
    CHECK(r.distortion <= r.frobenius_error * (1 + 1e-12));
    CHECK(r.sketched_norm > 0.0);
  }
  CHECK_THROWS_AS(subspace_distortion(S, to_dense(oracle::random_mat(60, 2, 12))),
                  InvalidArgument);
}

TEST_CASE("subspace_distortion: OSNAP with 8 n ln n rows is a 1/2-embedding") {
  const std::size_t n = 20, d = 2000;
  const auto m = static_cast<std::size_t>(std::ceil(8.0 * n * std::log(static_cast<double>(n))));
  int ok = 0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const DenseMatrix V = orthonormal_columns(gaussian_matrix(d, n, derive_seed(13, 2 * k)));
    ok += subspace_distortion(SparseSketch(SketchSpec::osnap(m, d, 4, derive_seed(13, 2 * k + 1))), V)
              .distortion <= 0.5;
  }
  CHECK(ok >= 90);
}

TEST_CASE("jl_moment_estimate: exact embedding and OSNAP moments") {
  const auto x = oracle::unit(oracle::random_vec(512, 14));
  const auto exact = jl_moment_estimate(SketchSpec::identity(512), x, 1000);
  CHECK(exact.mean == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(exact.l2_moment < 1e-12);

  const auto r = jl_moment_estimate(SketchSpec::osnap(128, 512, 2, 15), x, 10000);
  CHECK(std::abs(r.mean - 1.0) <= 4 * r.std_err);
  CHECK(r.l2_moment <= std::sqrt(2.0 / 128) * (1 + 4 * r.std_err));
  CHECK(r.variance <= 2.0 / 128 * (1 + 4 * r.std_err));

  CHECK_THROWS_AS(jl_moment_estimate(SketchSpec::osnap(128, 512, 2, 15), oracle::random_vec(512, 1), 1000),
                  InvalidArgument);
  CHECK_THROWS_AS(jl_moment_estimate(SketchSpec::osnap(128, 512, 2, 15), x, 999),
                  InvalidArgument);
}

TEST_CASE("frobenius_preservation_check") {
  const DenseMatrix A = to_dense(oracle::random_mat(300, 8, 16));
  const auto spec = SketchSpec::count_sketch(20000, 300, 17);
  CHECK(frobenius_preservation_check(SketchSpec::count_sketch(200, 300, 18), A, 1.0, 200) == 1.0);
  const double rate = frobenius_preservation_check(spec, A, 0.1, 200);
  CHECK(rate >= 0.9 - 3 * std::sqrt(0.9 * 0.1 / 200));

  // One nonzero column: reduces to the vector case.
  DenseMatrix col(300, 3);
  const auto x = oracle::random_vec(300, 19);
  for (std::size_t i = 0; i < 300; ++i) col(i, 1) = x[i];
  const auto errors = frobenius_relative_errors(spec, col, 5);
  for (std::size_t k = 0; k < 5; ++k) {
    auto s = spec;
    s.seed = derive_seed(spec.seed, k);
    const Vector sx = apply_sketch(SparseSketch(s), x);
    CHECK(errors[k] == doctest::Approx(std::abs(oracle::dot(sx, sx) / oracle::dot(x, x) - 1)));
  }

  CHECK_THROWS_AS(frobenius_preservation_check(SketchSpec::osnap(20000, 300, 2, 1), A, 0.1, 10),
                  InvalidArgument);
  CHECK_THROWS_AS(frobenius_preservation_check(SketchSpec::count_sketch(100, 300, 1), A, 0.1, 10),
                  InvalidArgument);
}

TEST_CASE("probe: identity gives zero error") {
  ProbeConfig config;
  config.n = 4;
  config.epsilon = 0.1;
  config.m_grid = {64};
  config.trials = 100;
  config.d = 64;
  config.family = SketchFamily::Identity;
  const auto curve = amm_lowerbound_probe(config);
  CHECK(curve.points[0].q50 < 1e-14);
  CHECK(curve.points[0].q90 < 1e-14);
}

TEST_CASE("probe: 1/sqrt(m) scaling and monotone upper quantile") {
  ProbeConfig config;
  config.n = 4;
  config.epsilon = 0.1;
  config.m_grid = {64, 128, 256, 512, 1024};
  config.trials = 200;
  config.d = 4 * 1024;
  config.seed = 21;
  const auto curve = amm_lowerbound_probe(config);
  CHECK(loglog_slope(curve) == doctest::Approx(-0.5).epsilon(0.2));
  int violations = 0;
  for (std::size_t k = 1; k < curve.points.size(); ++k) {
    // Doubling m divides the median by √2 within ±20%.
    const double ratio = curve.points[k].q50 / curve.points[k - 1].q50;
    CHECK(ratio == doctest::Approx(1 / std::sqrt(2.0)).epsilon(0.2));
    violations += curve.points[k].q90 > curve.points[k - 1].q90;
  }
  CHECK(violations <= 2);
}

TEST_CASE("probe: argument checks") {
  ProbeConfig config;
  config.n = 4;
  config.m_grid = {128, 64};
  config.d = 1024;
  CHECK_THROWS_AS(amm_lowerbound_probe(config), InvalidArgument);
  config.m_grid = {64, 128};
  config.epsilon = 0.3;
  CHECK_THROWS_AS(amm_lowerbound_probe(config), InvalidArgument);
  config.epsilon = 0.1;
  config.d = 500;
  CHECK_THROWS_AS(amm_lowerbound_probe(config), InvalidArgument);
}

TEST_CASE("reports are reproducible and thread-count invariant") {
  ProbeConfig config;
  config.n = 3;
  config.m_grid = {32, 64};
  config.trials = 100;
  config.d = 256;
  config.seed = 5;
  std::ostringstream a, b;
  write_sweep_csv(a, amm_lowerbound_probe(config));
  setenv("SKETCHRIDGE_THREADS", "4", 1);
  write_sweep_csv(b, amm_lowerbound_probe(config));
  unsetenv("SKETCHRIDGE_THREADS");
  CHECK(a.str() == b.str());
  CHECK(a.str().find("m,s,seed_base,trials,q50,q90\n") != std::string::npos);
}

TEST_CASE("quantile") {
  CHECK(quantile({3, 1, 2}, 0.5) == 2.0);
  CHECK(quantile({1, 2, 3, 4}, 0.5) == 2.5);
  CHECK(quantile({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}, 0.9) == doctest::Approx(10.0));
  CHECK_THROWS_AS(quantile({}, 0.5), InvalidArgument);
}
