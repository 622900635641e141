#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "sketchridge/errors.hpp"
#include "sketchridge/io.hpp"
#include "sketchridge/rng.hpp"

using namespace sketchridge;

TEST_CASE("Matrix Market round-trips exactly in both layouts") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    CounterRng rng(seed, 0);
    const std::size_t r = 1 + rng.uniform_index(9), c = 1 + rng.uniform_index(9);
    DenseMatrix M = to_dense(oracle::random_mat(r, c, seed));
    for (double& v : M.data())
      if (rng.uniform01() < 0.4) v = 0.0;
    for (auto format : {MatrixMarketFormat::Array, MatrixMarketFormat::Coordinate}) {
      std::stringstream ss;
      write_matrix_market(ss, M, format);
      CHECK(read_matrix_market(ss) == M);
    }
  }
}

TEST_CASE("Matrix Market reader: array is column-major, coordinate sums duplicates") {
  std::istringstream array(
      "%%MatrixMarket matrix array real general\n% comment\n2 3\n1\n2\n3\n4\n5\n6\n");
  const DenseMatrix A = read_matrix_market(array);
  CHECK(A == DenseMatrix::from_rows({{1, 3, 5}, {2, 4, 6}}));

  std::istringstream coord(
      "%%MatrixMarket matrix coordinate integer general\n2 2 3\n1 1 1\n2 1 4\n1 1 2\n");
  CHECK(read_matrix_market(coord) == DenseMatrix::from_rows({{3, 0}, {4, 0}}));

  std::istringstream sym(
      "%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 1.5\n2 1 -2\n");
  CHECK(read_matrix_market(sym) == DenseMatrix::from_rows({{1.5, -2}, {-2, 0}}));
}

TEST_CASE("Matrix Market reader errors carry a line number") {
  const char* cases[] = {
      "%%MatrixMarket matrix array complex general\n1 1\n1\n",
      "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n",
      "%%MatrixMarket matrix array real general\n2 1\n1\n",
      "not a header\n",
      "%%MatrixMarket matrix array real general\n1 1\nabc\n",
  };
  for (const char* text : cases) {
    std::istringstream in(text);
    CHECK_THROWS_AS(read_matrix_market(in), ParseError);
  }
}

TEST_CASE("problem files round-trip") {
  const auto dir = std::filesystem::temp_directory_path() / "sketchridge_io_test";
  std::filesystem::create_directories(dir);
  const RidgeProblem p{to_dense(oracle::random_mat(3, 5, 1)), oracle::random_vec(3, 2), 0.125};
  save_problem(p, (dir / "p.mtx").string(), (dir / "p.json").string());
  const RidgeProblem q = load_problem((dir / "p.mtx").string(), (dir / "p.json").string());
  CHECK(q.A == p.A);
  CHECK(q.b == p.b);
  CHECK(q.lambda == p.lambda);
  write_sidecar_file((dir / "bad.json").string(), {{1.0}, 1.0});
  CHECK_THROWS_AS(load_problem((dir / "p.mtx").string(), (dir / "bad.json").string()),
                  DimensionError);
  CHECK_THROWS(load_problem((dir / "missing.mtx").string(), (dir / "p.json").string()));
  std::filesystem::remove_all(dir);
}

TEST_CASE("JSON helpers round-trip") {
  const auto spec = SketchSpec::osnap(64, 100, 4, 0xFFFFFFFFFFFFFFFFull);
  CHECK(sketch_spec_from_json(to_json(spec)) == spec);
  const PolySketchParams params{3, 128, 7, 2, 12345};
  CHECK(poly_params_from_json(to_json(params)) == params);
  CHECK_THROWS(sketch_spec_from_json(nlohmann::json{{"family", "osnap"}}));

  SolveReport report;
  report.x_hat = {1.0, 2.0};
  report.iterations = 2;
  report.wall_time_seconds = 0.5;
  const auto j = to_json(report);
  CHECK(j.contains("timing"));
  CHECK_FALSE(j.contains("rel_residuals"));
  CHECK(format_real(0.1) == "0.10000000000000001");
}
