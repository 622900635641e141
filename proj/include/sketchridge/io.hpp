#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "sketchridge/linalg.hpp"
#include "sketchridge/polykernel.hpp"
#include "sketchridge/ridge.hpp"
#include "sketchridge/sketch.hpp"

namespace sketchridge {

enum class MatrixMarketFormat { Array, Coordinate };

/// Reads "matrix array|coordinate real|integer general|symmetric".
DenseMatrix read_matrix_market(std::istream& in);
DenseMatrix read_matrix_market_file(const std::string& path);

/// Values are written with 17 significant digits, so reading back is exact.
void write_matrix_market(std::ostream& out, const DenseMatrix& M,
                         MatrixMarketFormat format = MatrixMarketFormat::Array);
void write_matrix_market_file(const std::string& path, const DenseMatrix& M,
                              MatrixMarketFormat format = MatrixMarketFormat::Array);

/// {"b": [...], "lambda": r}
struct Sidecar {
  Vector b;
  double lambda = 1.0;
};

Sidecar read_sidecar_file(const std::string& path);
void write_sidecar_file(const std::string& path, const Sidecar& sidecar);

/// A from Matrix Market, b and λ from the JSON sidecar.
RidgeProblem load_problem(const std::string& matrix_path,
                          const std::string& sidecar_path);
void save_problem(const RidgeProblem& p, const std::string& matrix_path,
                  const std::string& sidecar_path);

nlohmann::json to_json(const SketchSpec& spec);
SketchSpec sketch_spec_from_json(const nlohmann::json& j);

/// Wall time is kept under "timing" so the rest is reproducible byte for byte.
nlohmann::json to_json(const SolveReport& report);

nlohmann::json to_json(const PolySketchParams& params);
PolySketchParams poly_params_from_json(const nlohmann::json& j);

/// {lambda, plan, beta_tilde, training_path}
nlohmann::json to_json(const KrrModel& model, const std::string& training_path);
/// Loads the training matrix from the recorded path.
KrrModel krr_model_from_json(const nlohmann::json& j);

/// "%.17g".
std::string format_real(double value);

}  // namespace sketchridge
