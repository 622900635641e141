#include "sketchridge/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sketchridge/errors.hpp"

namespace sketchridge {

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool next_data_line(std::istream& in, std::string& line, std::size_t& number) {
  while (std::getline(in, line)) {
    ++number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    return true;
  }
  return false;
}

}  // namespace

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

DenseMatrix read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t number = 0;
  if (!std::getline(in, line)) throw ParseError("empty Matrix Market input", 1);
  ++number;
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (lower(banner) != "%%matrixmarket" || lower(object) != "matrix") {
    throw ParseError("missing %%MatrixMarket matrix banner", number);
  }
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (format != "array" && format != "coordinate") {
    throw ParseError("unsupported format '" + format + "'", number);
  }
  if (field != "real" && field != "integer" && field != "double") {
    throw ParseError("unsupported field '" + field + "'", number);
  }
  if (symmetry != "general" && symmetry != "symmetric") {
    throw ParseError("unsupported symmetry '" + symmetry + "'", number);
  }
  const bool symmetric = symmetry == "symmetric";

  if (!next_data_line(in, line, number)) throw ParseError("missing size line", number);
  std::istringstream sizes(line);
  std::size_t rows = 0, cols = 0, entries = 0;
  if (!(sizes >> rows >> cols)) throw ParseError("bad size line", number);
  if (format == "coordinate" && !(sizes >> entries)) {
    throw ParseError("coordinate size line needs an entry count", number);
  }
  if (symmetric && rows != cols) throw ParseError("symmetric matrix must be square", number);

  DenseMatrix M(rows, cols);
  auto parse_value = [&](const std::string& token) {
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (token.empty() || *end != '\0' || !std::isfinite(v)) {
      throw ParseError("bad value '" + token + "'", number);
    }
    return v;
  };

  if (format == "array") {
    // Column-major; symmetric stores the lower triangle only.
    for (std::size_t j = 0; j < cols; ++j) {
      for (std::size_t i = symmetric ? j : 0; i < rows; ++i) {
        if (!next_data_line(in, line, number)) throw ParseError("too few values", number);
        std::istringstream ls(line);
        std::string token;
        ls >> token;
        const double v = parse_value(token);
        M(i, j) = v;
        if (symmetric) M(j, i) = v;
      }
    }
    return M;
  }

  for (std::size_t k = 0; k < entries; ++k) {
    if (!next_data_line(in, line, number)) throw ParseError("too few entries", number);
    std::istringstream ls(line);
    std::size_t i = 0, j = 0;
    std::string token;
    if (!(ls >> i >> j >> token)) throw ParseError("expected 'i j value'", number);
    if (i < 1 || i > rows || j < 1 || j > cols) {
      throw ParseError("entry index out of range", number);
    }
    const double v = parse_value(token);
    M(i - 1, j - 1) += v;
    if (symmetric && i != j) M(j - 1, i - 1) += v;
  }
  return M;
}

DenseMatrix read_matrix_market_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path, 0);
  return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const DenseMatrix& M,
                         MatrixMarketFormat format) {
  if (format == MatrixMarketFormat::Array) {
    out << "%%MatrixMarket matrix array real general\n";
    out << M.rows() << ' ' << M.cols() << '\n';
    for (std::size_t j = 0; j < M.cols(); ++j)
      for (std::size_t i = 0; i < M.rows(); ++i) out << format_real(M(i, j)) << '\n';
    return;
  }
  const auto nnz = static_cast<std::size_t>(
      std::count_if(M.data().begin(), M.data().end(), [](double v) { return v != 0.0; }));
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << M.rows() << ' ' << M.cols() << ' ' << nnz << '\n';
  for (std::size_t j = 0; j < M.cols(); ++j)
    for (std::size_t i = 0; i < M.rows(); ++i)
      if (M(i, j) != 0.0) out << i + 1 << ' ' << j + 1 << ' ' << format_real(M(i, j)) << '\n';
}

void write_matrix_market_file(const std::string& path, const DenseMatrix& M,
                              MatrixMarketFormat format) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path, 0);
  write_matrix_market(out, M, format);
  if (!out) throw ParseError("write failed for " + path, 0);
}

Sidecar read_sidecar_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path, 0);
  nlohmann::json j;
  try {
    in >> j;
    Sidecar s;
    s.b = j.at("b").get<Vector>();
    s.lambda = j.at("lambda").get<double>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
}

void write_sidecar_file(const std::string& path, const Sidecar& sidecar) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path, 0);
  out << nlohmann::json{{"b", sidecar.b}, {"lambda", sidecar.lambda}}.dump() << '\n';
}

RidgeProblem load_problem(const std::string& matrix_path,
                          const std::string& sidecar_path) {
  RidgeProblem p;
  p.A = read_matrix_market_file(matrix_path);
  Sidecar s = read_sidecar_file(sidecar_path);
  p.b = std::move(s.b);
  p.lambda = s.lambda;
  p.validate();
  return p;
}

void save_problem(const RidgeProblem& p, const std::string& matrix_path,
                  const std::string& sidecar_path) {
  write_matrix_market_file(matrix_path, p.A);
  write_sidecar_file(sidecar_path, {p.b, p.lambda});
}

nlohmann::json to_json(const SketchSpec& spec) {
  return {{"family", std::string(to_string(spec.family))},
          {"m", spec.m},
          {"d", spec.d},
          {"s", spec.s},
          {"seed", spec.seed}};
}

SketchSpec sketch_spec_from_json(const nlohmann::json& j) {
  try {
    SketchSpec spec{parse_family(j.at("family").get<std::string>()),
                    j.at("m").get<std::size_t>(), j.at("d").get<std::size_t>(),
                    j.at("s").get<std::size_t>(), j.at("seed").get<std::uint64_t>()};
    spec.validate();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("sketch spec: ") + e.what(), 0);
  }
}

nlohmann::json to_json(const SolveReport& report) {
  nlohmann::json j{{"x_hat", report.x_hat},
                   {"iterations", report.iterations},
                   {"cost", report.cost},
                   {"sketch_seeds", report.sketch_seeds},
                   {"timing", {{"wall_time_seconds", report.wall_time_seconds}}}};
  if (report.rel_residuals) j["rel_residuals"] = *report.rel_residuals;
  return j;
}

nlohmann::json to_json(const PolySketchParams& params) {
  return {{"p", params.p}, {"m", params.m}, {"d", params.d},
          {"s", params.s}, {"seed", params.seed}};
}

PolySketchParams poly_params_from_json(const nlohmann::json& j) {
  try {
    return {j.at("p").get<std::size_t>(), j.at("m").get<std::size_t>(),
            j.at("d").get<std::size_t>(), j.at("s").get<std::size_t>(),
            j.at("seed").get<std::uint64_t>()};
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("poly sketch plan: ") + e.what(), 0);
  }
}

nlohmann::json to_json(const KrrModel& model, const std::string& training_path) {
  return {{"lambda", model.lambda},
          {"plan", to_json(model.plan)},
          {"beta_tilde", model.beta_tilde},
          {"training_path", training_path}};
}

KrrModel krr_model_from_json(const nlohmann::json& j) {
  KrrModel model;
  try {
    model.lambda = j.at("lambda").get<double>();
    model.plan = poly_params_from_json(j.at("plan"));
    model.beta_tilde = j.at("beta_tilde").get<Vector>();
    model.training = std::make_shared<const DenseMatrix>(
        read_matrix_market_file(j.at("training_path").get<std::string>()));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("krr model: ") + e.what(), 0);
  }
  if (model.beta_tilde.size() != model.training->rows()) {
    throw DimensionError("krr model: beta_tilde does not match training rows");
  }
  return model;
}

}  // namespace sketchridge
