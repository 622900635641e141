#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sketchridge/bench.hpp"
#include "sketchridge/errors.hpp"
#include "sketchridge/instances.hpp"
#include "sketchridge/io.hpp"
#include "sketchridge/polykernel.hpp"
#include "sketchridge/ridge.hpp"
#include "sketchridge/rng.hpp"
#include "sketchridge/streamer.hpp"
#include "sketchridge/verify.hpp"

namespace sketchridge::cli {

namespace {

using nlohmann::json;

/// "family:m:s", "family:m" (s = 1) or "identity". m may be "*" when a grid
/// supplies it.
struct SketchArg {
  SketchFamily family = SketchFamily::OSNAP;
  std::size_t m = 0;
  std::size_t s = 1;
};

SketchArg parse_sketch_arg(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.empty() || parts.size() > 3) {
    throw InvalidArgument("--sketch expects family:m:s, got '" + text + "'");
  }
  SketchArg arg;
  arg.family = parse_family(parts[0]);
  auto number = [&](const std::string& s) -> std::size_t {
    if (s == "*") return 0;
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw InvalidArgument("bad number '" + s + "' in --sketch");
    return static_cast<std::size_t>(v);
  };
  if (parts.size() >= 2) arg.m = number(parts[1]);
  if (parts.size() == 3) arg.s = number(parts[2]);
  if (arg.family == SketchFamily::Gaussian) arg.s = arg.m;
  return arg;
}

SketchSpec make_spec(const SketchArg& arg, std::size_t d, std::uint64_t seed) {
  SketchSpec spec{arg.family, arg.m, d, arg.s, seed};
  if (arg.family == SketchFamily::Identity) {
    spec.m = d;
    spec.s = 1;
  }
  if (arg.family == SketchFamily::CountSketch) spec.s = 1;
  if (arg.family == SketchFamily::Gaussian) spec.s = spec.m;
  spec.validate();
  return spec;
}

std::vector<std::size_t> parse_grid(const std::string& text) {
  std::vector<std::size_t> grid;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) {
    if (part.empty()) continue;
    grid.push_back(static_cast<std::size_t>(std::stoull(part)));
  }
  if (grid.empty()) throw InvalidArgument("--grid is empty");
  return grid;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path, 0);
  out << text;
  if (!out) throw ParseError("write failed for " + path, 0);
}

struct InstanceOptions {
  std::string instance;
  std::string b_path;
  std::vector<double> gen_gaussian;  // n d ratio
  std::vector<double> gen_gap_hamming;  // d lambda

  void add_to(CLI::App* app) {
    app->add_option("--instance", instance, "Matrix Market file holding A");
    app->add_option("--b", b_path, "JSON sidecar {b, lambda}");
    app->add_option("--gen-gaussian", gen_gaussian, "Generate: n d sigma^2/lambda")
        ->expected(3);
    app->add_option("--gen-gap-hamming", gen_gap_hamming,
                    "Generate: d lambda (random x, y in {+-1}^d)")
        ->expected(2);
  }

  struct Loaded {
    RidgeProblem problem;
    json info;
  };

  Loaded load(std::uint64_t seed) const {
    const int sources = !instance.empty() + !gen_gaussian.empty() +
                        !gen_gap_hamming.empty();
    if (sources != 1) {
      throw InvalidArgument(
          "exactly one of --instance, --gen-gaussian, --gen-gap-hamming is required");
    }
    Loaded out;
    if (!instance.empty()) {
      if (b_path.empty()) throw InvalidArgument("--instance needs --b");
      out.problem = load_problem(instance, b_path);
      out.info = {{"source", "file"}, {"path", instance}};
    } else if (!gen_gaussian.empty()) {
      auto inst = gen_gaussian_instance(static_cast<std::size_t>(gen_gaussian[0]),
                                        static_cast<std::size_t>(gen_gaussian[1]),
                                        seed, gen_gaussian[2]);
      out.info = {{"source", "gaussian"}, {"achieved_ratio", inst.achieved_ratio}};
      out.problem = std::move(inst.problem);
    } else {
      const auto d = static_cast<std::size_t>(gen_gap_hamming[0]);
      const auto x = random_sign_vector(d, derive_seed(seed, 1));
      const auto y = random_sign_vector(d, derive_seed(seed, 2));
      auto inst = sketchridge::gen_gap_hamming(x, y, gen_gap_hamming[1]);
      out.info = {{"source", "gap-hamming"},
                  {"hamming", inst.hamming},
                  {"opt_closed_form", inst.opt_closed_form}};
      out.problem = std::move(inst.problem);
    }
    out.info["n"] = out.problem.n();
    out.info["d"] = out.problem.d();
    out.info["lambda"] = out.problem.lambda;
    return out;
  }
};

void cmd_gen(const InstanceOptions& src, std::uint64_t seed, const std::string& out,
             const std::string& updates_out) {
  if (out.empty()) throw InvalidArgument("gen needs --out PREFIX");
  auto loaded = src.load(seed);
  save_problem(loaded.problem, out + ".mtx", out + ".json");
  if (!updates_out.empty()) {
    // Each nonzero arrives as two deltas, plus a cancelling pair per row,
    // so replaying the stream rebuilds A exactly up to rounding.
    std::ofstream os(updates_out);
    if (!os) throw ParseError("cannot write " + updates_out, 0);
    os << "# i j v\n";
    const DenseMatrix& A = loaded.problem.A;
    for (std::size_t i = 0; i < A.rows(); ++i) {
      for (std::size_t j = 0; j < A.cols(); ++j) {
        const double v = A(i, j);
        if (v == 0.0) continue;
        const double half = v * 0.5;
        os << i << ' ' << j << ' ' << format_real(half) << '\n';
        os << i << ' ' << j << ' ' << format_real(v - half) << '\n';
      }
      os << i << " 0 1\n" << i << " 0 -1\n";
    }
  }
  write_text("-", loaded.info.dump() + "\n");
}

void cmd_solve(const InstanceOptions& src, const std::string& sketch_text,
               std::size_t t, std::uint64_t seed, bool exact_reference,
               const std::string& out) {
  auto loaded = src.load(seed);
  const RidgeProblem& p = loaded.problem;
  json report;
  report["instance"] = loaded.info;

  std::optional<Vector> x_star;
  double opt = 0.0;
  if (exact_reference || sketch_text.empty()) {
    x_star = ridge_exact(p);
    opt = cost(p, *x_star);
    report["opt"] = opt;
  }
  if (sketch_text.empty()) {
    report["solver"] = "exact";
    report["x_hat"] = *x_star;
    report["cost"] = opt;
  } else {
    const SketchSpec spec = make_spec(parse_sketch_arg(sketch_text), p.d(), seed);
    IterativeOptions options;
    options.reference = x_star;
    const SolveReport result = ridge_sketched_iterative(p, t, fresh_sketches(spec), options);
    json body = to_json(result);
    report.update(body);
    report["solver"] = "sketched";
    report["sketch"] = to_json(spec);
    if (x_star) {
      report["rel_error"] = result.rel_residuals->back();
      report["cost_ratio"] = result.cost / opt;
    }
  }
  write_text(out, report.dump(1) + "\n");
}

void cmd_bench(const InstanceOptions& src, const std::string& sketch_text,
               const std::string& grid_text, std::size_t t, std::size_t seeds,
               std::size_t repeats, std::uint64_t seed, const std::string& out) {
  if (grid_text.empty()) throw InvalidArgument("bench needs --grid");
  auto loaded = src.load(seed);
  const SketchArg arg = parse_sketch_arg(sketch_text.empty() ? "osnap:*:8" : sketch_text);
  BenchConfig config;
  config.grid = parse_grid(grid_text);
  config.family = arg.family;
  config.s = arg.s;
  config.t = t;
  config.seeds = seeds;
  config.timing_repeats = repeats;
  config.seed = seed;
  if (arg.family == SketchFamily::Identity) {
    for (auto& m : config.grid) m = loaded.problem.d();
  }
  std::ostringstream csv;
  write_bench_csv(csv, run_bench(loaded.problem, config));
  write_text(out, csv.str());
}

void cmd_stream(const std::string& updates, const std::string& b_path,
                const std::string& sketch_text, std::size_t d, std::uint64_t seed,
                const std::string& out) {
  if (updates.empty() || b_path.empty()) {
    throw InvalidArgument("stream needs --updates and --b");
  }
  if (d == 0) throw InvalidArgument("stream needs --d (columns of A)");
  if (sketch_text.empty()) throw InvalidArgument("stream needs --sketch");
  const Sidecar side = read_sidecar_file(b_path);
  const SketchSpec spec = make_spec(parse_sketch_arg(sketch_text), d, seed);
  const TwoPassResult r = stream_solve_file(updates, spec, side.b, side.lambda);
  json report{{"x_tilde", r.x_tilde},
              {"y", r.y},
              {"updates", r.updates},
              {"sketch", to_json(spec)},
              {"lambda", side.lambda},
              {"timing",
               {{"pass1_seconds", r.pass1_seconds}, {"pass2_seconds", r.pass2_seconds}}}};
  write_text(out, report.dump(1) + "\n");
}

struct VerifyOptions {
  std::string kind = "probe";
  std::string sketch = "countsketch";
  std::string grid;
  std::size_t n = 4;
  std::size_t d = 0;
  double epsilon = 0.1;
  std::size_t trials = 100;
};

void cmd_verify(const VerifyOptions& o, std::uint64_t seed, const std::string& out) {
  const SketchArg arg = parse_sketch_arg(o.sketch);
  std::ostringstream csv;
  if (o.kind == "probe") {
    ProbeConfig config;
    config.n = o.n;
    config.epsilon = o.epsilon;
    config.m_grid = parse_grid(o.grid);
    config.trials = o.trials;
    config.d = o.d ? o.d : 4 * config.m_grid.back();
    config.family = arg.family;
    config.s = arg.family == SketchFamily::CountSketch ? 1 : arg.s;
    config.seed = seed;
    write_sweep_csv(csv, amm_lowerbound_probe(config));
  } else if (o.kind == "jl") {
    if (o.d == 0) throw InvalidArgument("verify jl needs --d");
    CounterRng rng(seed, 0xF00D);
    Vector x(o.d);
    for (double& v : x) v = rng.normal();
    const double norm = l2_norm(x);
    for (double& v : x) v /= norm;
    csv << "# sketchridge jl v1 family=" << to_string(arg.family) << "\n";
    csv << "m,s,seed_base,trials,q50,q90,mean,l2_moment,std_err\n";
    for (std::size_t m : parse_grid(o.grid)) {
      const SketchSpec spec = make_spec({arg.family, m, arg.s}, o.d, seed);
      const JlMoments r = jl_moment_estimate(spec, x, o.trials);
      csv << m << ',' << spec.s << ',' << seed << ',' << o.trials << ','
          << format_real(r.q50) << ',' << format_real(r.q90) << ','
          << format_real(r.mean) << ',' << format_real(r.l2_moment) << ','
          << format_real(r.std_err) << '\n';
    }
  } else if (o.kind == "frobenius") {
    if (o.d == 0) throw InvalidArgument("verify frobenius needs --d");
    const DenseMatrix A = gaussian_matrix(o.d, o.n, derive_seed(seed, 0xA));
    csv << "# sketchridge frobenius v1 family=" << to_string(arg.family)
        << " epsilon=" << o.epsilon << "\n";
    csv << "m,s,seed_base,trials,q50,q90,rate\n";
    for (std::size_t m : parse_grid(o.grid)) {
      const SketchSpec spec = make_spec({arg.family, m, arg.s}, o.d, seed);
      const auto errors = frobenius_relative_errors(spec, A, o.trials);
      const auto hits = std::count_if(errors.begin(), errors.end(),
                                      [&](double e) { return e <= o.epsilon; });
      csv << m << ',' << spec.s << ',' << seed << ',' << o.trials << ','
          << format_real(quantile(errors, 0.5)) << ','
          << format_real(quantile(errors, 0.9)) << ','
          << format_real(static_cast<double>(hits) / static_cast<double>(o.trials))
          << '\n';
    }
  } else if (o.kind == "distortion") {
    if (o.d == 0) throw InvalidArgument("verify distortion needs --d");
    csv << "# sketchridge distortion v1 family=" << to_string(arg.family) << "\n";
    csv << "m,s,seed_base,trials,q50,q90\n";
    for (std::size_t m : parse_grid(o.grid)) {
      const SketchSpec base = make_spec({arg.family, m, arg.s}, o.d, seed);
      std::vector<double> values;
      for (std::size_t t = 0; t < o.trials; ++t) {
        const DenseMatrix V = orthonormal_columns(
            gaussian_matrix(o.d, o.n, derive_seed(seed, 2 * t)));
        SketchSpec spec = base;
        spec.seed = derive_seed(seed, 2 * t + 1);
        values.push_back(subspace_distortion(SparseSketch(spec), V).distortion);
      }
      csv << m << ',' << base.s << ',' << seed << ',' << o.trials << ','
          << format_real(quantile(values, 0.5)) << ','
          << format_real(quantile(values, 0.9)) << '\n';
    }
  } else {
    throw InvalidArgument("unknown --kind '" + o.kind +
                          "' (probe, jl, frobenius, distortion)");
  }
  write_text(out, csv.str());
}

struct KrrOptions {
  std::string train;
  std::string b_path;
  std::string model_in;
  std::string model_out;
  std::string query;
  std::size_t p = 2;
  std::size_t m = 256;
  std::size_t s = 4;
};

void cmd_krr(const KrrOptions& o, std::uint64_t seed, const std::string& out) {
  KrrModel model;
  if (!o.model_in.empty()) {
    std::ifstream in(o.model_in);
    if (!in) throw ParseError("cannot open " + o.model_in, 0);
    json j;
    in >> j;
    model = krr_model_from_json(j);
  } else {
    if (o.train.empty() || o.b_path.empty()) {
      throw InvalidArgument("krr needs --train and --b, or --model");
    }
    auto A = std::make_shared<const DenseMatrix>(read_matrix_market_file(o.train));
    const Sidecar side = read_sidecar_file(o.b_path);
    const PolySketchPlan plan({o.p, o.m, A->cols(), std::min(o.s, o.m), seed});
    model = krr_fit(A, side.b, side.lambda, plan);
    if (!o.model_out.empty()) write_text(o.model_out, to_json(model, o.train).dump(1) + "\n");
  }
  if (!o.query.empty()) {
    const DenseMatrix Q = read_matrix_market_file(o.query);
    if (Q.cols() != model.training->cols()) {
      throw DimensionError("query has d = " + std::to_string(Q.cols()) +
                           ", training has d = " +
                           std::to_string(model.training->cols()));
    }
    Vector predictions(Q.rows());
    for (std::size_t i = 0; i < Q.rows(); ++i) predictions[i] = krr_predict(model, Q.row(i));
    write_text(out, json{{"predictions", predictions}}.dump(1) + "\n");
  } else if (o.model_out.empty()) {
    write_text(out, to_json(model, o.train).dump(1) + "\n");
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Sketched ridge regression toolkit", "sketchridge"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  std::string out;
  std::string sketch;
  std::size_t t = 1;
  std::size_t trials = 100;
  std::string grid;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Base random seed");
    sub->add_option("--out", out, "Output path ('-' for stdout)");
  };

  InstanceOptions src;
  std::string updates_out;
  auto* gen = app.add_subcommand("gen", "Generate an instance (PREFIX.mtx + PREFIX.json)");
  src.add_to(gen);
  common(gen);
  gen->add_option("--updates-out", updates_out, "Also write A as a turnstile stream");

  bool exact_reference = false;
  auto* solve = app.add_subcommand("solve", "Exact and/or sketched ridge solve");
  src.add_to(solve);
  common(solve);
  solve->add_option("--sketch", sketch, "family:m:s (countsketch, osnap, gaussian, identity)");
  solve->add_option("--t", t, "Iterations")->check(CLI::PositiveNumber);
  solve->add_flag("--exact-reference", exact_reference, "Also solve exactly and report errors");

  std::size_t seeds = 5;
  std::size_t repeats = 3;
  auto* bench = app.add_subcommand("bench", "Sweep sketch rows on one instance (CSV)");
  src.add_to(bench);
  common(bench);
  bench->add_option("--sketch", sketch, "family:*:s");
  bench->add_option("--grid", grid, "m1,m2,...");
  bench->add_option("--t", t, "Iterations")->check(CLI::PositiveNumber);
  bench->add_option("--seeds", seeds, "Sketches averaged per row")->check(CLI::PositiveNumber);
  bench->add_option("--repeats", repeats, "Timing repeats (median)")->check(CLI::PositiveNumber);

  std::string updates;
  std::string b_path;
  std::size_t stream_d = 0;
  auto* stream = app.add_subcommand("stream", "Two-pass turnstile solve");
  common(stream);
  stream->add_option("--updates", updates, "Update file, one 'i j v' per line");
  stream->add_option("--b", b_path, "JSON sidecar {b, lambda}");
  stream->add_option("--sketch", sketch, "family:m:s");
  stream->add_option("--d", stream_d, "Columns of A");

  VerifyOptions vopt;
  auto* verify = app.add_subcommand("verify", "Statistical sketch checks (CSV)");
  common(verify);
  verify->add_option("--kind", vopt.kind, "probe | jl | frobenius | distortion");
  verify->add_option("--sketch", vopt.sketch, "family[:m[:s]]");
  verify->add_option("--grid", grid, "m1,m2,...");
  verify->add_option("--n", vopt.n, "Columns of the test matrix");
  verify->add_option("--d", vopt.d, "Sketch input dimension");
  verify->add_option("--epsilon", vopt.epsilon, "Accuracy parameter");
  verify->add_option("--trials", trials, "Trials per grid point");

  KrrOptions kopt;
  auto* krr = app.add_subcommand("krr", "Polynomial-kernel ridge regression");
  common(krr);
  krr->add_option("--train", kopt.train, "Training rows (Matrix Market)");
  krr->add_option("--b", kopt.b_path, "JSON sidecar {b, lambda}");
  krr->add_option("--model", kopt.model_in, "Load a fitted model");
  krr->add_option("--model-out", kopt.model_out, "Write the fitted model");
  krr->add_option("--query", kopt.query, "Query rows to predict (Matrix Market)");
  krr->add_option("--p", kopt.p, "Kernel degree")->check(CLI::PositiveNumber);
  krr->add_option("--m", kopt.m, "Sketch rows")->check(CLI::PositiveNumber);
  krr->add_option("--s", kopt.s, "Leaf sparsity")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*gen) {
      cmd_gen(src, seed, out, updates_out);
    } else if (*solve) {
      cmd_solve(src, sketch, t, seed, exact_reference, out);
    } else if (*bench) {
      cmd_bench(src, sketch, grid, t, seeds, repeats, seed, out);
    } else if (*stream) {
      cmd_stream(updates, b_path, sketch, stream_d, seed, out);
    } else if (*verify) {
      vopt.grid = grid;
      vopt.trials = trials;
      cmd_verify(vopt, seed, out);
    } else if (*krr) {
      cmd_krr(kopt, seed, out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace sketchridge::cli
