#include "sketchridge/streamer.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>

#include "sketchridge/errors.hpp"

namespace sketchridge {

StreamState::StreamState(const SketchSpec& spec, std::size_t n)
    : sketch_(spec), n_(n), acc_(n, spec.m) {
  if (n == 0) throw InvalidArgument("stream: n must be >= 1");
}

void StreamState::ingest(const TurnstileUpdate& u) {
  if (u.i >= n_) {
    throw StreamError("row " + std::to_string(u.i) + " out of range (n = " +
                          std::to_string(n_) + ")",
                      updates_);
  }
  if (u.j >= d()) {
    throw StreamError("column " + std::to_string(u.j) + " out of range (d = " +
                          std::to_string(d()) + ")",
                      updates_);
  }
  if (!std::isfinite(u.v)) throw StreamError("non-finite delta", updates_);
  apply_sketch_to_col_update(sketch_, u.j, u.v, acc_.row(u.i));
  ++updates_;
}

Vector StreamState::finalize_pass1(std::span<const double> b,
                                   double lambda) const {
  if (b.size() != n_) {
    throw DimensionError("finalize_pass1: b has " + std::to_string(b.size()) +
                         " entries, n = " + std::to_string(n_));
  }
  if (!(lambda > 0.0)) throw InvalidArgument("finalize_pass1: lambda must be > 0");
  DenseMatrix G = gram_rows(acc_);
  add_to_diagonal(G, lambda);
  return spd_solve(G, b);
}

DenseMatrix StreamState::sketched() const { return transpose(acc_); }

std::size_t StreamState::memory_bytes() const noexcept {
  const std::size_t per_col = sketch_.nnz_per_column();
  const std::size_t value_bytes =
      sketch_.spec().family == SketchFamily::Gaussian ? sizeof(double) : 1;
  return acc_.size() * sizeof(double) +
         sketch_.cols() * per_col * (sizeof(std::uint32_t) + value_bytes);
}

void stream_pass2_accumulate(std::span<double> x_acc, const TurnstileUpdate& u,
                             std::span<const double> y) {
  if (u.i >= y.size() || u.j >= x_acc.size()) {
    throw DimensionError("pass-2 update (" + std::to_string(u.i) + ", " +
                         std::to_string(u.j) + ") out of range");
  }
  x_acc[u.j] += u.v * y[u.i];
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::size_t parse_index(std::string_view token, std::size_t line) {
  std::size_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError("bad index '" + std::string(token) + "'", line);
  }
  return value;
}

double parse_real(std::string_view token, std::size_t line) {
  const std::string copy(token);
  char* end = nullptr;
  const double value = std::strtod(copy.c_str(), &end);
  if (copy.empty() || *end != '\0' || !std::isfinite(value)) {
    throw ParseError("bad value '" + copy + "'", line);
  }
  return value;
}

}  // namespace

std::size_t for_each_update(
    std::istream& in,
    const std::function<void(const TurnstileUpdate&, std::size_t)>& f) {
  std::string text;
  std::size_t line = 0;
  std::size_t count = 0;
  while (std::getline(in, text)) {
    ++line;
    std::string_view view(text);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;

    std::string_view tokens[3];
    std::size_t found = 0;
    while (!view.empty()) {
      if (found == 3) throw ParseError("expected 'i j v', got extra fields", line);
      const auto end = view.find_first_of(" \t");
      tokens[found++] = view.substr(0, end);
      view = end == std::string_view::npos ? std::string_view{}
                                           : trim(view.substr(end));
    }
    if (found != 3) throw ParseError("expected 'i j v'", line);
    f({parse_index(tokens[0], line), parse_index(tokens[1], line),
       parse_real(tokens[2], line)},
      line);
    ++count;
  }
  return count;
}

TwoPassResult stream_solve_file(const std::string& path, const SketchSpec& spec,
                                std::span<const double> b, double lambda) {
  using clock = std::chrono::steady_clock;
  TwoPassResult result;
  StreamState state(spec, b.size());

  const auto t0 = clock::now();
  {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open update file " + path, 0);
    result.updates = for_each_update(
        in, [&](const TurnstileUpdate& u, std::size_t line) {
          try {
            state.ingest(u);
          } catch (const StreamError& e) {
            throw ParseError(e.what(), line);
          }
        });
  }
  result.y = state.finalize_pass1(b, lambda);
  const auto t1 = clock::now();

  result.x_tilde.assign(spec.d, 0.0);
  {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot reopen update file " + path, 0);
    for_each_update(in, [&](const TurnstileUpdate& u, std::size_t) {
      stream_pass2_accumulate(result.x_tilde, u, result.y);
    });
  }
  const auto t2 = clock::now();
  result.pass1_seconds = std::chrono::duration<double>(t1 - t0).count();
  result.pass2_seconds = std::chrono::duration<double>(t2 - t1).count();
  return result;
}

}  // namespace sketchridge
