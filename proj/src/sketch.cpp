#include "sketchridge/sketch.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <numbers>

#include "sketchridge/errors.hpp"
#include "sketchridge/rng.hpp"

namespace sketchridge {

std::string_view to_string(SketchFamily family) noexcept {
  switch (family) {
    case SketchFamily::CountSketch: return "countsketch";
    case SketchFamily::OSNAP: return "osnap";
    case SketchFamily::Gaussian: return "gaussian";
    case SketchFamily::Identity: return "identity";
  }
  return "unknown";
}

SketchFamily parse_family(std::string_view name) {
  std::string lower(name);
  for (char& c : lower) c = static_cast<char>(std::tolower(c));
  if (lower == "countsketch" || lower == "cs") return SketchFamily::CountSketch;
  if (lower == "osnap") return SketchFamily::OSNAP;
  if (lower == "gaussian") return SketchFamily::Gaussian;
  if (lower == "identity") return SketchFamily::Identity;
  throw InvalidArgument("unknown sketch family '" + std::string(name) + "'");
}

void SketchSpec::validate() const {
  const std::string who = "sketch spec (" + std::string(to_string(family)) +
                          ", m=" + std::to_string(m) +
                          ", d=" + std::to_string(d) +
                          ", s=" + std::to_string(s) + "): ";
  if (m < 1) throw InvalidArgument(who + "m must be >= 1");
  if (d < 1) throw InvalidArgument(who + "d must be >= 1");
  if (s < 1 || s > m) throw InvalidArgument(who + "need 1 <= s <= m");
  if (m > UINT32_MAX) throw InvalidArgument(who + "m too large");
  if (family == SketchFamily::CountSketch && s != 1)
    throw InvalidArgument(who + "CountSketch requires s = 1");
  if (family == SketchFamily::Identity && (m != d || s != 1))
    throw InvalidArgument(who + "identity requires m = d and s = 1");
}

SketchSpec SketchSpec::count_sketch(std::size_t m, std::size_t d,
                                    std::uint64_t seed) {
  return {SketchFamily::CountSketch, m, d, 1, seed};
}
SketchSpec SketchSpec::osnap(std::size_t m, std::size_t d, std::size_t s,
                             std::uint64_t seed) {
  return {SketchFamily::OSNAP, m, d, s, seed};
}
SketchSpec SketchSpec::gaussian(std::size_t m, std::size_t d,
                                std::uint64_t seed) {
  return {SketchFamily::Gaussian, m, d, m, seed};
}
SketchSpec SketchSpec::identity(std::size_t d) {
  return {SketchFamily::Identity, d, d, 1, 0};
}

namespace {

// Floyd's algorithm: s distinct rows of [0, m), uniformly, returned sorted.
void sample_rows(CounterRng& rng, std::size_t m, std::size_t s,
                 std::vector<std::uint32_t>& out) {
  out.clear();
  for (std::size_t j = m - s; j < m; ++j) {
    auto t = static_cast<std::uint32_t>(rng.uniform_index(j + 1));
    auto pos = std::lower_bound(out.begin(), out.end(), t);
    if (pos != out.end() && *pos == t) {
      t = static_cast<std::uint32_t>(j);
      pos = std::lower_bound(out.begin(), out.end(), t);
    }
    out.insert(pos, t);
  }
}

}  // namespace

SparseSketch::SparseSketch(const SketchSpec& spec) : spec_(spec) {
  spec_.validate();
  const std::size_t m = spec_.m;
  const std::size_t d = spec_.d;

  if (spec_.family == SketchFamily::Gaussian) {
    spec_.s = m;
    per_col_ = m;
    rows_.resize(d * m);
    dense_values_.resize(d * m);
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    for (std::size_t j = 0; j < d; ++j) {
      CounterRng rng(spec_.seed, j);
      for (std::size_t r = 0; r < m; ++r) {
        rows_[j * m + r] = static_cast<std::uint32_t>(r);
        dense_values_[j * m + r] = rng.normal() * scale;
      }
    }
    return;
  }

  per_col_ = spec_.s;
  scale_ = 1.0 / std::sqrt(static_cast<double>(spec_.s));
  rows_.resize(d * per_col_);
  signs_.resize(d * per_col_);

  if (spec_.family == SketchFamily::Identity) {
    for (std::size_t j = 0; j < d; ++j) {
      rows_[j] = static_cast<std::uint32_t>(j);
      signs_[j] = 1;
    }
    return;
  }

  std::vector<std::uint32_t> chosen;
  chosen.reserve(per_col_);
  for (std::size_t j = 0; j < d; ++j) {
    CounterRng rng(spec_.seed, j);
    sample_rows(rng, m, per_col_, chosen);
    for (std::size_t k = 0; k < per_col_; ++k) {
      rows_[j * per_col_ + k] = chosen[k];
      signs_[j * per_col_ + k] = static_cast<std::int8_t>(rng.sign());
    }
  }
}

DenseMatrix SparseSketch::densify() const {
  DenseMatrix D(rows(), cols());
  for (std::size_t j = 0; j < cols(); ++j)
    for_each_in_column(j, [&](std::uint32_t r, double v) { D(r, j) = v; });
  return D;
}

SparseSketch sketch_new(const SketchSpec& spec) { return SparseSketch(spec); }

DenseMatrix apply_sketch(const SparseSketch& S, const DenseMatrix& M) {
  if (S.cols() != M.rows()) {
    throw DimensionError("apply_sketch: sketch " + std::to_string(S.rows()) +
                         "x" + std::to_string(S.cols()) + " times " +
                         shape_string(M));
  }
  DenseMatrix out(S.rows(), M.cols());
  for (std::size_t j = 0; j < S.cols(); ++j) {
    const auto src = M.row(j);
    S.for_each_in_column(j, [&](std::uint32_t r, double v) {
      auto dst = out.row(r);
      for (std::size_t c = 0; c < src.size(); ++c) dst[c] += v * src[c];
    });
  }
  return out;
}

Vector apply_sketch(const SparseSketch& S, std::span<const double> x) {
  if (S.cols() != x.size()) {
    throw DimensionError("apply_sketch: sketch with " +
                         std::to_string(S.cols()) + " columns times vector of " +
                         std::to_string(x.size()));
  }
  Vector out(S.rows(), 0.0);
  for (std::size_t j = 0; j < S.cols(); ++j) {
    const double xj = x[j];
    S.for_each_in_column(j, [&](std::uint32_t r, double v) { out[r] += v * xj; });
  }
  return out;
}

DenseMatrix apply_sketch_to_rows(const SparseSketch& S, const DenseMatrix& A) {
  if (S.cols() != A.cols()) {
    throw DimensionError("apply_sketch_to_rows: " + shape_string(A) +
                         " against sketch with " + std::to_string(S.cols()) +
                         " columns");
  }
  DenseMatrix out(A.rows(), S.rows());
  for (std::size_t i = 0; i < A.rows(); ++i) {
    const auto src = A.row(i);
    auto dst = out.row(i);
    for (std::size_t j = 0; j < src.size(); ++j) {
      const double a = src[j];
      if (a == 0.0) continue;
      S.for_each_in_column(j, [&](std::uint32_t r, double v) { dst[r] += v * a; });
    }
  }
  return out;
}

void apply_sketch_to_col_update(const SparseSketch& S, std::size_t j, double v,
                                std::span<double> acc) {
  if (j >= S.cols()) {
    throw DimensionError("column " + std::to_string(j) + " out of range for " +
                         std::to_string(S.cols()) + " sketch columns");
  }
  if (acc.size() != S.rows()) {
    throw DimensionError("accumulator of " + std::to_string(acc.size()) +
                         " for " + std::to_string(S.rows()) + " sketch rows");
  }
  if (v == 0.0) return;
  S.for_each_in_column(j, [&](std::uint32_t r, double val) { acc[r] += v * val; });
}

TensorSketchPair::TensorSketchPair(std::size_t m, std::size_t d1,
                                   std::size_t d2, std::uint64_t seed)
    : m_(m), seed_(seed), hash1_(d1), hash2_(d2), sign1_(d1), sign2_(d2) {
  if (m < 1 || d1 < 1 || d2 < 1) {
    throw InvalidArgument("TensorSketchPair needs m, d1, d2 >= 1");
  }
  CounterRng first(seed, 0);
  for (std::size_t a = 0; a < d1; ++a) {
    hash1_[a] = static_cast<std::uint32_t>(first.uniform_index(m));
    sign1_[a] = static_cast<std::int8_t>(first.sign());
  }
  CounterRng second(seed, 1);
  for (std::size_t b = 0; b < d2; ++b) {
    hash2_[b] = static_cast<std::uint32_t>(second.uniform_index(m));
    sign2_[b] = static_cast<std::int8_t>(second.sign());
  }
}

namespace {

Vector count_sketch_with(const std::vector<std::uint32_t>& hash,
                         const std::vector<std::int8_t>& sign, std::size_t m,
                         std::span<const double> x) {
  if (x.size() != hash.size()) {
    throw DimensionError("tensorsketch input of length " +
                         std::to_string(x.size()) + ", expected " +
                         std::to_string(hash.size()));
  }
  Vector out(m, 0.0);
  for (std::size_t a = 0; a < x.size(); ++a) out[hash[a]] += sign[a] * x[a];
  return out;
}

}  // namespace

Vector TensorSketchPair::count_sketch_first(std::span<const double> u) const {
  return count_sketch_with(hash1_, sign1_, m_, u);
}

Vector TensorSketchPair::count_sketch_second(std::span<const double> w) const {
  return count_sketch_with(hash2_, sign2_, m_, w);
}

Vector tensorsketch_combine(const TensorSketchPair& ts,
                            std::span<const double> u,
                            std::span<const double> w) {
  const Vector cu = ts.count_sketch_first(u);
  const Vector cw = ts.count_sketch_second(w);
  return circular_convolution(cu, cw);
}

Vector circular_convolution(std::span<const double> a,
                            std::span<const double> b) {
  if (a.size() < kFftThreshold) return circular_convolution_direct(a, b);
  return circular_convolution_fft(a, b);
}

Vector circular_convolution_direct(std::span<const double> a,
                                   std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionError("circular convolution of lengths " +
                         std::to_string(a.size()) + " and " +
                         std::to_string(b.size()));
  }
  const std::size_t m = a.size();
  Vector out(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < m; ++j) {
      std::size_t k = i + j;
      if (k >= m) k -= m;
      out[k] += a[i] * b[j];
    }
  }
  return out;
}

namespace {

using cplx = std::complex<double>;

void fft_in_place(std::vector<cplx>& x, bool inverse) {
  const std::size_t n = x.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle =
        (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
    const cplx step(std::cos(angle), std::sin(angle));
    for (std::size_t start = 0; start < n; start += len) {
      cplx w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const cplx even = x[start + k];
        const cplx odd = x[start + k + len / 2] * w;
        x[start + k] = even + odd;
        x[start + k + len / 2] = even - odd;
        w *= step;
      }
    }
  }
  if (inverse) {
    for (cplx& v : x) v /= static_cast<double>(n);
  }
}

}  // namespace

Vector circular_convolution_fft(std::span<const double> a,
                                std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionError("circular convolution of lengths " +
                         std::to_string(a.size()) + " and " +
                         std::to_string(b.size()));
  }
  const std::size_t m = a.size();
  if (m == 0) return {};
  // Linear convolution has 2m-1 terms; pad to a power of two, then fold.
  std::size_t len = 1;
  while (len < 2 * m - 1) len <<= 1;
  std::vector<cplx> fa(len), fb(len);
  for (std::size_t i = 0; i < m; ++i) {
    fa[i] = a[i];
    fb[i] = b[i];
  }
  fft_in_place(fa, false);
  fft_in_place(fb, false);
  for (std::size_t i = 0; i < len; ++i) fa[i] *= fb[i];
  fft_in_place(fa, true);
  Vector out(m);
  for (std::size_t k = 0; k < m; ++k) {
    out[k] = fa[k].real() + (k + m < len ? fa[k + m].real() : 0.0);
  }
  return out;
}

}  // namespace sketchridge
