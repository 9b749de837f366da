// SPDX-License-Identifier: Apache-2.0
#include "newsblend/numerics.hpp"

#include <cmath>
#include <numbers>

namespace newsblend {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) noexcept {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw ShapeError("matrix " + shape_string() + " given " + std::to_string(data_.size()) +
                     " values");
  }
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw ShapeError("ragged row list");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Matrix(r, c, std::move(data));
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

std::string Matrix::shape_string() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

Rng::Rng(std::uint64_t seed) noexcept : seed_(seed) {
  std::uint64_t x = seed;
  for (auto& s : state_) s = splitmix64(x);
}

std::uint64_t Rng::next_u64() noexcept {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::uniform01() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

double Rng::normal() noexcept {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t x = seed ^ (stream * 0xD1B54A32D192ED03ULL);
  return splitmix64(x);
}

double sigmoid(double x) noexcept {
  // Branch keeps exp() from overflowing for large |x|.
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double tanh_act(double x) noexcept { return std::tanh(x); }

double relu(double x) noexcept { return x > 0.0 ? x : 0.0; }

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: " + a.shape_string() + " x " + b.shape_string());
  }
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out_row = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      const auto b_row = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aik * b_row[j];
    }
  }
  return out;
}

Vector matvec(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) {
    throw ShapeError("matvec: " + a.shape_string() + " x vector(" + std::to_string(x.size()) +
                     ")");
  }
  Vector y(a.rows(), 0.0);
  matvec_accumulate(a, x, y);
  return y;
}

void matvec_accumulate(const Matrix& a, std::span<const double> x, std::span<double> y) noexcept {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto row = a.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * x[j];
    y[i] += acc;
  }
}

void matvec_transposed_accumulate(const Matrix& a, std::span<const double> v,
                                  std::span<double> y) noexcept {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double vi = v[i];
    if (vi == 0.0) continue;
    const auto row = a.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) y[j] += row[j] * vi;
  }
}

void outer_accumulate(Matrix& a, std::span<const double> u, std::span<const double> v) noexcept {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double ui = u[i];
    if (ui == 0.0) continue;
    auto row = a.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] += ui * v[j];
  }
}

Matrix uniform_init(Rng& rng, std::size_t rows, std::size_t cols, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("uniform_init: scale must be > 0");
  Matrix m(rows, cols);
  for (double& v : m.values()) v = scale * (2.0 * rng.uniform01() - 1.0);
  return m;
}

bool all_finite(std::span<const double> values) noexcept {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace newsblend
