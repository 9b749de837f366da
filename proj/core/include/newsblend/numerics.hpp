// SPDX-License-Identifier: Apache-2.0
/**
 * @file   numerics.hpp
 * @brief  Dense row-major matrices, activations and a portable seeded PRNG.
 *
 * Everything in the library is double precision. Vectors are plain
 * std::vector<double>; Matrix owns a contiguous row-major buffer.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace newsblend {

using Vector = std::vector<double>;

/// Thrown when operand shapes do not conform. The message carries the shapes.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }
  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }

  std::string shape_string() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline std::span<double> values(Matrix& m) noexcept { return m.values(); }
inline std::span<const double> values(const Matrix& m) noexcept { return m.values(); }
inline std::span<double> values(Vector& v) noexcept { return v; }
inline std::span<const double> values(const Vector& v) noexcept { return v; }

/**
 * xoshiro256** seeded through splitmix64.
 *
 * The state is expanded from the 64-bit seed by four successive splitmix64
 * outputs. uniform01() takes the top 53 bits of next_u64() and multiplies by
 * 2^-53, so streams are bit-identical on every platform with IEEE doubles.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform in [0, 1).
  double uniform01() noexcept;
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) noexcept;
  /// Standard normal via Box-Muller (consumes two uniforms per call).
  double normal() noexcept;

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t state_[4];
};

/// splitmix64 finalizer; used to derive independent child seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

double sigmoid(double x) noexcept;
double tanh_act(double x) noexcept;
double relu(double x) noexcept;

Matrix matmul(const Matrix& a, const Matrix& b);
Vector matvec(const Matrix& a, std::span<const double> x);

// In-place kernels used by the cell passes. Shapes are checked by callers.
void matvec_accumulate(const Matrix& a, std::span<const double> x, std::span<double> y) noexcept;
void matvec_transposed_accumulate(const Matrix& a, std::span<const double> v,
                                  std::span<double> y) noexcept;
void outer_accumulate(Matrix& a, std::span<const double> u, std::span<const double> v) noexcept;

Matrix uniform_init(Rng& rng, std::size_t rows, std::size_t cols, double scale);

bool all_finite(std::span<const double> values) noexcept;

}  // namespace newsblend
