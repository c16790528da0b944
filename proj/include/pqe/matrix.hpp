#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace pqe {

// Row-major float32 matrix. Storage precision matches the on-disk formats;
// all arithmetic on top of it is done in double.
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<float> data;

  Mat() = default;
  Mat(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0f) {}

  std::span<const float> row(std::size_t i) const {
    return {data.data() + i * cols, cols};
  }
  std::span<float> row(std::size_t i) {
    return {data.data() + i * cols, cols};
  }

  bool all_finite() const {
    for (float v : data)
      if (!std::isfinite(v)) return false;
    return true;
  }

  friend bool operator==(const Mat&, const Mat&) = default;
};

// Row-major double matrix for intermediate math (centroids mid-iteration,
// gradients).
struct DMat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DMat() = default;
  DMat(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  std::span<const double> row(std::size_t i) const {
    return {data.data() + i * cols, cols};
  }
  std::span<double> row(std::size_t i) {
    return {data.data() + i * cols, cols};
  }

  Mat to_float() const {
    Mat m(rows, cols);
    for (std::size_t i = 0; i < data.size(); ++i)
      m.data[i] = static_cast<float>(data[i]);
    return m;
  }

  static DMat from_float(const Mat& m) {
    DMat d(m.rows, m.cols);
    for (std::size_t i = 0; i < m.data.size(); ++i) d.data[i] = m.data[i];
    return d;
  }
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: dim mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double dot(std::span<const double> a, std::span<const float> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: dim mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i] * static_cast<double>(b[i]);
  return s;
}

inline double squared_distance(std::span<const float> a,
                               std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = static_cast<double>(a[i]) - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace pqe
