#pragma once

#include <algorithm>
#include <cassert>
#include <complex>
#include <cstdint>
#include <numeric>
#include <vector>

namespace dmdcf {

using Complex = std::complex<double>;

// Dense row-major 2D array. The workhorse container for feature channels,
// response maps, masks and spectra.
template <typename T>
class Array2D {
 public:
  Array2D() : rows_(0), cols_(0) {}
  Array2D(int rows, int cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {
    assert(rows >= 0 && cols >= 0);
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(int r, int c) {
    assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
    return data_[static_cast<size_t>(r) * cols_ + c];
  }
  const T& operator()(int r, int c) const {
    assert(r >= 0 && r < rows_ && c >= 0 && c < cols_);
    return data_[static_cast<size_t>(r) * cols_ + c];
  }

  T& operator[](size_t i) { return data_[i]; }
  const T& operator[](size_t i) const { return data_[i]; }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  bool same_shape(const Array2D& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }

  void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

  friend bool operator==(const Array2D& a, const Array2D& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  int rows_;
  int cols_;
  std::vector<T> data_;
};

using RealArray = Array2D<double>;
using ComplexArray = Array2D<Complex>;
using ByteArray = Array2D<uint8_t>;

inline double sum(const RealArray& a) {
  return std::accumulate(a.begin(), a.end(), 0.0);
}

inline double max_abs(const RealArray& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

inline double l2_norm(const RealArray& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

inline double l2_norm(const ComplexArray& a) {
  double s = 0.0;
  for (const Complex& v : a) s += std::norm(v);
  return std::sqrt(s);
}

}  // namespace dmdcf
