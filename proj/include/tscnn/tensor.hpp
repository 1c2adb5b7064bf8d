#ifndef TSCNN_TENSOR_HPP
#define TSCNN_TENSOR_HPP

#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <vector>

#include "tscnn/error.hpp"

namespace tscnn {

// Dense row-major n-dimensional array of 64-bit reals.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> s)
      : shape(std::move(s)),
        data(std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                             std::multiplies<>()),
             0.0) {}

  static Tensor zeros(std::initializer_list<std::size_t> dims) {
    return Tensor(std::vector<std::size_t>(dims));
  }

  std::size_t size() const { return data.size(); }
  std::size_t dim(std::size_t i) const { return shape[i]; }

  double& operator[](std::size_t i) { return data[i]; }
  double operator[](std::size_t i) const { return data[i]; }

  // 2-D access: [rows, cols].
  double& at(std::size_t r, std::size_t c) { return data[r * shape[1] + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * shape[1] + c]; }

  // 3-D access: [d0, d1, d2].
  double& at(std::size_t i, std::size_t j, std::size_t k) {
    return data[(i * shape[1] + j) * shape[2] + k];
  }
  double at(std::size_t i, std::size_t j, std::size_t k) const {
    return data[(i * shape[1] + j) * shape[2] + k];
  }

  void fill(double v) { std::fill(data.begin(), data.end(), v); }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }

  void add_scaled(const Tensor& o, double s = 1.0) {
    if (!same_shape(o)) throw NumericError("tensor shape mismatch in add");
    for (std::size_t i = 0; i < data.size(); ++i) data[i] += s * o.data[i];
  }
};

}  // namespace tscnn

#endif
