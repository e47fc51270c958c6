#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "tada/errors.hpp"

namespace tada::gradnet {

/// Dense N-dimensional real array, row-major, 64-bit.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> s) : shape(std::move(s)) {
    data.assign(count(shape), 0.0);
  }
  Tensor(std::vector<std::size_t> s, std::vector<double> d)
      : shape(std::move(s)), data(std::move(d)) {
    if (data.size() != count(shape)) throw ShapeMismatch("tensor data/shape mismatch");
  }

  static std::size_t count(const std::vector<std::size_t>& s) {
    std::size_t n = 1;
    for (std::size_t d : s) n *= d;
    return n;
  }

  static Tensor zeros(std::vector<std::size_t> s) { return Tensor(std::move(s)); }

  static Tensor scalar(double v) { return Tensor({1}, {v}); }

  static Tensor vector1d(std::vector<double> d) {
    const std::size_t n = d.size();
    return Tensor({n}, std::move(d));
  }

  std::size_t size() const { return data.size(); }
  double& operator[](std::size_t i) { return data[i]; }
  double operator[](std::size_t i) const { return data[i]; }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }

  bool finite() const {
    for (double v : data)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

}  // namespace tada::gradnet
