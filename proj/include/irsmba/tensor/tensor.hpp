// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace irsmba::tensor {

using Shape = std::vector<std::size_t>;

std::size_t shape_numel(const Shape& dims);
std::string shape_str(const Shape& dims);

/// Dense row-major N-d array of doubles with an optional gradient buffer.
///
/// The gradient buffer is allocated on demand and always matches `dims()`.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape dims, double fill = 0.0);
  Tensor(Shape dims, std::vector<double> data);

  static Tensor scalar(double v) { return Tensor({1}, {v}); }

  const Shape& dims() const { return dims_; }
  std::size_t ndim() const { return dims_.size(); }
  std::size_t dim(std::size_t axis) const { return dims_.at(axis); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  std::vector<double>& storage() { return data_; }
  const std::vector<double>& storage() const { return data_; }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  double& at(std::initializer_list<std::size_t> index);
  double at(std::initializer_list<std::size_t> index) const;

  /// Same data under a new shape with identical element count.
  Tensor reshaped(Shape dims) const;

  bool requires_grad() const { return requires_grad_; }
  void set_requires_grad(bool on);

  bool has_grad() const { return !grad_.empty(); }
  std::span<double> grad();
  std::span<const double> grad() const { return grad_; }
  void zero_grad();

  void fill(double v);

  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.dims_ == b.dims_ && a.data_ == b.data_;
  }

 private:
  std::size_t offset(std::initializer_list<std::size_t> index) const;

  Shape dims_;
  std::vector<double> data_;
  bool requires_grad_ = false;
  std::vector<double> grad_;
};

}  // namespace irsmba::tensor
