// SPDX-License-Identifier: Apache-2.0
#include "irsmba/tensor/tensor.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "irsmba/error.hpp"

namespace irsmba::tensor {

std::size_t shape_numel(const Shape& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

std::string shape_str(const Shape& dims) {
  std::string s = "[";
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(dims[i]);
  }
  return s + "]";
}

Tensor::Tensor(Shape dims, double fill) : dims_(std::move(dims)) {
  if (std::find(dims_.begin(), dims_.end(), 0u) != dims_.end()) {
    throw DimensionError("tensor dims must be positive, got " + shape_str(dims_));
  }
  data_.assign(shape_numel(dims_), fill);
}

Tensor::Tensor(Shape dims, std::vector<double> data) : dims_(std::move(dims)), data_(std::move(data)) {
  if (std::find(dims_.begin(), dims_.end(), 0u) != dims_.end()) {
    throw DimensionError("tensor dims must be positive, got " + shape_str(dims_));
  }
  if (shape_numel(dims_) != data_.size()) {
    throw DimensionError("tensor data length " + std::to_string(data_.size()) +
                         " does not match dims " + shape_str(dims_));
  }
}

std::size_t Tensor::offset(std::initializer_list<std::size_t> index) const {
  if (index.size() != dims_.size()) {
    throw DimensionError("index rank " + std::to_string(index.size()) + " vs tensor rank " +
                         std::to_string(dims_.size()));
  }
  std::size_t off = 0;
  std::size_t axis = 0;
  for (std::size_t i : index) {
    if (i >= dims_[axis]) throw DimensionError("index out of range on axis " + std::to_string(axis));
    off = off * dims_[axis] + i;
    ++axis;
  }
  return off;
}

double& Tensor::at(std::initializer_list<std::size_t> index) { return data_[offset(index)]; }
double Tensor::at(std::initializer_list<std::size_t> index) const { return data_[offset(index)]; }

Tensor Tensor::reshaped(Shape dims) const {
  if (shape_numel(dims) != data_.size()) {
    throw DimensionError("cannot reshape " + shape_str(dims_) + " to " + shape_str(dims));
  }
  return Tensor(std::move(dims), data_);
}

void Tensor::set_requires_grad(bool on) {
  requires_grad_ = on;
  if (!on) grad_.clear();
}

std::span<double> Tensor::grad() {
  if (grad_.size() != data_.size()) grad_.assign(data_.size(), 0.0);
  return grad_;
}

void Tensor::zero_grad() { grad_.assign(data_.size(), 0.0); }

void Tensor::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

}  // namespace irsmba::tensor
