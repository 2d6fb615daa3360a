// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>

#include "irsmba/channel/complex_matrix.hpp"
#include "irsmba/random.hpp"
#include "irsmba/tensor/tensor.hpp"

namespace irsmba::testing {

inline tensor::Tensor random_tensor(tensor::Shape dims, Rng& rng, double scale = 1.0) {
  tensor::Tensor t(std::move(dims));
  std::normal_distribution<double> n(0.0, scale);
  for (double& v : t.data()) v = n(rng);
  return t;
}

inline ComplexMatrix random_complex(std::size_t rows, std::size_t cols, Rng& rng) {
  ComplexMatrix m(rows, cols);
  for (cplx& v : m.data()) v = complex_gaussian(rng, 1.0);
  return m;
}

}  // namespace irsmba::testing
