// SPDX-License-Identifier: Apache-2.0
#include "irsmba/tensor/optim.hpp"

#include <cmath>
#include <utility>

#include "irsmba/error.hpp"

namespace irsmba::tensor {

Adam::Adam(std::vector<Parameter*> params, AdamConfig config) : params_(std::move(params)) {
  if (!(config.beta1 > 0.0 && config.beta1 < 1.0) || !(config.beta2 > 0.0 && config.beta2 < 1.0)) {
    throw PreconditionError("adam: beta1 and beta2 must lie in (0, 1)");
  }
  if (!(config.epsilon > 0.0) || !(config.learning_rate > 0.0)) {
    throw PreconditionError("adam: epsilon and learning rate must be positive");
  }
  state_.config = config;
  for (Parameter* p : params_) {
    state_.first_moment.emplace_back(p->value.size(), 0.0);
    state_.second_moment.emplace_back(p->value.size(), 0.0);
  }
}

void Adam::set_learning_rate(double lr) {
  if (!(lr > 0.0)) throw PreconditionError("adam: learning rate must be positive");
  state_.config.learning_rate = lr;
}

void Adam::zero_grad() {
  for (Parameter* p : params_) p->value.zero_grad();
}

void Adam::step() {
  for (Parameter* p : params_) {
    if (!p->value.has_grad()) continue;
    const auto g = std::as_const(p->value).grad();
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!std::isfinite(g[i])) {
        throw NonFiniteError("adam: non-finite gradient in parameter '" + p->name + "' at element " +
                             std::to_string(i) + " (step " + std::to_string(state_.step_count + 1) + ")");
      }
    }
  }
  ++state_.step_count;
  const auto& c = state_.config;
  const double t = static_cast<double>(state_.step_count);
  const double bc1 = 1.0 - std::pow(c.beta1, t);
  const double bc2 = 1.0 - std::pow(c.beta2, t);
  for (std::size_t k = 0; k < params_.size(); ++k) {
    Parameter* p = params_[k];
    auto& m = state_.first_moment[k];
    auto& v = state_.second_moment[k];
    auto w = p->value.data();
    if (!p->value.has_grad()) {
      for (std::size_t i = 0; i < m.size(); ++i) {
        m[i] *= c.beta1;
        v[i] *= c.beta2;
      }
      continue;
    }
    const auto g = std::as_const(p->value).grad();
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g[i];
      v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g[i] * g[i];
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      w[i] -= c.learning_rate * mhat / (std::sqrt(vhat) + c.epsilon);
    }
  }
}

void LrSchedule::validate() const {
  if (!(initial_rate > 0.0)) throw PreconditionError("lr schedule: initial rate must be positive");
  if (!(decay_factor > 0.0 && decay_factor <= 1.0)) throw PreconditionError("lr schedule: decay factor must lie in (0, 1]");
  if (decay_interval_epochs == 0) throw PreconditionError("lr schedule: decay interval must be positive");
}

double LrSchedule::rate_at(std::size_t epoch) const {
  if (mode == Mode::constant) return initial_rate;
  return initial_rate * std::pow(decay_factor, static_cast<double>(epoch / decay_interval_epochs));
}

}  // namespace irsmba::tensor
