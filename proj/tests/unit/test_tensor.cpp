// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "irsmba/error.hpp"
#include "irsmba/tensor/checkpoint.hpp"
#include "irsmba/tensor/gradcheck.hpp"
#include "irsmba/tensor/ops.hpp"
#include "irsmba/tensor/optim.hpp"
#include "test_util.hpp"

using namespace irsmba;
using namespace irsmba::tensor;
using irsmba::testing::random_tensor;

namespace {

// Straight loop convolution with zero "same" padding.
Tensor naive_conv(const Tensor& x, const Tensor& w, const Tensor& b) {
  const std::size_t n = x.dim(0), ci = x.dim(1), h = x.dim(2), wd = x.dim(3);
  const std::size_t co = w.dim(0), s = w.dim(2);
  const long pad = static_cast<long>(s / 2);
  Tensor y({n, co, h, wd});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t o = 0; o < co; ++o)
      for (std::size_t r = 0; r < h; ++r)
        for (std::size_t c = 0; c < wd; ++c) {
          double acc = b[o];
          for (std::size_t k = 0; k < ci; ++k)
            for (std::size_t a = 0; a < s; ++a)
              for (std::size_t e = 0; e < s; ++e) {
                const long rr = static_cast<long>(r + a) - pad, cc = static_cast<long>(c + e) - pad;
                if (rr < 0 || cc < 0 || rr >= static_cast<long>(h) || cc >= static_cast<long>(wd)) continue;
                acc += w.at({o, k, a, e}) * x.at({i, k, static_cast<std::size_t>(rr), static_cast<std::size_t>(cc)});
              }
          y.at({i, o, r, c}) = acc;
        }
  return y;
}

Tensor eval1(const std::function<Var(Graph&, Var)>& fn, const Tensor& x) {
  Graph g(false);
  return fn(g, g.constant(x)).value();
}

// Loss with O(1) random weights so every gradient entry is well scaled.
std::function<Var(Graph&, Var)> weighted(std::function<Var(Graph&, Var)> f, const Tensor& w) {
  return [f, w](Graph& g, Var x) { return weighted_sum(f(g, x), w); };
}

}  // namespace

TEST(Tensor, ShapeInvariants) {
  Tensor t({2, 3, 4});
  EXPECT_EQ(t.size(), 24u);
  EXPECT_THROW(Tensor({2, 2}, std::vector<double>(3)), DimensionError);
  EXPECT_THROW(t.reshaped({5, 5}), DimensionError);
  t.set_requires_grad(true);
  EXPECT_EQ(t.grad().size(), t.size());
}

TEST(Conv2d, IdentityKernelIsIdentityMap) {
  Rng rng(1);
  const Tensor x = random_tensor({2, 1, 4, 5}, rng);
  const Tensor y = eval1([](Graph& g, Var v) { return conv2d(v, g.constant(Tensor({1, 1, 1, 1}, 1.0)), g.constant(Tensor({1}))); }, x);
  EXPECT_EQ(y, x);
  const Tensor y3 = eval1(
      [](Graph& g, Var v) {
        Tensor k({1, 1, 3, 3});
        k.at({0, 0, 1, 1}) = 1.0;
        return conv2d(v, g.constant(k), g.constant(Tensor({1})));
      },
      x);
  EXPECT_EQ(y3, x);
}

TEST(Conv2d, ZeroKernelsGiveZeroOutput) {
  Rng rng(2);
  const Tensor x = random_tensor({1, 3, 4, 4}, rng);
  const Tensor y = eval1([](Graph& g, Var v) { return conv2d(v, g.constant(Tensor({2, 3, 3, 3})), g.constant(Tensor({2}))); }, x);
  for (double v : y.data()) EXPECT_EQ(v, 0.0);
}

TEST(Conv2d, MatchesLoopOracle) {
  Rng rng(3);
  for (std::size_t s : {1u, 3u, 5u}) {
    const Tensor x = random_tensor({2, 3, 4, 6}, rng);
    const Tensor w = random_tensor({4, 3, s, s}, rng);
    const Tensor b = random_tensor({4}, rng);
    Graph g(false);
    const Tensor y = conv2d(g.constant(x), g.constant(w), g.constant(b)).value();
    const Tensor ref = naive_conv(x, w, b);
    for (std::size_t i = 0; i < y.size(); ++i) EXPECT_NEAR(y[i], ref[i], 1e-12);
  }
}

TEST(Conv2d, UnbatchedInputKeepsRank) {
  Rng rng(4);
  const Tensor x = random_tensor({2, 3, 3}, rng);
  Graph g(false);
  const Tensor y = conv2d(g.constant(x), g.constant(random_tensor({5, 2, 3, 3}, rng)), g.constant(Tensor({5}))).value();
  EXPECT_EQ(y.dims(), (Shape{5, 3, 3}));
}

TEST(Conv2d, ChannelMismatchIsDimensionError) {
  Graph g(false);
  Var x = g.constant(Tensor({1, 2, 3, 3}));
  EXPECT_THROW(conv2d(x, g.constant(Tensor({1, 3, 3, 3})), g.constant(Tensor({1}))), DimensionError);
  EXPECT_THROW(conv2d(x, g.constant(Tensor({1, 2, 2, 2})), g.constant(Tensor({1}))), DimensionError);
}

TEST(Conv2d, GradientMatchesFiniteDifferences) {
  Rng rng(5);
  Tensor x = random_tensor({2, 3, 4, 4}, rng);
  Tensor w = random_tensor({2, 3, 3, 3}, rng);
  Tensor b = random_tensor({2}, rng);
  const Tensor c = random_tensor({2, 2, 4, 4}, rng);
  std::vector<Tensor*> in{&x, &w, &b};
  const double err = grad_check(
      [&](Graph&, std::span<const Var> v) { return weighted_sum(conv2d(v[0], v[1], v[2]), c); }, in);
  EXPECT_LT(err, 1e-6);
}

TEST(BatchNorm, TrainModeNormalisesPerChannel) {
  Rng rng(6);
  Tensor x = random_tensor({4, 3, 2, 5}, rng, 3.0);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += 7.0;
  BatchNormState st(3);
  Graph g(false);
  const Tensor y = batchnorm(g.constant(x), g.constant(Tensor({3}, 1.0)), g.constant(Tensor({3})), st, BnMode::train).value();
  for (std::size_t c = 0; c < 3; ++c) {
    double mean = 0.0, sq = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t p = 0; p < 10; ++p) {
        const double v = y[(i * 3 + c) * 10 + p];
        mean += v;
        sq += v * v;
        ++n;
      }
    mean /= static_cast<double>(n);
    const double var = sq / static_cast<double>(n) - mean * mean;
    EXPECT_LT(std::abs(mean), 1e-10);
    // epsilon in the denominator shrinks the variance slightly below one
    EXPECT_NEAR(var, 1.0, 1e-5);
  }
}

TEST(BatchNorm, RunningStatisticsUseMomentum) {
  Rng rng(7);
  const Tensor x = random_tensor({3, 2, 2, 2}, rng);
  BatchNormState st(2);
  Graph g(false);
  batchnorm(g.constant(x), g.constant(Tensor({2}, 1.0)), g.constant(Tensor({2})), st, BnMode::train);
  for (std::size_t c = 0; c < 2; ++c) {
    double mean = 0.0;
    std::vector<double> vals;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t p = 0; p < 4; ++p) vals.push_back(x[(i * 2 + c) * 4 + p]);
    for (double v : vals) mean += v / 12.0;
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    EXPECT_NEAR(st.running_mean[c], 0.1 * mean, 1e-14);
    EXPECT_NEAR(st.running_var[c], 0.9 + 0.1 * ss / 11.0, 1e-14);
  }
  // eval mode applies the stored statistics
  const Tensor y = batchnorm(g.constant(x), g.constant(Tensor({2}, 1.0)), g.constant(Tensor({2})), st, BnMode::eval).value();
  EXPECT_NEAR(y[0], (x[0] - st.running_mean[0]) / std::sqrt(st.running_var[0] + 1e-5), 1e-14);
}

TEST(BatchNorm, ZeroGammaAndConstantChannel) {
  Rng rng(8);
  const Tensor x = random_tensor({2, 2, 3, 3}, rng);
  BatchNormState st(2);
  Graph g(false);
  const Tensor y = batchnorm(g.constant(x), g.constant(Tensor({2})), g.constant(Tensor({2})), st, BnMode::train).value();
  for (double v : y.data()) EXPECT_EQ(v, 0.0);
  const Tensor flat({2, 2, 3, 3}, 5.0);
  const Tensor z = batchnorm(g.constant(flat), g.constant(Tensor({2}, 1.0)), g.constant(Tensor({2})), st, BnMode::train).value();
  for (double v : z.data()) EXPECT_EQ(v, 0.0);
}

TEST(BatchNorm, GradientMatchesFiniteDifferences) {
  Rng rng(9);
  Tensor x = random_tensor({4, 2, 3, 3}, rng);
  Tensor gamma = random_tensor({2}, rng);
  Tensor beta = random_tensor({2}, rng);
  const Tensor c = random_tensor({4, 2, 3, 3}, rng);
  BatchNormState st(2);
  std::vector<Tensor*> in{&x, &gamma, &beta};
  const double err = grad_check(
      [&](Graph&, std::span<const Var> v) { return weighted_sum(batchnorm(v[0], v[1], v[2], st, BnMode::train), c); }, in);
  EXPECT_LT(err, 1e-5);
}

TEST(BatchNorm, TrainModeNeedsTwoValuesPerChannel) {
  BatchNormState st(1);
  Graph g(false);
  EXPECT_THROW(batchnorm(g.constant(Tensor({1, 1, 1, 1})), g.constant(Tensor({1}, 1.0)), g.constant(Tensor({1})), st,
                         BnMode::train),
               PreconditionError);
}

TEST(Activations, ScalarExamples) {
  Graph g(false);
  Var x = g.constant(Tensor({3}, {-1.0, 0.0, 2.0}));
  const Tensor r = relu(x).value();
  EXPECT_EQ(r, Tensor({3}, {0.0, 0.0, 2.0}));
  const Tensor p = prelu(x, g.constant(Tensor({1}, 0.25))).value();
  EXPECT_EQ(p, Tensor({3}, {-0.25, 0.0, 2.0}));
}

TEST(Activations, SoftmaxOfEqualRowIsUniform) {
  Graph g(false);
  const Tensor s = softmax(g.constant(Tensor({2, 5}, 3.7)), 1).value();
  for (double v : s.data()) EXPECT_DOUBLE_EQ(v, 0.2);
}

TEST(Activations, SoftmaxRowsSumToOne) {
  Rng rng(10);
  for (std::size_t axis = 0; axis < 3; ++axis) {
    const Tensor x = random_tensor({3, 4, 5}, rng, 10.0);
    Graph g(false);
    const Tensor s = softmax(g.constant(x), axis).value();
    const Shape d = x.dims();
    for (std::size_t i = 0; i < d[(axis + 1) % 3]; ++i)
      for (std::size_t j = 0; j < d[(axis + 2) % 3]; ++j) {
        double total = 0.0;
        for (std::size_t a = 0; a < d[axis]; ++a) {
          std::size_t idx[3];
          idx[axis] = a;
          idx[(axis + 1) % 3] = i;
          idx[(axis + 2) % 3] = j;
          const double v = s.at({idx[0], idx[1], idx[2]});
          EXPECT_GE(v, 0.0);
          total += v;
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
      }
  }
}

TEST(Activations, SoftmaxIsStableForLargeLogits) {
  Graph g(false);
  const Tensor s = softmax(g.constant(Tensor({2}, {1000.0, 1000.0 - std::log(3.0)})), 0).value();
  EXPECT_NEAR(s[0], 0.75, 1e-12);
}

TEST(Activations, SoftmaxGradient) {
  Rng rng(11);
  const Tensor x = random_tensor({3, 4}, rng);
  const Tensor c = random_tensor({3, 4}, rng);
  EXPECT_LT(grad_check(weighted([](Graph&, Var v) { return softmax(v, 1); }, c), x), 1e-6);
}

TEST(Ops, PermuteReshapeBmmMatchOracles) {
  Rng rng(12);
  const Tensor a = random_tensor({2, 3, 4}, rng);
  const Tensor b = random_tensor({2, 4, 5}, rng);
  Graph g(false);
  const Tensor p = permute(g.constant(a), {2, 0, 1}).value();
  EXPECT_EQ(p.dims(), (Shape{4, 2, 3}));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(p.at({k, i, j}), a.at({i, j, k}));
  const Tensor m = bmm(g.constant(a), g.constant(b)).value();
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 5; ++c) {
        double acc = 0.0;
        for (std::size_t k = 0; k < 4; ++k) acc += a.at({i, r, k}) * b.at({i, k, c});
        EXPECT_NEAR(m.at({i, r, c}), acc, 1e-12);
      }
  const Tensor bt = permute(g.constant(b), {0, 2, 1}).value();
  const Tensor mt = bmm(g.constant(a), g.constant(bt), true).value();
  for (std::size_t i = 0; i < m.size(); ++i) EXPECT_NEAR(mt[i], m[i], 1e-12);
  EXPECT_THROW(bmm(g.constant(a), g.constant(a)), DimensionError);
  EXPECT_EQ(reshape(g.constant(a), {6, 4}).value().storage(), a.storage());
}

// Every differentiable op, randomised over 20 seeds.
class OpGradients : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(OpGradients, MatchFiniteDifferences) {
  Rng rng(GetParam());
  auto rt = [&](Shape d) { return random_tensor(std::move(d), rng); };
  const double tol = 1e-4;
  Tensor a = rt({2, 3, 4}), b = rt({2, 3, 4}), c = rt({2, 3, 4});
  auto check2 = [&](auto f) {
    std::vector<Tensor*> in{&a, &b};
    return grad_check([&](Graph&, std::span<const Var> v) { return weighted_sum(f(v[0], v[1]), c); }, in);
  };
  EXPECT_LT(check2([](Var x, Var y) { return add(x, y); }), tol);
  EXPECT_LT(check2([](Var x, Var y) { return sub(x, y); }), tol);
  EXPECT_LT(check2([](Var x, Var y) { return mul(x, y); }), tol);
  EXPECT_LT(grad_check(weighted([](Graph&, Var x) { return scale(x, -1.7); }, c), a), tol);
  EXPECT_LT(grad_check(weighted([](Graph&, Var x) { return relu(x); }, c), a), tol);
  {
    Tensor slope({1}, 0.3);
    std::vector<Tensor*> in{&a, &slope};
    EXPECT_LT(grad_check([&](Graph&, std::span<const Var> v) { return weighted_sum(prelu(v[0], v[1]), c); }, in), tol);
  }
  for (std::size_t axis = 0; axis < 3; ++axis) {
    EXPECT_LT(grad_check(weighted([axis](Graph&, Var x) { return softmax(x, axis); }, c), a), tol);
  }
  {
    Tensor x = rt({2, 2, 3, 4}), w = rt({3, 2, 3, 3}), bias = rt({3});
    const Tensor cw = rt({2, 3, 3, 4});
    std::vector<Tensor*> in{&x, &w, &bias};
    EXPECT_LT(grad_check([&](Graph&, std::span<const Var> v) { return weighted_sum(conv2d(v[0], v[1], v[2]), cw); }, in), tol);
  }
  {
    Tensor x = rt({3, 2, 2, 3}), gamma = rt({2}), beta = rt({2});
    const Tensor cw = rt({3, 2, 2, 3});
    BatchNormState st(2);
    std::vector<Tensor*> in{&x, &gamma, &beta};
    EXPECT_LT(grad_check([&](Graph&, std::span<const Var> v) {
                return weighted_sum(batchnorm(v[0], v[1], v[2], st, BnMode::train), cw);
              },
                         in),
              tol);
    EXPECT_LT(grad_check([&](Graph&, std::span<const Var> v) {
                return weighted_sum(batchnorm(v[0], v[1], v[2], st, BnMode::eval, false), cw);
              },
                         in),
              tol);
  }
  {
    const Tensor cp = rt({4, 2, 3});
    EXPECT_LT(grad_check(weighted([](Graph&, Var x) { return permute(x, {2, 0, 1}); }, cp), a), tol);
    const Tensor cr = rt({6, 4});
    EXPECT_LT(grad_check(weighted([](Graph&, Var x) { return reshape(x, {6, 4}); }, cr), a), tol);
  }
  {
    Tensor x = rt({2, 3, 4}), y = rt({2, 4, 5}), yt = rt({2, 5, 4});
    const Tensor cm = rt({2, 3, 5});
    std::vector<Tensor*> in{&x, &y};
    EXPECT_LT(grad_check([&](Graph&, std::span<const Var> v) { return weighted_sum(bmm(v[0], v[1]), cm); }, in), tol);
    std::vector<Tensor*> in_t{&x, &yt};
    EXPECT_LT(grad_check([&](Graph&, std::span<const Var> v) { return weighted_sum(bmm(v[0], v[1], true), cm); }, in_t), tol);
  }
  EXPECT_LT(grad_check([](Graph&, Var x) { return scale(sum(x), 0.5); }, a), tol);
  EXPECT_LT(grad_check([&](Graph&, Var x) { return squared_error(x, b, 0.37); }, a), tol);
}

INSTANTIATE_TEST_SUITE_P(Seeds, OpGradients, ::testing::Range<std::uint64_t>(1, 21));

TEST(GradCheck, ExactForLinearSum) {
  Rng rng(13);
  EXPECT_LT(grad_check([](Graph&, Var x) { return sum(x); }, random_tensor({3, 3}, rng)), 1e-10);
}

TEST(GradCheck, ComposedStack) {
  Rng rng(14);
  Tensor x = random_tensor({2, 2, 3, 3}, rng), w = random_tensor({3, 2, 3, 3}, rng), bias = random_tensor({3}, rng);
  Tensor gamma = random_tensor({3}, rng), beta = random_tensor({3}, rng), slope({1}, 0.25);
  const Tensor c = random_tensor({2, 3, 3, 3}, rng);
  BatchNormState st(3);
  // conv bias cancels under batch norm
  std::vector<Tensor*> in{&x, &w, &gamma, &beta, &slope};
  const double err = grad_check(
      [&](Graph& g, std::span<const Var> v) {
        Var h = batchnorm(conv2d(v[0], v[1], g.constant(bias)), v[2], v[3], st, BnMode::train);
        return weighted_sum(softmax(prelu(h, v[4]), 3), c);
      },
      in);
  EXPECT_LT(err, 1e-4);
}

TEST(GradCheck, Preconditions) {
  EXPECT_THROW(grad_check([](Graph&, Var x) { return sum(x); }, Tensor()), PreconditionError);
  EXPECT_THROW(grad_check([](Graph&, Var x) { return sum(x); }, Tensor({2}), 1e-2), PreconditionError);
  Graph g(false);
  EXPECT_THROW(
      grad_check([](Graph&, Var x) { return sum(scale(x, INFINITY)); }, Tensor({2}, 1.0)), NonFiniteError);
}

TEST(Graph, NonFiniteDiagnosticNamesOp) {
  Graph g;
  Var x = g.constant(Tensor({2}, {1.0, 2.0}));
  scale(x, INFINITY);
  try {
    g.check_finite();
    FAIL();
  } catch (const NonFiniteError& e) {
    EXPECT_NE(std::string(e.what()).find("scale"), std::string::npos);
  }
}

TEST(Graph, BackwardAccumulatesIntoLeaves) {
  Tensor w({2}, {1.0, 2.0});
  w.set_requires_grad(true);
  Graph g;
  Var a = g.leaf(w);
  g.backward(sum(add(a, a)));
  EXPECT_EQ(w.grad()[0], 2.0);
  EXPECT_EQ(w.grad()[1], 2.0);
}

TEST(Ops, Deterministic) {
  auto run = [] {
    Rng rng(15);
    Tensor x = random_tensor({2, 3, 4, 4}, rng), w = random_tensor({3, 3, 3, 3}, rng), b = random_tensor({3}, rng);
    x.set_requires_grad(true);
    Graph g;
    Var y = softmax(conv2d(g.leaf(x), g.constant(w), g.constant(b)), 3);
    g.backward(weighted_sum(y, random_tensor({2, 3, 4, 4}, rng)));
    return std::make_pair(y.value(), std::vector<double>(x.grad().begin(), x.grad().end()));
  };
  const auto r1 = run(), r2 = run();
  EXPECT_EQ(r1.first, r2.first);
  EXPECT_EQ(r1.second, r2.second);
}

TEST(Adam, ZeroGradientLeavesParametersAndDecaysMoments) {
  Parameter p("p", Tensor({3}, {1.0, -2.0, 3.0}));
  Adam opt({&p}, {});
  p.value.zero_grad();
  opt.step();
  EXPECT_EQ(p.value, Tensor({3}, {1.0, -2.0, 3.0}));

  p.value.grad()[0] = 1.0;
  opt.step();
  const double m1 = opt.state().first_moment[0][0];
  const double v1 = opt.state().second_moment[0][0];
  EXPECT_GT(m1, 0.0);
  p.value.zero_grad();
  opt.step();
  EXPECT_DOUBLE_EQ(opt.state().first_moment[0][0], 0.9 * m1);
  EXPECT_DOUBLE_EQ(opt.state().second_moment[0][0], 0.999 * v1);
  EXPECT_EQ(opt.state().step_count, 3u);
}

TEST(Adam, ConstantGradientStepApproachesLearningRate) {
  Parameter p("p", Tensor({2}, {0.0, 0.0}));
  Adam opt({&p}, {.learning_rate = 0.01});
  double last = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const double before = p.value[0];
    p.value.grad()[0] = 3.0;
    p.value.grad()[1] = -0.5;
    opt.step();
    last = p.value[0] - before;
    if (i == 0) {
      EXPECT_NEAR(last, -0.01, 1e-9);  // bias correction makes the first step exact
    }
  }
  EXPECT_NEAR(last, -0.01, 1e-6);
  EXPECT_NEAR(p.value[1], 0.01 * 2000, 1e-3);
}

TEST(Adam, MinimisesScalarQuadratic) {
  Parameter p("x", Tensor({1}, {5.0}));
  Adam opt({&p}, {.learning_rate = 0.01});
  const double target = 2.5;
  double x = 5.0, m = 0.0, v = 0.0;
  for (int t = 1; t <= 2000; ++t) {
    opt.zero_grad();
    Graph g;
    Var leaf = g.leaf(p.value);
    g.backward(squared_error(leaf, Tensor({1}, target), 1.0));
    opt.step();
    // scalar reference update
    const double grad = 2.0 * (x - target);
    m = 0.9 * m + 0.1 * grad;
    v = 0.999 * v + 0.001 * grad * grad;
    x -= 0.01 * (m / (1.0 - std::pow(0.9, t))) / (std::sqrt(v / (1.0 - std::pow(0.999, t))) + 1e-8);
    if (t == 500) {
      EXPECT_NEAR(p.value[0], x, 1e-12);
    }
  }
  EXPECT_NEAR(p.value[0], x, 1e-12);
  EXPECT_LT(std::abs(p.value[0] - target), 1e-6);
}

TEST(Adam, NonFiniteGradientNamesParameterAndLeavesValues) {
  Parameter a("layer.weight", Tensor({2}, 1.0));
  Parameter b("layer.bias", Tensor({1}, 1.0));
  Adam opt({&a, &b}, {});
  a.value.grad()[0] = 1.0;
  b.value.grad()[0] = NAN;
  try {
    opt.step();
    FAIL();
  } catch (const NonFiniteError& e) {
    EXPECT_NE(std::string(e.what()).find("layer.bias"), std::string::npos);
  }
  EXPECT_EQ(a.value, Tensor({2}, 1.0));
}

TEST(Adam, RejectsInvalidHyperparameters) {
  Parameter p("p", Tensor({1}));
  EXPECT_THROW(Adam({&p}, {.beta1 = 1.0}), PreconditionError);
  EXPECT_THROW(Adam({&p}, {.learning_rate = 0.0}), PreconditionError);
}

TEST(LrSchedule, SteppedAndConstant) {
  LrSchedule s;
  EXPECT_DOUBLE_EQ(s.rate_at(0), 2e-4);
  EXPECT_DOUBLE_EQ(s.rate_at(149), 2e-4);
  EXPECT_DOUBLE_EQ(s.rate_at(150), 2e-4 * 0.6);
  EXPECT_DOUBLE_EQ(s.rate_at(300), 2e-4 * 0.36);
  EXPECT_DOUBLE_EQ(LrSchedule::constant(1e-4).rate_at(1000), 1e-4);
  LrSchedule bad;
  bad.decay_factor = 1.5;
  EXPECT_THROW(bad.validate(), PreconditionError);
}

TEST(Checkpoint, RoundTripAndLayout) {
  Rng rng(16);
  std::vector<NamedTensor> blobs{{"a.weight", random_tensor({2, 3}, rng)}, {"b", Tensor({1}, {-0.0})}};
  const auto bytes = encode_checkpoint(blobs);
  ASSERT_GE(bytes.size(), 10u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "IRSW");
  EXPECT_EQ(bytes[4] | (bytes[5] << 8), kCheckpointVersion);
  EXPECT_EQ(bytes[6], 2);
  // blob 0: name length, name, ndim, dims
  EXPECT_EQ(bytes[10], 8);
  EXPECT_EQ(std::string(bytes.begin() + 12, bytes.begin() + 20), "a.weight");
  EXPECT_EQ(bytes[20], 2);
  const std::size_t expected = 10 + (2 + 8 + 1 + 8 + 6 * 8) + (2 + 1 + 1 + 4 + 8);
  EXPECT_EQ(bytes.size(), expected);
  const auto back = decode_checkpoint(bytes);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].name, "a.weight");
  EXPECT_EQ(back[0].tensor, blobs[0].tensor);
  EXPECT_TRUE(std::signbit(back[1].tensor[0]));
}

TEST(Checkpoint, RejectsCorruptInput) {
  auto bytes = encode_checkpoint({{"x", Tensor({2}, 1.0)}});
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(decode_checkpoint(bad_magic), IoError);
  bytes.pop_back();
  EXPECT_THROW(decode_checkpoint(bytes), IoError);
}
