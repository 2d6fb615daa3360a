// SPDX-License-Identifier: Apache-2.0
#include "irsmba/tensor/ops.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "irsmba/error.hpp"

namespace irsmba::tensor {
namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatMap = Eigen::Map<RowMat>;
using ConstMatMap = Eigen::Map<const RowMat>;
using Grad = std::vector<double>;

void require_same_dims(const char* op, Var a, Var b) {
  if (a.dims() != b.dims()) {
    throw DimensionError(std::string(op) + ": dims " + shape_str(a.dims()) + " vs " + shape_str(b.dims()));
  }
}

void accumulate(Graph& g, Var v, const Grad& delta) {
  if (!g.needs_grad(v)) return;
  auto& buf = g.grad_buffer(v);
  for (std::size_t i = 0; i < delta.size(); ++i) buf[i] += delta[i];
}

std::size_t prod(Shape::const_iterator first, Shape::const_iterator last) {
  return std::accumulate(first, last, std::size_t{1}, std::multiplies<>());
}

}  // namespace

Var add(Var a, Var b) {
  require_same_dims("add", a, b);
  Tensor out(a.dims());
  const auto& x = a.value().storage();
  const auto& y = b.value().storage();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] + y[i];
  return a.graph->record("add", std::move(out), {a, b}, [a, b](Graph& g, Var, const Grad& og) {
    accumulate(g, a, og);
    accumulate(g, b, og);
  });
}

Var sub(Var a, Var b) {
  require_same_dims("sub", a, b);
  Tensor out(a.dims());
  const auto& x = a.value().storage();
  const auto& y = b.value().storage();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] - y[i];
  return a.graph->record("sub", std::move(out), {a, b}, [a, b](Graph& g, Var, const Grad& og) {
    accumulate(g, a, og);
    if (g.needs_grad(b)) {
      auto& gb = g.grad_buffer(b);
      for (std::size_t i = 0; i < og.size(); ++i) gb[i] -= og[i];
    }
  });
}

Var mul(Var a, Var b) {
  require_same_dims("mul", a, b);
  Tensor out(a.dims());
  const auto& x = a.value().storage();
  const auto& y = b.value().storage();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] * y[i];
  return a.graph->record("mul", std::move(out), {a, b}, [a, b](Graph& g, Var, const Grad& og) {
    const auto& x = a.value().storage();
    const auto& y = b.value().storage();
    if (g.needs_grad(a)) {
      auto& ga = g.grad_buffer(a);
      for (std::size_t i = 0; i < og.size(); ++i) ga[i] += og[i] * y[i];
    }
    if (g.needs_grad(b)) {
      auto& gb = g.grad_buffer(b);
      for (std::size_t i = 0; i < og.size(); ++i) gb[i] += og[i] * x[i];
    }
  });
}

Var scale(Var a, double s) {
  Tensor out(a.dims());
  const auto& x = a.value().storage();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = s * x[i];
  return a.graph->record("scale", std::move(out), {a}, [a, s](Graph& g, Var, const Grad& og) {
    auto& ga = g.grad_buffer(a);
    for (std::size_t i = 0; i < og.size(); ++i) ga[i] += s * og[i];
  });
}

Var relu(Var x) {
  Tensor out(x.dims());
  const auto& v = x.value().storage();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = v[i] > 0.0 ? v[i] : 0.0;
  return x.graph->record("relu", std::move(out), {x}, [x](Graph& g, Var, const Grad& og) {
    const auto& v = x.value().storage();
    auto& gx = g.grad_buffer(x);
    for (std::size_t i = 0; i < og.size(); ++i) {
      if (v[i] > 0.0) gx[i] += og[i];
    }
  });
}

Var prelu(Var x, Var slope) {
  if (slope.value().size() != 1) throw DimensionError("prelu: slope must hold one element");
  const double a = slope.value()[0];
  Tensor out(x.dims());
  const auto& v = x.value().storage();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = v[i] >= 0.0 ? v[i] : a * v[i];
  return x.graph->record("prelu", std::move(out), {x, slope}, [x, slope](Graph& g, Var, const Grad& og) {
    const auto& v = x.value().storage();
    const double a = slope.value()[0];
    if (g.needs_grad(x)) {
      auto& gx = g.grad_buffer(x);
      for (std::size_t i = 0; i < og.size(); ++i) gx[i] += v[i] >= 0.0 ? og[i] : a * og[i];
    }
    if (g.needs_grad(slope)) {
      double ga = 0.0;
      for (std::size_t i = 0; i < og.size(); ++i) {
        if (v[i] < 0.0) ga += og[i] * v[i];
      }
      g.grad_buffer(slope)[0] += ga;
    }
  });
}

Var softmax(Var x, std::size_t axis) {
  const Shape& d = x.dims();
  if (axis >= d.size()) throw DimensionError("softmax: axis " + std::to_string(axis) + " out of range");
  const std::size_t len = d[axis];
  const std::size_t outer = prod(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(axis));
  const std::size_t inner = prod(d.begin() + static_cast<std::ptrdiff_t>(axis) + 1, d.end());
  Tensor out(d);
  const auto& v = x.value().storage();
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t in = 0; in < inner; ++in) {
      const std::size_t base = o * len * inner + in;
      double mx = v[base];
      for (std::size_t k = 1; k < len; ++k) mx = std::max(mx, v[base + k * inner]);
      double z = 0.0;
      for (std::size_t k = 0; k < len; ++k) {
        const double e = std::exp(v[base + k * inner] - mx);
        out[base + k * inner] = e;
        z += e;
      }
      const double inv = 1.0 / z;
      for (std::size_t k = 0; k < len; ++k) out[base + k * inner] *= inv;
    }
  }
  return x.graph->record("softmax", std::move(out), {x}, [x, outer, inner, len](Graph& g, Var self, const Grad& og) {
    const auto& y = self.value().storage();
    auto& gx = g.grad_buffer(x);
    for (std::size_t o = 0; o < outer; ++o) {
      for (std::size_t in = 0; in < inner; ++in) {
        const std::size_t base = o * len * inner + in;
        double dot = 0.0;
        for (std::size_t k = 0; k < len; ++k) dot += og[base + k * inner] * y[base + k * inner];
        for (std::size_t k = 0; k < len; ++k) {
          const std::size_t i = base + k * inner;
          gx[i] += y[i] * (og[i] - dot);
        }
      }
    }
  });
}

Var conv2d(Var x, Var kernels, Var bias) {
  const Shape& xd = x.dims();
  const Shape& kd = kernels.dims();
  const bool unbatched = xd.size() == 3;
  if (xd.size() != 4 && !unbatched) throw DimensionError("conv2d: input must be [N,C,H,W] or [C,H,W], got " + shape_str(xd));
  if (kd.size() != 4) throw DimensionError("conv2d: kernels must be [C_out,C_in,S,S], got " + shape_str(kd));
  const std::size_t n = unbatched ? 1 : xd[0];
  const std::size_t cin = xd[unbatched ? 0 : 1];
  const std::size_t h = xd[unbatched ? 1 : 2];
  const std::size_t w = xd[unbatched ? 2 : 3];
  const std::size_t cout = kd[0];
  const std::size_t s = kd[2];
  if (kd[1] != cin) {
    throw DimensionError("conv2d: input has " + std::to_string(cin) + " channels, kernels expect " + std::to_string(kd[1]));
  }
  if (kd[3] != s || s % 2 == 0) throw DimensionError("conv2d: kernels must be square with odd size, got " + shape_str(kd));
  if (bias.value().size() != cout) throw DimensionError("conv2d: bias must be [C_out]");

  const std::size_t pad = (s - 1) / 2;
  const std::size_t hw = h * w;
  const std::size_t r = cin * s * s;
  const bool pointwise = s == 1;

  // Per-sample im2col: rows (ci, ky, kx), columns (y, x). Only in-bounds taps
  // are written, so a zero-initialised buffer can be reused across samples.
  // Pointwise kernels use the input block directly.
  auto im2col = [cin, h, w, s, pad, hw](const double* src, double* cols) {
    for (std::size_t ci = 0; ci < cin; ++ci) {
      for (std::size_t ky = 0; ky < s; ++ky) {
        for (std::size_t kx = 0; kx < s; ++kx) {
          double* row = cols + ((ci * s + ky) * s + kx) * hw;
          const double* plane = src + ci * hw;
          const std::size_t y0 = ky < pad ? pad - ky : 0;
          const std::size_t y1 = std::min(h, h + pad - ky);
          const std::size_t x0 = kx < pad ? pad - kx : 0;
          const std::size_t x1 = std::min(w, w + pad - kx);
          for (std::size_t yy = y0; yy < y1; ++yy) {
            const std::size_t base = (yy + ky - pad) * w + kx;
            for (std::size_t xx = x0; xx < x1; ++xx) row[yy * w + xx] = plane[base + xx - pad];
          }
        }
      }
    }
  };

  Tensor out(unbatched ? Shape{cout, h, w} : Shape{n, cout, h, w});
  const auto& xv = x.value().storage();
  const auto& bv = bias.value().storage();
  ConstMatMap wmat(kernels.value().storage().data(), static_cast<Eigen::Index>(cout), static_cast<Eigen::Index>(r));
  std::vector<double> cols(pointwise ? 0 : r * hw);
  for (std::size_t b = 0; b < n; ++b) {
    const double* src = xv.data() + b * cin * hw;
    if (!pointwise) im2col(src, cols.data());
    ConstMatMap cmat(pointwise ? src : cols.data(), static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(hw));
    MatMap omat(out.storage().data() + b * cout * hw, static_cast<Eigen::Index>(cout), static_cast<Eigen::Index>(hw));
    omat.noalias() = wmat * cmat;
    for (std::size_t co = 0; co < cout; ++co) {
      double* dst = out.storage().data() + (b * cout + co) * hw;
      for (std::size_t i = 0; i < hw; ++i) dst[i] += bv[co];
    }
  }

  return x.graph->record(
      "conv2d", std::move(out), {x, kernels, bias},
      [x, kernels, bias, n, cin, cout, h, w, s, pad, hw, r, pointwise, im2col](Graph& g, Var, const Grad& og) {
        const auto& xv = x.value().storage();
        const bool need_k = g.needs_grad(kernels), need_b = g.needs_grad(bias), need_x = g.needs_grad(x);
        ConstMatMap wmat(kernels.value().storage().data(), static_cast<Eigen::Index>(cout),
                         static_cast<Eigen::Index>(r));
        std::vector<double> cols(pointwise ? 0 : r * hw);
        RowMat dcols(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(hw));
        double* gk = need_k ? g.grad_buffer(kernels).data() : nullptr;
        double* gb = need_b ? g.grad_buffer(bias).data() : nullptr;
        double* gx = need_x ? g.grad_buffer(x).data() : nullptr;
        for (std::size_t b = 0; b < n; ++b) {
          ConstMatMap dout(og.data() + b * cout * hw, static_cast<Eigen::Index>(cout), static_cast<Eigen::Index>(hw));
          const double* src = xv.data() + b * cin * hw;
          if (need_k) {
            if (!pointwise) im2col(src, cols.data());
            ConstMatMap cmat(pointwise ? src : cols.data(), static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(hw));
            MatMap gkm(gk, static_cast<Eigen::Index>(cout), static_cast<Eigen::Index>(r));
            gkm.noalias() += dout * cmat.transpose();
          }
          if (need_b) {
            for (std::size_t co = 0; co < cout; ++co) {
              const double* row = og.data() + (b * cout + co) * hw;
              gb[co] += std::accumulate(row, row + hw, 0.0);
            }
          }
          if (need_x) {
            double* gxb = gx + b * cin * hw;
            if (pointwise) {
              MatMap gxm(gxb, static_cast<Eigen::Index>(cin), static_cast<Eigen::Index>(hw));
              gxm.noalias() += wmat.transpose() * dout;
              continue;
            }
            dcols.noalias() = wmat.transpose() * dout;
            for (std::size_t ci = 0; ci < cin; ++ci) {
              for (std::size_t ky = 0; ky < s; ++ky) {
                for (std::size_t kx = 0; kx < s; ++kx) {
                  const double* row = dcols.data() + ((ci * s + ky) * s + kx) * hw;
                  double* plane = gxb + ci * hw;
                  const std::size_t y0 = ky < pad ? pad - ky : 0;
                  const std::size_t y1 = std::min(h, h + pad - ky);
                  const std::size_t x0 = kx < pad ? pad - kx : 0;
                  const std::size_t x1 = std::min(w, w + pad - kx);
                  for (std::size_t yy = y0; yy < y1; ++yy) {
                    const std::size_t base = (yy + ky - pad) * w + kx;
                    for (std::size_t xx = x0; xx < x1; ++xx) plane[base + xx - pad] += row[yy * w + xx];
                  }
                }
              }
            }
          }
        }
      });
}

Var batchnorm(Var x, Var gamma, Var beta, BatchNormState& state, BnMode mode, bool update_running) {
  const Shape& d = x.dims();
  if (d.size() != 4) throw DimensionError("batchnorm: input must be [N,C,H,W], got " + shape_str(d));
  const std::size_t n = d[0], c = d[1], hw = d[2] * d[3];
  if (gamma.value().size() != c || beta.value().size() != c) throw DimensionError("batchnorm: gamma/beta must be [C]");
  if (state.running_mean.size() != c || state.running_var.size() != c) {
    throw DimensionError("batchnorm: running statistics must be [C]");
  }
  const std::size_t m = n * hw;
  const double eps = state.epsilon;
  const auto& xv = x.value().storage();
  const auto& gv = gamma.value().storage();
  const auto& bv = beta.value().storage();

  auto mean = std::make_shared<std::vector<double>>(c);
  auto inv_std = std::make_shared<std::vector<double>>(c);
  if (mode == BnMode::train) {
    if (m < 2) throw PreconditionError("batchnorm: train mode needs N*H*W >= 2 per channel");
    for (std::size_t ch = 0; ch < c; ++ch) {
      double s1 = 0.0;
      for (std::size_t b = 0; b < n; ++b) {
        const double* src = xv.data() + (b * c + ch) * hw;
        for (std::size_t i = 0; i < hw; ++i) s1 += src[i];
      }
      const double mu = s1 / static_cast<double>(m);
      double s2 = 0.0;
      for (std::size_t b = 0; b < n; ++b) {
        const double* src = xv.data() + (b * c + ch) * hw;
        for (std::size_t i = 0; i < hw; ++i) s2 += (src[i] - mu) * (src[i] - mu);
      }
      const double var = s2 / static_cast<double>(m);
      (*mean)[ch] = mu;
      (*inv_std)[ch] = 1.0 / std::sqrt(var + eps);
      if (update_running) {
        const double unbiased = s2 / static_cast<double>(m - 1);
        state.running_mean[ch] = (1.0 - state.momentum) * state.running_mean[ch] + state.momentum * mu;
        state.running_var[ch] = (1.0 - state.momentum) * state.running_var[ch] + state.momentum * unbiased;
      }
    }
  } else {
    for (std::size_t ch = 0; ch < c; ++ch) {
      (*mean)[ch] = state.running_mean[ch];
      (*inv_std)[ch] = 1.0 / std::sqrt(state.running_var[ch] + eps);
    }
  }

  Tensor out(d);
  for (std::size_t b = 0; b < n; ++b) {
    for (std::size_t ch = 0; ch < c; ++ch) {
      const double* src = xv.data() + (b * c + ch) * hw;
      double* dst = out.storage().data() + (b * c + ch) * hw;
      const double mu = (*mean)[ch], is = (*inv_std)[ch];
      for (std::size_t i = 0; i < hw; ++i) dst[i] = gv[ch] * (src[i] - mu) * is + bv[ch];
    }
  }

  return x.graph->record(
      "batchnorm", std::move(out), {x, gamma, beta},
      [x, gamma, beta, mean, inv_std, mode, n, c, hw, m](Graph& g, Var, const Grad& og) {
        const auto& xv = x.value().storage();
        const auto& gv = gamma.value().storage();
        std::vector<double> sum_dy(c, 0.0), sum_dy_xhat(c, 0.0);
        for (std::size_t b = 0; b < n; ++b) {
          for (std::size_t ch = 0; ch < c; ++ch) {
            const double* src = xv.data() + (b * c + ch) * hw;
            const double* dy = og.data() + (b * c + ch) * hw;
            const double mu = (*mean)[ch], is = (*inv_std)[ch];
            for (std::size_t i = 0; i < hw; ++i) {
              sum_dy[ch] += dy[i];
              sum_dy_xhat[ch] += dy[i] * (src[i] - mu) * is;
            }
          }
        }
        if (g.needs_grad(gamma)) {
          auto& gg = g.grad_buffer(gamma);
          for (std::size_t ch = 0; ch < c; ++ch) gg[ch] += sum_dy_xhat[ch];
        }
        if (g.needs_grad(beta)) {
          auto& gb = g.grad_buffer(beta);
          for (std::size_t ch = 0; ch < c; ++ch) gb[ch] += sum_dy[ch];
        }
        if (!g.needs_grad(x)) return;
        auto& gx = g.grad_buffer(x);
        const double inv_m = 1.0 / static_cast<double>(m);
        for (std::size_t b = 0; b < n; ++b) {
          for (std::size_t ch = 0; ch < c; ++ch) {
            const double* src = xv.data() + (b * c + ch) * hw;
            const double* dy = og.data() + (b * c + ch) * hw;
            double* dst = gx.data() + (b * c + ch) * hw;
            const double mu = (*mean)[ch], is = (*inv_std)[ch], gm = gv[ch];
            if (mode == BnMode::train) {
              for (std::size_t i = 0; i < hw; ++i) {
                const double xhat = (src[i] - mu) * is;
                dst[i] += gm * is * (dy[i] - inv_m * sum_dy[ch] - xhat * inv_m * sum_dy_xhat[ch]);
              }
            } else {
              for (std::size_t i = 0; i < hw; ++i) dst[i] += gm * is * dy[i];
            }
          }
        }
      });
}

Var permute(Var x, const std::vector<std::size_t>& perm) {
  const Shape& d = x.dims();
  const std::size_t nd = d.size();
  if (perm.size() != nd) throw DimensionError("permute: permutation rank mismatch");
  std::vector<bool> seen(nd, false);
  for (std::size_t a : perm) {
    if (a >= nd || seen[a]) throw DimensionError("permute: invalid permutation");
    seen[a] = true;
  }
  Shape od(nd);
  for (std::size_t i = 0; i < nd; ++i) od[i] = d[perm[i]];
  std::vector<std::size_t> in_stride(nd, 1);
  for (std::size_t i = nd; i-- > 1;) in_stride[i - 1] = in_stride[i] * d[i];
  // Stride in the input for each output axis.
  std::vector<std::size_t> src_stride(nd);
  for (std::size_t i = 0; i < nd; ++i) src_stride[i] = in_stride[perm[i]];

  // Output position -> input offset map, shared with backward.
  auto index = std::make_shared<std::vector<std::size_t>>(x.value().size());
  std::vector<std::size_t> ctr(nd, 0);
  std::size_t off = 0;
  for (std::size_t o = 0; o < index->size(); ++o) {
    (*index)[o] = off;
    for (std::size_t ax = nd; ax-- > 0;) {
      ++ctr[ax];
      off += src_stride[ax];
      if (ctr[ax] < od[ax]) break;
      off -= src_stride[ax] * od[ax];
      ctr[ax] = 0;
    }
  }
  Tensor out(od);
  const auto& xv = x.value().storage();
  for (std::size_t o = 0; o < index->size(); ++o) out[o] = xv[(*index)[o]];
  return x.graph->record("permute", std::move(out), {x}, [x, index](Graph& g, Var, const Grad& og) {
    auto& gx = g.grad_buffer(x);
    for (std::size_t o = 0; o < og.size(); ++o) gx[(*index)[o]] += og[o];
  });
}

Var reshape(Var x, Shape dims) {
  Tensor out = x.value().reshaped(std::move(dims));
  return x.graph->record("reshape", std::move(out), {x}, [x](Graph& g, Var, const Grad& og) { accumulate(g, x, og); });
}

Var bmm(Var a, Var b, bool transpose_b) {
  const Shape& ad = a.dims();
  const Shape& bd = b.dims();
  if (ad.size() < 2 || ad.size() != bd.size()) throw DimensionError("bmm: operands need equal rank >= 2");
  const std::size_t nd = ad.size();
  if (!std::equal(ad.begin(), ad.end() - 2, bd.begin())) throw DimensionError("bmm: batch dims differ");
  const std::size_t m = ad[nd - 2], k = ad[nd - 1];
  const std::size_t bk = transpose_b ? bd[nd - 1] : bd[nd - 2];
  const std::size_t nn = transpose_b ? bd[nd - 2] : bd[nd - 1];
  if (bk != k) throw DimensionError("bmm: inner dims " + shape_str(ad) + " x " + shape_str(bd));
  const std::size_t batch = prod(ad.begin(), ad.end() - 2);
  Shape od(ad.begin(), ad.end() - 2);
  od.push_back(m);
  od.push_back(nn);
  Tensor out(od);
  const auto E = [](std::size_t v) { return static_cast<Eigen::Index>(v); };
  for (std::size_t i = 0; i < batch; ++i) {
    ConstMatMap am(a.value().storage().data() + i * m * k, E(m), E(k));
    MatMap om(out.storage().data() + i * m * nn, E(m), E(nn));
    if (transpose_b) {
      ConstMatMap bm(b.value().storage().data() + i * nn * k, E(nn), E(k));
      om.noalias() = am * bm.transpose();
    } else {
      ConstMatMap bm(b.value().storage().data() + i * k * nn, E(k), E(nn));
      om.noalias() = am * bm;
    }
  }
  return a.graph->record("bmm", std::move(out), {a, b}, [a, b, transpose_b, batch, m, k, nn, E](Graph& g, Var, const Grad& og) {
    const bool ga_on = g.needs_grad(a), gb_on = g.needs_grad(b);
    double* ga = ga_on ? g.grad_buffer(a).data() : nullptr;
    double* gb = gb_on ? g.grad_buffer(b).data() : nullptr;
    for (std::size_t i = 0; i < batch; ++i) {
      ConstMatMap dm(og.data() + i * m * nn, E(m), E(nn));
      ConstMatMap am(a.value().storage().data() + i * m * k, E(m), E(k));
      if (transpose_b) {
        ConstMatMap bm(b.value().storage().data() + i * nn * k, E(nn), E(k));
        if (ga_on) MatMap(ga + i * m * k, E(m), E(k)).noalias() += dm * bm;
        if (gb_on) MatMap(gb + i * nn * k, E(nn), E(k)).noalias() += dm.transpose() * am;
      } else {
        ConstMatMap bm(b.value().storage().data() + i * k * nn, E(k), E(nn));
        if (ga_on) MatMap(ga + i * m * k, E(m), E(k)).noalias() += dm * bm.transpose();
        if (gb_on) MatMap(gb + i * k * nn, E(k), E(nn)).noalias() += am.transpose() * dm;
      }
    }
  });
}

Var sum(Var x) {
  const auto& v = x.value().storage();
  const double s = std::accumulate(v.begin(), v.end(), 0.0);
  return x.graph->record("sum", Tensor::scalar(s), {x}, [x](Graph& g, Var, const Grad& og) {
    auto& gx = g.grad_buffer(x);
    for (double& e : gx) e += og[0];
  });
}

Var weighted_sum(Var x, const Tensor& weights) {
  if (weights.dims() != x.dims()) throw DimensionError("weighted_sum: weight dims differ from input");
  const auto& v = x.value().storage();
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * weights[i];
  auto w = std::make_shared<std::vector<double>>(weights.storage());
  return x.graph->record("weighted_sum", Tensor::scalar(s), {x}, [x, w](Graph& g, Var, const Grad& og) {
    auto& gx = g.grad_buffer(x);
    for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += og[0] * (*w)[i];
  });
}

Var squared_error(Var pred, const Tensor& target, double factor) {
  if (target.dims() != pred.dims()) {
    throw DimensionError("squared_error: dims " + shape_str(pred.dims()) + " vs " + shape_str(target.dims()));
  }
  const auto& v = pred.value().storage();
  auto diff = std::make_shared<std::vector<double>>(v.size());
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    (*diff)[i] = v[i] - target[i];
    s += (*diff)[i] * (*diff)[i];
  }
  return pred.graph->record("squared_error", Tensor::scalar(factor * s), {pred},
                            [pred, diff, factor](Graph& g, Var, const Grad& og) {
                              auto& gp = g.grad_buffer(pred);
                              for (std::size_t i = 0; i < gp.size(); ++i) gp[i] += og[0] * 2.0 * factor * (*diff)[i];
                            });
}

}  // namespace irsmba::tensor
