#include "deepsc/nn/ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "deepsc/error.hpp"
#include "deepsc/nn/gemm.hpp"

namespace deepsc::nn {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

/// Copies one B item into a zero-padded (H + 2p) x (W + 2p) x C image.
template <class T>
void pad_image(const T* x, std::size_t h, std::size_t w, std::size_t c, std::size_t p, T* out) {
  const std::size_t wp = w + 2 * p;
  std::fill_n(out, (h + 2 * p) * wp * c, T(0));
  for (std::size_t y = 0; y < h; ++y) std::copy_n(x + y * w * c, w * c, out + ((y + p) * wp + p) * c);
}

/// A "same" conv over a padded image, one GEMM per kernel row. With the
/// output laid out at the padded width wp, output position r of kernel row kh
/// reads the K*Cin contiguous values starting at padded position r + kh*wp,
/// so the im2col matrix of that row is a strided view with overlapping rows.
/// Output columns >= w are scratch.
struct Geometry {
  std::size_t h, w, k, p, wp, rows;
  Geometry(std::size_t h_, std::size_t w_, std::size_t k_)
      : h(h_), w(w_), k(k_), p(k_ / 2), wp(w_ + 2 * (k_ / 2)), rows((h_ - 1) * (w_ + 2 * (k_ / 2)) + w_) {}
  std::size_t padded_size(std::size_t c) const { return (h + 2 * p) * wp * c; }
};

/// out[b] += conv(x[b], kernel) for kernel K x K x Cin x Cout.
template <class T>
void conv_accumulate(const T* x, std::size_t batch, const Geometry& g, std::size_t cin, const T* kernel,
                     std::size_t cout, T* out) {
  const std::size_t hw = g.h * g.w;
  if (g.k == 1) {
    gemm<T>(false, false, batch * hw, cout, cin, T(1), x, cin, kernel, cout, T(1), out, cout);
    return;
  }
  std::vector<T> padded(g.padded_size(cin));
  std::vector<T> z(g.h * g.wp * cout);
  for (std::size_t b = 0; b < batch; ++b) {
    pad_image(x + b * hw * cin, g.h, g.w, cin, g.p, padded.data());
    std::fill(z.begin(), z.end(), T(0));
    for (std::size_t kh = 0; kh < g.k; ++kh)
      gemm<T>(false, false, g.rows, cout, g.k * cin, T(1), padded.data() + kh * g.wp * cin, cin,
              kernel + kh * g.k * cin * cout, cout, T(1), z.data(), cout);
    T* ob = out + b * hw * cout;
    for (std::size_t r = 0; r < g.h; ++r) {
      const T* src = z.data() + r * g.wp * cout;
      T* dst = ob + r * g.w * cout;
      for (std::size_t i = 0; i < g.w * cout; ++i) dst[i] += src[i];
    }
  }
}

/// grad_kernel += sum_b x[b]^T-correlated with grad_out[b].
template <class T>
void conv_kernel_grad(const T* x, const T* gy, std::size_t batch, const Geometry& g, std::size_t cin,
                      std::size_t cout, T* gk) {
  const std::size_t hw = g.h * g.w;
  if (g.k == 1) {
    gemm<T>(true, false, cin, cout, batch * hw, T(1), x, cin, gy, cout, T(1), gk, cout);
    return;
  }
  std::vector<T> padded(g.padded_size(cin));
  std::vector<T> gz(g.h * g.wp * cout, T(0));
  for (std::size_t b = 0; b < batch; ++b) {
    pad_image(x + b * hw * cin, g.h, g.w, cin, g.p, padded.data());
    for (std::size_t r = 0; r < g.h; ++r)
      std::copy_n(gy + b * hw * cout + r * g.w * cout, g.w * cout, gz.data() + r * g.wp * cout);
    for (std::size_t kh = 0; kh < g.k; ++kh)
      gemm<T>(true, false, g.k * cin, cout, g.rows, T(1), padded.data() + kh * g.wp * cin, cin, gz.data(), cout,
              T(1), gk + kh * g.k * cin * cout, cout);
  }
}

/// Kernel of the adjoint conv: spatially flipped, Cin and Cout swapped.
template <class T>
std::vector<T> adjoint_kernel(const T* kernel, std::size_t k, std::size_t cin, std::size_t cout) {
  std::vector<T> out(k * k * cin * cout);
  for (std::size_t kh = 0; kh < k; ++kh)
    for (std::size_t kw = 0; kw < k; ++kw)
      for (std::size_t c = 0; c < cin; ++c)
        for (std::size_t o = 0; o < cout; ++o)
          out[(((k - 1 - kh) * k + (k - 1 - kw)) * cout + o) * cin + c] = kernel[((kh * k + kw) * cin + c) * cout + o];
  return out;
}
}  // namespace

template <class T>
Tensor<T> conv2d(const Tensor<T>& input, const Tensor<T>& kernel, const Tensor<T>& bias) {
  const Shape& is = input.shape();
  const Shape& ks = kernel.shape();
  require(is.size() == 4, "conv2d: input must be B x H x W x C, got " + to_string(is));
  require(ks.size() == 4 && ks[0] == ks[1] && ks[0] % 2 == 1,
          "conv2d: kernel must be K x K x Cin x Cout with odd K, got " + to_string(ks));
  require(ks[2] == is[3], "conv2d: kernel expects " + std::to_string(ks[2]) + " input channels, input has " +
                              std::to_string(is[3]));
  require(bias.size() == ks[3], "conv2d: bias length must equal Cout");

  const std::size_t batch = is[0], h = is[1], w = is[2], cin = is[3];
  const std::size_t k = ks[0], cout = ks[3];
  const Geometry g(h, w, k);

  std::vector<T> out(batch * h * w * cout);
  const T* bv = bias.values().data();
  for (std::size_t r = 0; r < batch * h * w; ++r) std::copy_n(bv, cout, out.data() + r * cout);
  conv_accumulate(input.values().data(), batch, g, cin, kernel.values().data(), cout, out.data());

  return make_result<T>({batch, h, w, cout}, std::move(out), {input.node(), kernel.node(), bias.node()},
                        [=](Node<T>& self) {
                          Node<T>& xin = *self.parents[0];
                          Node<T>& kn = *self.parents[1];
                          Node<T>& bn = *self.parents[2];
                          const T* gy = self.grad.data();
                          if (bn.requires_grad) {
                            auto& gb = bn.grad_buffer();
                            for (std::size_t r = 0; r < batch * h * w; ++r)
                              for (std::size_t c = 0; c < cout; ++c) gb[c] += gy[r * cout + c];
                          }
                          if (kn.requires_grad)
                            conv_kernel_grad(xin.value.data(), gy, batch, g, cin, cout, kn.grad_buffer().data());
                          if (xin.requires_grad) {
                            const auto adj = adjoint_kernel(kn.value.data(), k, cin, cout);
                            conv_accumulate(gy, batch, g, cout, adj.data(), cin, xin.grad_buffer().data());
                          }
                        });
}

template <class T>
Tensor<T> dense(const Tensor<T>& input, const Tensor<T>& weight, const Tensor<T>& bias) {
  const Shape& is = input.shape();
  const Shape& ws = weight.shape();
  require(is.size() == 2, "dense: input must be B x Cin, got " + to_string(is));
  require(ws.size() == 2 && ws[0] == is[1], "dense: weight " + to_string(ws) + " does not match input " + to_string(is));
  require(bias.size() == ws[1], "dense: bias length must equal Cout");
  const std::size_t batch = is[0], cin = is[1], cout = ws[1];

  std::vector<T> out(batch * cout);
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t o = 0; o < cout; ++o) {
      T acc = bias.values()[o];
      for (std::size_t i = 0; i < cin; ++i) acc += input.values()[b * cin + i] * weight.values()[i * cout + o];
      out[b * cout + o] = acc;
    }
  }
  return make_result<T>({batch, cout}, std::move(out), {input.node(), weight.node(), bias.node()},
                        [=](Node<T>& self) {
                          Node<T>& xin = *self.parents[0];
                          Node<T>& wn = *self.parents[1];
                          Node<T>& bn = *self.parents[2];
                          const auto& gy = self.grad;
                          if (bn.requires_grad) {
                            auto& gb = bn.grad_buffer();
                            for (std::size_t b = 0; b < batch; ++b)
                              for (std::size_t o = 0; o < cout; ++o) gb[o] += gy[b * cout + o];
                          }
                          if (wn.requires_grad) {
                            auto& gw = wn.grad_buffer();
                            for (std::size_t b = 0; b < batch; ++b)
                              for (std::size_t i = 0; i < cin; ++i)
                                for (std::size_t o = 0; o < cout; ++o)
                                  gw[i * cout + o] += xin.value[b * cin + i] * gy[b * cout + o];
                          }
                          if (xin.requires_grad) {
                            auto& gx = xin.grad_buffer();
                            for (std::size_t b = 0; b < batch; ++b)
                              for (std::size_t i = 0; i < cin; ++i) {
                                T acc = 0;
                                for (std::size_t o = 0; o < cout; ++o) acc += wn.value[i * cout + o] * gy[b * cout + o];
                                gx[b * cin + i] += acc;
                              }
                          }
                        });
}

template <class T>
Tensor<T> activation(const Tensor<T>& input, Activation kind) {
  if (kind == Activation::None) return input;
  std::vector<T> out(input.size());
  const auto x = input.values();
  if (kind == Activation::ReLU) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] > T(0) ? x[i] : T(0);
    return make_result<T>(input.shape(), std::move(out), {input.node()}, [](Node<T>& self) {
      Node<T>& in = *self.parents[0];
      auto& gx = in.grad_buffer();
      for (std::size_t i = 0; i < gx.size(); ++i)
        if (in.value[i] > T(0)) gx[i] += self.grad[i];
    });
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = T(1) / (T(1) + std::exp(-x[i]));
  return make_result<T>(input.shape(), std::move(out), {input.node()}, [](Node<T>& self) {
    auto& gx = self.parents[0]->grad_buffer();
    for (std::size_t i = 0; i < gx.size(); ++i) {
      const T y = self.value[i];
      gx[i] += self.grad[i] * y * (T(1) - y);
    }
  });
}

template <class T>
Tensor<T> global_avg_pool(const Tensor<T>& input) {
  const Shape& is = input.shape();
  require(is.size() == 4, "global_avg_pool: input must be B x H x W x C, got " + to_string(is));
  const std::size_t batch = is[0], hw = is[1] * is[2], c = is[3];
  std::vector<T> out(batch * c);
  const auto x = input.values();
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t ch = 0; ch < c; ++ch) {
      double acc = 0.0;
      for (std::size_t p = 0; p < hw; ++p) acc += x[(b * hw + p) * c + ch];
      out[b * c + ch] = static_cast<T>(acc / static_cast<double>(hw));
    }
  }
  return make_result<T>({batch, 1, 1, c}, std::move(out), {input.node()}, [=](Node<T>& self) {
    auto& gx = self.parents[0]->grad_buffer();
    const T inv = T(1) / static_cast<T>(hw);
    for (std::size_t b = 0; b < batch; ++b)
      for (std::size_t p = 0; p < hw; ++p)
        for (std::size_t ch = 0; ch < c; ++ch) gx[(b * hw + p) * c + ch] += self.grad[b * c + ch] * inv;
  });
}

template <class T>
Tensor<T> scale_channels(const Tensor<T>& input, const Tensor<T>& gates) {
  const Shape& is = input.shape();
  require(is.size() == 4, "scale_channels: input must be B x H x W x C, got " + to_string(is));
  const std::size_t batch = is[0], hw = is[1] * is[2], c = is[3];
  require(gates.size() == batch * c && gates.shape().front() == batch,
          "scale_channels: gates " + to_string(gates.shape()) + " do not match input " + to_string(is));
  std::vector<T> out(input.size());
  const auto x = input.values();
  const auto g = gates.values();
  for (std::size_t b = 0; b < batch; ++b)
    for (std::size_t p = 0; p < hw; ++p)
      for (std::size_t ch = 0; ch < c; ++ch) out[(b * hw + p) * c + ch] = x[(b * hw + p) * c + ch] * g[b * c + ch];

  return make_result<T>(is, std::move(out), {input.node(), gates.node()}, [=](Node<T>& self) {
    Node<T>& xin = *self.parents[0];
    Node<T>& gn = *self.parents[1];
    if (xin.requires_grad) {
      auto& gx = xin.grad_buffer();
      for (std::size_t b = 0; b < batch; ++b)
        for (std::size_t p = 0; p < hw; ++p)
          for (std::size_t ch = 0; ch < c; ++ch) {
            const std::size_t i = (b * hw + p) * c + ch;
            gx[i] += self.grad[i] * gn.value[b * c + ch];
          }
    }
    if (gn.requires_grad) {
      auto& gg = gn.grad_buffer();
      for (std::size_t b = 0; b < batch; ++b)
        for (std::size_t ch = 0; ch < c; ++ch) {
          T acc = 0;
          for (std::size_t p = 0; p < hw; ++p) {
            const std::size_t i = (b * hw + p) * c + ch;
            acc += self.grad[i] * xin.value[i];
          }
          gg[b * c + ch] += acc;
        }
    }
  });
}

template <class T>
Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b) {
  const Shape& as = a.shape();
  const Shape& bs = b.shape();
  require(!as.empty() && as.size() == bs.size() && std::equal(as.begin(), as.end() - 1, bs.begin()),
          "concat_channels: leading dims differ: " + to_string(as) + " vs " + to_string(bs));
  const std::size_t ca = as.back(), cb = bs.back(), rows = a.size() / ca;
  Shape os = as;
  os.back() = ca + cb;
  std::vector<T> out(rows * (ca + cb));
  for (std::size_t r = 0; r < rows; ++r) {
    std::copy_n(a.values().data() + r * ca, ca, out.data() + r * (ca + cb));
    std::copy_n(b.values().data() + r * cb, cb, out.data() + r * (ca + cb) + ca);
  }
  return make_result<T>(os, std::move(out), {a.node(), b.node()}, [=](Node<T>& self) {
    Node<T>& an = *self.parents[0];
    Node<T>& bn = *self.parents[1];
    if (an.requires_grad) {
      auto& ga = an.grad_buffer();
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < ca; ++c) ga[r * ca + c] += self.grad[r * (ca + cb) + c];
    }
    if (bn.requires_grad) {
      auto& gb = bn.grad_buffer();
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cb; ++c) gb[r * cb + c] += self.grad[r * (ca + cb) + ca + c];
    }
  });
}

template <class T>
Tensor<T> residual_add(const Tensor<T>& a, const Tensor<T>& b) {
  require(a.shape() == b.shape(), "residual_add: shapes differ: " + to_string(a.shape()) + " vs " + to_string(b.shape()));
  std::vector<T> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.values()[i] + b.values()[i];
  return make_result<T>(a.shape(), std::move(out), {a.node(), b.node()}, [](Node<T>& self) {
    for (auto& p : self.parents) {
      if (!p->requires_grad) continue;
      auto& g = p->grad_buffer();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
    }
  });
}

template <class T>
Tensor<T> reshape(const Tensor<T>& input, Shape shape) {
  require(numel(shape) == input.size(),
          "reshape: cannot view " + to_string(input.shape()) + " as " + to_string(shape));
  std::vector<T> out(input.values().begin(), input.values().end());
  return make_result<T>(std::move(shape), std::move(out), {input.node()}, [](Node<T>& self) {
    auto& g = self.parents[0]->grad_buffer();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
  });
}

template <class T>
Tensor<T> mse_loss(const Tensor<T>& target, const Tensor<T>& estimate) {
  require(target.shape() == estimate.shape(),
          "mse_loss: shapes differ: " + to_string(target.shape()) + " vs " + to_string(estimate.shape()));
  require(target.size() > 0, "mse_loss: empty input");
  const std::size_t n = target.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = static_cast<double>(target.values()[i]) - static_cast<double>(estimate.values()[i]);
    acc += d * d;
  }
  return make_result<T>({1}, {static_cast<T>(acc / static_cast<double>(n))}, {target.node(), estimate.node()},
                        [n](Node<T>& self) {
                          Node<T>& tn = *self.parents[0];
                          Node<T>& en = *self.parents[1];
                          const T scale = self.grad[0] * T(2) / static_cast<T>(n);
                          if (tn.requires_grad) {
                            auto& g = tn.grad_buffer();
                            for (std::size_t i = 0; i < n; ++i) g[i] += scale * (tn.value[i] - en.value[i]);
                          }
                          if (en.requires_grad) {
                            auto& g = en.grad_buffer();
                            for (std::size_t i = 0; i < n; ++i) g[i] -= scale * (tn.value[i] - en.value[i]);
                          }
                        });
}

template <class T>
Tensor<T> unit_power(const Tensor<T>& input) {
  const Shape& is = input.shape();
  require(!is.empty() && is[0] > 0, "unit_power: input needs a batch axis");
  const std::size_t batch = is[0];
  const std::size_t item = input.size() / batch;
  require(item % 2 == 0 && item > 0, "unit_power: each item must hold an even, non-zero number of reals");

  std::vector<T> out(input.size());
  std::vector<double> energy(batch), scale(batch);
  const auto x = input.values();
  for (std::size_t b = 0; b < batch; ++b) {
    double e = 0.0;
    for (std::size_t i = 0; i < item; ++i) e += static_cast<double>(x[b * item + i]) * x[b * item + i];
    if (!(e > 0.0)) throw NumericError("unit_power: all-zero block has no defined scale");
    energy[b] = e;
    scale[b] = std::sqrt(static_cast<double>(item / 2) / e);
    for (std::size_t i = 0; i < item; ++i) out[b * item + i] = static_cast<T>(x[b * item + i] * scale[b]);
  }
  return make_result<T>(is, std::move(out), {input.node()}, [=](Node<T>& self) {
    Node<T>& in = *self.parents[0];
    auto& gx = in.grad_buffer();
    for (std::size_t b = 0; b < batch; ++b) {
      double dot = 0.0;
      for (std::size_t i = 0; i < item; ++i) dot += static_cast<double>(self.grad[b * item + i]) * in.value[b * item + i];
      const double ratio = dot / energy[b];
      for (std::size_t i = 0; i < item; ++i) {
        const std::size_t j = b * item + i;
        gx[j] += static_cast<T>(scale[b] * (self.grad[j] - in.value[j] * ratio));
      }
    }
  });
}

template <class T>
Tensor<T> pass_through(const Tensor<T>& input, const std::function<void(std::span<const T>, std::span<T>)>& transform) {
  std::vector<T> out(input.size());
  transform(input.values(), out);
  return make_result<T>(input.shape(), std::move(out), {input.node()}, [](Node<T>& self) {
    auto& g = self.parents[0]->grad_buffer();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += self.grad[i];
  });
}

#define DEEPSC_INSTANTIATE_OPS(T)                                                                     \
  template Tensor<T> conv2d(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&);                    \
  template Tensor<T> dense(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&);                     \
  template Tensor<T> activation(const Tensor<T>&, Activation);                                        \
  template Tensor<T> global_avg_pool(const Tensor<T>&);                                               \
  template Tensor<T> scale_channels(const Tensor<T>&, const Tensor<T>&);                              \
  template Tensor<T> concat_channels(const Tensor<T>&, const Tensor<T>&);                             \
  template Tensor<T> residual_add(const Tensor<T>&, const Tensor<T>&);                                \
  template Tensor<T> reshape(const Tensor<T>&, Shape);                                                \
  template Tensor<T> mse_loss(const Tensor<T>&, const Tensor<T>&);                                    \
  template Tensor<T> unit_power(const Tensor<T>&);                                                    \
  template Tensor<T> pass_through(const Tensor<T>&, const std::function<void(std::span<const T>, std::span<T>)>&);

DEEPSC_INSTANTIATE_OPS(float)
DEEPSC_INSTANTIATE_OPS(double)

#undef DEEPSC_INSTANTIATE_OPS

}  // namespace deepsc::nn
