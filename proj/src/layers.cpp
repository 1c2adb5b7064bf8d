#include "tscnn/layers.hpp"

#include <algorithm>
#include <cmath>

namespace tscnn::nn {

Tensor embedding_forward(const std::vector<int>& ids, const Tensor& table) {
  const std::size_t d = table.dim(1);
  Tensor out({ids.size(), d});
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const int id = ids[i];
    if (id < 0 || static_cast<std::size_t>(id) >= table.dim(0))
      throw NumericError("embedding id out of range");
    const double* row = table.data.data() + static_cast<std::size_t>(id) * d;
    std::copy(row, row + d, out.data.data() + i * d);
  }
  return out;
}

void embedding_backward(const std::vector<int>& ids, const Tensor& grad_out,
                        Tensor& grad_table) {
  const std::size_t d = grad_table.dim(1);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const int id = ids[i];
    if (id == 0) continue;  // padding row stays frozen
    double* dst = grad_table.data.data() + static_cast<std::size_t>(id) * d;
    const double* src = grad_out.data.data() + i * d;
    for (std::size_t j = 0; j < d; ++j) dst[j] += src[j];
  }
}

Tensor wide_conv1d(const Tensor& input, const Tensor& kernel,
                   const Tensor& bias) {
  const std::size_t L = input.dim(0);
  const std::size_t c_in = input.dim(1);
  const std::size_t k = kernel.dim(0);
  const std::size_t c_out = kernel.dim(2);
  if (kernel.dim(1) != c_in || bias.dim(0) != c_out)
    throw NumericError("wide_conv1d shape mismatch");

  Tensor out({L + k - 1, c_out});
  for (std::size_t t = 0; t < L + k - 1; ++t) {
    double* orow = out.data.data() + t * c_out;
    for (std::size_t co = 0; co < c_out; ++co) orow[co] = bias[co];
    for (std::size_t j = 0; j < k; ++j) {
      // input position i = t - k + 1 + j
      const std::ptrdiff_t i =
          static_cast<std::ptrdiff_t>(t + j + 1) - static_cast<std::ptrdiff_t>(k);
      if (i < 0 || i >= static_cast<std::ptrdiff_t>(L)) continue;
      const double* irow = input.data.data() + static_cast<std::size_t>(i) * c_in;
      const double* krow = kernel.data.data() + j * c_in * c_out;
      for (std::size_t ci = 0; ci < c_in; ++ci) {
        const double x = irow[ci];
        const double* kk = krow + ci * c_out;
        for (std::size_t co = 0; co < c_out; ++co) orow[co] += x * kk[co];
      }
    }
  }
  return out;
}

void wide_conv1d_backward(const Tensor& input, const Tensor& kernel,
                          const Tensor& grad_out, Tensor& grad_input,
                          Tensor& grad_kernel, Tensor& grad_bias) {
  const std::size_t L = input.dim(0);
  const std::size_t c_in = input.dim(1);
  const std::size_t k = kernel.dim(0);
  const std::size_t c_out = kernel.dim(2);

  for (std::size_t t = 0; t < L + k - 1; ++t) {
    const double* grow = grad_out.data.data() + t * c_out;
    for (std::size_t co = 0; co < c_out; ++co) grad_bias[co] += grow[co];
    for (std::size_t j = 0; j < k; ++j) {
      const std::ptrdiff_t i =
          static_cast<std::ptrdiff_t>(t + j + 1) - static_cast<std::ptrdiff_t>(k);
      if (i < 0 || i >= static_cast<std::ptrdiff_t>(L)) continue;
      const double* irow = input.data.data() + static_cast<std::size_t>(i) * c_in;
      double* girow = grad_input.data.data() + static_cast<std::size_t>(i) * c_in;
      const double* krow = kernel.data.data() + j * c_in * c_out;
      double* gkrow = grad_kernel.data.data() + j * c_in * c_out;
      for (std::size_t ci = 0; ci < c_in; ++ci) {
        const double x = irow[ci];
        const double* kk = krow + ci * c_out;
        double* gk = gkrow + ci * c_out;
        double gi = 0.0;
        for (std::size_t co = 0; co < c_out; ++co) {
          const double g = grow[co];
          gk[co] += x * g;
          gi += kk[co] * g;
        }
        girow[ci] += gi;
      }
    }
  }
}

Tensor tanh_forward(const Tensor& x) {
  Tensor y = x;
  for (double& v : y.data) v = std::tanh(v);
  return y;
}

Tensor tanh_backward(const Tensor& y, const Tensor& grad_out) {
  Tensor g = grad_out;
  for (std::size_t i = 0; i < g.size(); ++i) g[i] *= 1.0 - y[i] * y[i];
  return g;
}

Tensor relu_forward(const Tensor& x) {
  Tensor y = x;
  for (double& v : y.data) v = v > 0.0 ? v : 0.0;
  return y;
}

Tensor relu_backward(const Tensor& x, const Tensor& grad_out) {
  Tensor g = grad_out;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (x[i] <= 0.0) g[i] = 0.0;
  return g;
}

Tensor global_max_pool(const Tensor& input, std::vector<std::size_t>& argmax) {
  const std::size_t L = input.dim(0);
  const std::size_t c = input.dim(1);
  Tensor out({c});
  argmax.assign(c, 0);
  for (std::size_t ch = 0; ch < c; ++ch) out[ch] = input.at(std::size_t{0}, ch);
  for (std::size_t t = 1; t < L; ++t) {
    for (std::size_t ch = 0; ch < c; ++ch) {
      const double v = input.at(t, ch);
      if (v > out[ch]) {  // strict: first occurrence wins on ties
        out[ch] = v;
        argmax[ch] = t;
      }
    }
  }
  return out;
}

Tensor global_max_pool_backward(const Tensor& grad_out,
                                const std::vector<std::size_t>& argmax,
                                std::size_t seq_len) {
  const std::size_t c = grad_out.dim(0);
  Tensor g({seq_len, c});
  for (std::size_t ch = 0; ch < c; ++ch) g.at(argmax[ch], ch) = grad_out[ch];
  return g;
}

Tensor concat(const std::vector<Tensor>& parts) {
  if (parts.empty()) throw NumericError("concat of empty tensor list");
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  Tensor out({total});
  std::size_t off = 0;
  for (const auto& p : parts) {
    std::copy(p.data.begin(), p.data.end(), out.data.begin() + off);
    off += p.size();
  }
  return out;
}

std::vector<Tensor> concat_backward(const Tensor& grad_out,
                                    const std::vector<std::size_t>& sizes) {
  std::vector<Tensor> parts;
  std::size_t off = 0;
  for (std::size_t s : sizes) {
    Tensor p({s});
    std::copy(grad_out.data.begin() + off, grad_out.data.begin() + off + s,
              p.data.begin());
    off += s;
    parts.push_back(std::move(p));
  }
  return parts;
}

Tensor l2_normalize(const Tensor& v, double eps) {
  double norm = 0.0;
  for (double x : v.data) norm += x * x;
  norm = std::max(std::sqrt(norm), eps);
  Tensor y = v;
  for (double& x : y.data) x /= norm;
  return y;
}

Tensor l2_normalize_backward(const Tensor& v, const Tensor& grad_out,
                             double eps) {
  double norm2 = 0.0;
  for (double x : v.data) norm2 += x * x;
  const double norm = std::sqrt(norm2);
  Tensor g = grad_out;
  if (norm <= eps) {
    // y = v / eps is linear below the clamp
    for (double& x : g.data) x /= eps;
    return g;
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) dot += v[i] * grad_out[i];
  const double n3 = norm * norm * norm;
  for (std::size_t i = 0; i < v.size(); ++i)
    g[i] = grad_out[i] / norm - v[i] * dot / n3;
  return g;
}

Tensor dense(const Tensor& x, const Tensor& weights, const Tensor& bias) {
  const std::size_t in = weights.dim(0);
  const std::size_t out_n = weights.dim(1);
  if (x.size() != in || bias.size() != out_n)
    throw NumericError("dense shape mismatch");
  Tensor out({out_n});
  for (std::size_t o = 0; o < out_n; ++o) out[o] = bias[o];
  for (std::size_t i = 0; i < in; ++i) {
    const double xi = x[i];
    const double* wrow = weights.data.data() + i * out_n;
    for (std::size_t o = 0; o < out_n; ++o) out[o] += xi * wrow[o];
  }
  return out;
}

void dense_backward(const Tensor& x, const Tensor& weights,
                    const Tensor& grad_out, Tensor& grad_x,
                    Tensor& grad_weights, Tensor& grad_bias) {
  const std::size_t in = weights.dim(0);
  const std::size_t out_n = weights.dim(1);
  for (std::size_t o = 0; o < out_n; ++o) grad_bias[o] += grad_out[o];
  for (std::size_t i = 0; i < in; ++i) {
    const double xi = x[i];
    const double* wrow = weights.data.data() + i * out_n;
    double* gwrow = grad_weights.data.data() + i * out_n;
    double gx = 0.0;
    for (std::size_t o = 0; o < out_n; ++o) {
      const double g = grad_out[o];
      gwrow[o] += xi * g;
      gx += wrow[o] * g;
    }
    grad_x[i] += gx;
  }
}

SoftmaxLoss softmax_cross_entropy(const Tensor& logits, int gold) {
  const std::size_t C = logits.size();
  if (C < 2) throw NumericError("softmax needs at least two classes");
  if (gold < 0 || static_cast<std::size_t>(gold) >= C)
    throw NumericError("gold class index out of range");

  const double m = *std::max_element(logits.data.begin(), logits.data.end());
  SoftmaxLoss r{0.0, Tensor({C}), Tensor({C})};
  double z = 0.0;
  for (std::size_t i = 0; i < C; ++i) {
    r.probs[i] = std::exp(logits[i] - m);
    z += r.probs[i];
  }
  for (std::size_t i = 0; i < C; ++i) r.probs[i] /= z;
  r.loss = -(logits[gold] - m - std::log(z));
  for (std::size_t i = 0; i < C; ++i)
    r.grad[i] = r.probs[i] - (static_cast<int>(i) == gold ? 1.0 : 0.0);
  return r;
}

void rmsprop_update(Tensor& param, const Tensor& grad, Tensor& acc, double lr,
                    double rho, double eps) {
  if (!param.same_shape(grad) || !param.same_shape(acc))
    throw NumericError("rmsprop shape mismatch");
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double g = grad[i];
    acc[i] = rho * acc[i] + (1.0 - rho) * g * g;
    param[i] -= lr * g / (std::sqrt(acc[i]) + eps);
  }
}

}  // namespace tscnn::nn
