#ifndef TSCNN_LAYERS_HPP
#define TSCNN_LAYERS_HPP

#include <vector>

#include "tscnn/tensor.hpp"

namespace tscnn::nn {

// ---- Embedding ----------------------------------------------------------
// table: [V+1, d], row 0 is the padding row (all zeros, never updated).
Tensor embedding_forward(const std::vector<int>& ids, const Tensor& table);
// Scatter-adds grad_out rows into grad_table; id 0 is skipped.
void embedding_backward(const std::vector<int>& ids, const Tensor& grad_out,
                        Tensor& grad_table);

// ---- Wide (full) 1-D convolution ----------------------------------------
// input [L, c_in], kernel [k, c_in, c_out], bias [c_out] -> [L+k-1, c_out].
// out[t] = sum_j input[t-k+1+j] * kernel[j] + bias, zero outside [0, L).
Tensor wide_conv1d(const Tensor& input, const Tensor& kernel,
                   const Tensor& bias);
void wide_conv1d_backward(const Tensor& input, const Tensor& kernel,
                          const Tensor& grad_out, Tensor& grad_input,
                          Tensor& grad_kernel, Tensor& grad_bias);

// ---- Elementwise activations --------------------------------------------
Tensor tanh_forward(const Tensor& x);
// Uses the forward output: d/dx tanh = 1 - y^2.
Tensor tanh_backward(const Tensor& y, const Tensor& grad_out);

Tensor relu_forward(const Tensor& x);
Tensor relu_backward(const Tensor& x, const Tensor& grad_out);

// ---- Global max pooling --------------------------------------------------
// input [L, c] -> [c]; argmax records the winning row per channel (first
// occurrence on ties).
Tensor global_max_pool(const Tensor& input, std::vector<std::size_t>& argmax);
Tensor global_max_pool_backward(const Tensor& grad_out,
                                const std::vector<std::size_t>& argmax,
                                std::size_t seq_len);

// ---- Concatenation --------------------------------------------------------
Tensor concat(const std::vector<Tensor>& parts);  // throws on empty list
std::vector<Tensor> concat_backward(const Tensor& grad_out,
                                    const std::vector<std::size_t>& sizes);

// ---- L2 normalization -----------------------------------------------------
// v / max(||v||, eps).
Tensor l2_normalize(const Tensor& v, double eps);
Tensor l2_normalize_backward(const Tensor& v, const Tensor& grad_out,
                             double eps);

// ---- Dense (affine) -------------------------------------------------------
// x [in], weights [in, out], bias [out] -> [out].
Tensor dense(const Tensor& x, const Tensor& weights, const Tensor& bias);
void dense_backward(const Tensor& x, const Tensor& weights,
                    const Tensor& grad_out, Tensor& grad_x,
                    Tensor& grad_weights, Tensor& grad_bias);

// ---- Softmax cross-entropy ------------------------------------------------
struct SoftmaxLoss {
  double loss;
  Tensor probs;  // [C], sums to 1
  Tensor grad;   // [C], probs - onehot(gold)
};
SoftmaxLoss softmax_cross_entropy(const Tensor& logits, int gold);

// ---- RMSprop ---------------------------------------------------------------
// acc <- rho*acc + (1-rho)*g^2 ; p <- p - lr*g/(sqrt(acc) + eps).
void rmsprop_update(Tensor& param, const Tensor& grad, Tensor& acc, double lr,
                    double rho, double eps);

}  // namespace tscnn::nn

#endif
