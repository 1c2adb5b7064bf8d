#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "testutil.hpp"
#include "tscnn/checkpoint.hpp"
#include "tscnn/layers.hpp"
#include "tscnn/rng.hpp"

using namespace tscnn;
using namespace tscnn::nn;

namespace {

Tensor random_tensor(std::vector<std::size_t> shape, Rng& rng,
                     double scale = 1.0) {
  Tensor t(std::move(shape));
  for (double& v : t.data) v = rng.uniform(-scale, scale);
  return t;
}

double sum(const Tensor& t) {
  double s = 0.0;
  for (double v : t.data) s += v;
  return s;
}

// Weighted sum gives a scalar loss with nontrivial gradients everywhere.
double weighted(const Tensor& t, const Tensor& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) s += t[i] * w[i];
  return s;
}

}  // namespace

TEST_CASE("embedding: padding rows produce zeros, lookups copy rows") {
  Tensor table({4, 3});
  for (std::size_t i = 0; i < table.size(); ++i) table[i] = double(i);
  for (std::size_t j = 0; j < 3; ++j) table.at(std::size_t{0}, j) = 0.0;

  const Tensor zeros = embedding_forward({0, 0}, table);
  for (double v : zeros.data) CHECK(v == 0.0);

  const Tensor row3 = embedding_forward({3}, table);
  CHECK(row3[0] == table.at(std::size_t{3}, std::size_t{0}));
  CHECK(row3[2] == table.at(std::size_t{3}, std::size_t{2}));

  CHECK_THROWS_AS(embedding_forward({4}, table), NumericError);
  CHECK_THROWS_AS(embedding_forward({-1}, table), NumericError);
}

TEST_CASE("embedding backward: repeated id accumulates, row 0 frozen") {
  Tensor table({4, 2});
  Tensor grad_table(table.shape);
  Tensor grad_out({3, 2});
  grad_out.fill(1.0);
  embedding_backward({3, 3, 0}, grad_out, grad_table);
  CHECK(grad_table.at(std::size_t{3}, std::size_t{0}) == 2.0);
  CHECK(grad_table.at(std::size_t{3}, std::size_t{1}) == 2.0);
  for (std::size_t j = 0; j < 2; ++j)
    CHECK(grad_table.at(std::size_t{0}, j) == 0.0);
}

TEST_CASE("wide conv: k=1 identity kernel reproduces the input") {
  Rng rng(1);
  const Tensor input = random_tensor({4, 3}, rng);
  Tensor kernel({1, 3, 3});
  for (std::size_t c = 0; c < 3; ++c) kernel.at(std::size_t{0}, c, c) = 1.0;
  const Tensor bias({3});
  const Tensor out = wide_conv1d(input, kernel, bias);
  REQUIRE(out.shape == input.shape);
  for (std::size_t i = 0; i < out.size(); ++i)
    CHECK(out[i] == doctest::Approx(input[i]));
}

TEST_CASE("wide conv output length is L+k-1") {
  Rng rng(2);
  const Tensor input = random_tensor({3, 2}, rng);
  const Tensor kernel = random_tensor({3, 2, 5}, rng);
  const Tensor bias = random_tensor({5}, rng);
  CHECK(wide_conv1d(input, kernel, bias).dim(0) == 5);

  const Tensor one = random_tensor({1, 2}, rng);
  CHECK(wide_conv1d(one, kernel, bias).dim(0) == 3);
}

TEST_CASE("wide conv gradients match finite differences") {
  Rng rng(3);
  for (int seed = 0; seed < 10; ++seed) {
    Tensor input = random_tensor({2 + rng.below(4), 1 + rng.below(3)}, rng);
    Tensor kernel =
        random_tensor({1 + rng.below(4), input.dim(1), 1 + rng.below(3)}, rng);
    Tensor bias = random_tensor({kernel.dim(2)}, rng);
    const Tensor w = random_tensor(
        {input.dim(0) + kernel.dim(0) - 1, kernel.dim(2)}, rng);

    auto loss = [&] { return weighted(wide_conv1d(input, kernel, bias), w); };

    Tensor gi(input.shape), gk(kernel.shape), gb(bias.shape);
    wide_conv1d_backward(input, kernel, w, gi, gk, gb);

    for (std::size_t i = 0; i < input.size(); ++i)
      CHECK(oracle::rel_error(gi[i], oracle::finite_diff(&input.data[i], loss)) <
            1e-6);
    for (std::size_t i = 0; i < kernel.size(); ++i)
      CHECK(oracle::rel_error(gk[i], oracle::finite_diff(&kernel.data[i], loss)) <
            1e-6);
    for (std::size_t i = 0; i < bias.size(); ++i)
      CHECK(oracle::rel_error(gb[i], oracle::finite_diff(&bias.data[i], loss)) <
            1e-6);
  }
}

TEST_CASE("activations: values and finite-difference gradients") {
  CHECK(tanh_forward(Tensor({1}))[0] == 0.0);
  Tensor neg({1});
  neg[0] = -3.5;
  CHECK(relu_forward(neg)[0] == 0.0);

  Rng rng(4);
  Tensor x = random_tensor({7}, rng, 2.0);
  const Tensor w = random_tensor({7}, rng);

  auto tanh_loss = [&] { return weighted(tanh_forward(x), w); };
  const Tensor ty = tanh_forward(x);
  const Tensor tg = tanh_backward(ty, w);
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(oracle::rel_error(tg[i], oracle::finite_diff(&x.data[i], tanh_loss)) <
          1e-6);

  auto relu_loss = [&] { return weighted(relu_forward(x), w); };
  const Tensor rg = relu_backward(x, w);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::fabs(x[i]) < 1e-4) continue;  // kink
    CHECK(oracle::rel_error(rg[i], oracle::finite_diff(&x.data[i], relu_loss)) <
          1e-6);
  }
}

TEST_CASE("global max pool: tie goes to the first row") {
  Tensor input({3, 2});
  input.fill(1.0);
  std::vector<std::size_t> argmax;
  const Tensor out = global_max_pool(input, argmax);
  CHECK(out.size() == 2);
  CHECK(argmax == std::vector<std::size_t>{0, 0});

  Tensor g({2});
  g[0] = 5.0;
  g[1] = 7.0;
  const Tensor gin = global_max_pool_backward(g, argmax, 3);
  CHECK(gin.at(std::size_t{0}, std::size_t{0}) == 5.0);
  CHECK(gin.at(std::size_t{0}, std::size_t{1}) == 7.0);
  // exactly one nonzero per channel
  for (std::size_t ch = 0; ch < 2; ++ch) {
    int nonzero = 0;
    for (std::size_t t = 0; t < 3; ++t)
      if (gin.at(t, ch) != 0.0) ++nonzero;
    CHECK(nonzero == 1);
  }
}

TEST_CASE("global max pool: single-row input is the identity") {
  Rng rng(5);
  const Tensor input = random_tensor({1, 4}, rng);
  std::vector<std::size_t> argmax;
  const Tensor out = global_max_pool(input, argmax);
  for (std::size_t i = 0; i < 4; ++i) CHECK(out[i] == input[i]);
}

TEST_CASE("global max pool gradient matches finite differences") {
  Rng rng(6);
  Tensor input = random_tensor({5, 3}, rng);
  const Tensor w = random_tensor({3}, rng);
  auto loss = [&] {
    std::vector<std::size_t> am;
    return weighted(global_max_pool(input, am), w);
  };
  std::vector<std::size_t> argmax;
  global_max_pool(input, argmax);
  const Tensor g = global_max_pool_backward(w, argmax, 5);
  for (std::size_t i = 0; i < input.size(); ++i)
    CHECK(oracle::rel_error(g[i], oracle::finite_diff(&input.data[i], loss)) <
          1e-6);
}

TEST_CASE("concat shapes and exact gradient split") {
  Rng rng(7);
  const std::vector<Tensor> parts = {random_tensor({16}, rng),
                                     random_tensor({16}, rng),
                                     random_tensor({16}, rng)};
  const Tensor whole = concat(parts);
  CHECK(whole.size() == 48);
  CHECK_THROWS_AS(concat({}), NumericError);

  const Tensor g = random_tensor({48}, rng);
  const auto split = concat_backward(g, {16, 16, 16});
  for (std::size_t p = 0; p < 3; ++p)
    for (std::size_t i = 0; i < 16; ++i)
      CHECK(split[p][i] == g[p * 16 + i]);
}

TEST_CASE("l2 normalize: unit vectors fixed, norm clamps, gradient checks") {
  Tensor unit({2});
  unit[0] = 1.0;
  CHECK(l2_normalize(unit, 1e-12)[0] == 1.0);

  Rng rng(8);
  Tensor v = random_tensor({6}, rng);
  const Tensor y = l2_normalize(v, 1e-12);
  double norm = 0.0;
  for (double x : y.data) norm += x * x;
  CHECK(std::sqrt(norm) == doctest::Approx(1.0));

  const Tensor w = random_tensor({6}, rng);
  auto loss = [&] { return weighted(l2_normalize(v, 1e-12), w); };
  const Tensor g = l2_normalize_backward(v, w, 1e-12);
  for (std::size_t i = 0; i < v.size(); ++i)
    CHECK(oracle::rel_error(g[i], oracle::finite_diff(&v.data[i], loss)) < 1e-5);
}

TEST_CASE("dense: identity weights copy, zero weights give bias, gradients") {
  Rng rng(9);
  Tensor eye({3, 3});
  for (std::size_t i = 0; i < 3; ++i) eye.at(i, i) = 1.0;
  const Tensor x = random_tensor({3}, rng);
  const Tensor zero_bias({3});
  const Tensor copy = dense(x, eye, zero_bias);
  for (std::size_t i = 0; i < 3; ++i) CHECK(copy[i] == doctest::Approx(x[i]));

  const Tensor zeros({3, 2});
  Tensor bias({2});
  bias[0] = 4.0;
  bias[1] = -2.0;
  const Tensor only_bias = dense(x, zeros, bias);
  CHECK(only_bias[0] == 4.0);
  CHECK(only_bias[1] == -2.0);

  Tensor W = random_tensor({4, 3}, rng);
  Tensor b = random_tensor({3}, rng);
  Tensor xin = random_tensor({4}, rng);
  const Tensor w = random_tensor({3}, rng);
  auto loss = [&] { return weighted(dense(xin, W, b), w); };
  Tensor gx(xin.shape), gW(W.shape), gb(b.shape);
  dense_backward(xin, W, w, gx, gW, gb);
  for (std::size_t i = 0; i < xin.size(); ++i)
    CHECK(oracle::rel_error(gx[i], oracle::finite_diff(&xin.data[i], loss)) <
          1e-6);
  for (std::size_t i = 0; i < W.size(); ++i)
    CHECK(oracle::rel_error(gW[i], oracle::finite_diff(&W.data[i], loss)) <
          1e-6);
  for (std::size_t i = 0; i < b.size(); ++i)
    CHECK(oracle::rel_error(gb[i], oracle::finite_diff(&b.data[i], loss)) <
          1e-6);
}

TEST_CASE("softmax cross-entropy: uniform case, stabilization, gradient") {
  Tensor logits({4});
  const SoftmaxLoss uniform = softmax_cross_entropy(logits, 2);
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(uniform.probs[i] == doctest::Approx(0.25));
  CHECK(uniform.loss == doctest::Approx(std::log(4.0)));

  Tensor huge({2});
  huge[0] = 1000.0;
  const SoftmaxLoss stab = softmax_cross_entropy(huge, 0);
  CHECK(std::isfinite(stab.loss));
  CHECK(stab.probs[0] == doctest::Approx(1.0));

  Rng rng(10);
  Tensor z = random_tensor({5}, rng, 3.0);
  const int gold = 3;
  auto loss = [&] { return softmax_cross_entropy(z, gold).loss; };
  const SoftmaxLoss r = softmax_cross_entropy(z, gold);
  double psum = 0.0;
  for (double p : r.probs.data) {
    CHECK(p >= 0.0);
    psum += p;
  }
  CHECK(std::fabs(psum - 1.0) < 1e-12);
  for (std::size_t i = 0; i < z.size(); ++i)
    CHECK(oracle::rel_error(r.grad[i], oracle::finite_diff(&z.data[i], loss)) <
          1e-6);
}

TEST_CASE("rmsprop: zero gradient leaves params unchanged") {
  Tensor p({3});
  p[0] = 1.0;
  p[1] = -2.0;
  p[2] = 0.5;
  const Tensor before = p;
  Tensor g({3}), acc({3});
  rmsprop_update(p, g, acc, 0.001, 0.9, 1e-7);
  for (std::size_t i = 0; i < 3; ++i) CHECK(p[i] == before[i]);
}

TEST_CASE("rmsprop single step hand evaluation") {
  Tensor p({1}), g({1}), acc({1});
  g[0] = 1.0;
  rmsprop_update(p, g, acc, 0.001, 0.9, 1e-7);
  CHECK(acc[0] == doctest::Approx(0.1));
  CHECK(p[0] == doctest::Approx(-0.001 / (std::sqrt(0.1) + 1e-7)));
  CHECK(p[0] == doctest::Approx(-0.0031623).epsilon(1e-4));
}

TEST_CASE("rmsprop step size approaches lr under constant gradient") {
  Tensor p({1}), g({1}), acc({1});
  g[0] = 2.0;
  double prev = 0.0;
  for (int i = 0; i < 500; ++i) {
    prev = p[0];
    rmsprop_update(p, g, acc, 0.001, 0.9, 1e-7);
  }
  CHECK(std::fabs(p[0] - prev) == doctest::Approx(0.001).epsilon(1e-3));
  CHECK(acc[0] == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("checkpoint round-trips bit-exactly") {
  Rng rng(11);
  Tensor a = random_tensor({3, 4}, rng);
  Tensor b = random_tensor({2, 2, 2}, rng);
  testutil::TempDir dir("tscnn-ckpt");
  const auto path = dir.path / "model.ckpt";
  save_checkpoint(path, {{"alpha", &a}, {"beta", &b}});

  const auto loaded = load_checkpoint(path);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[0].first == "alpha");
  CHECK(loaded[0].second.shape == a.shape);
  CHECK(loaded[0].second.data == a.data);
  CHECK(loaded[1].first == "beta");
  CHECK(loaded[1].second.data == b.data);

  // Saving again produces identical bytes.
  const auto path2 = dir.path / "model2.ckpt";
  save_checkpoint(path2, {{"alpha", &a}, {"beta", &b}});
  CHECK(testutil::read_file(path) == testutil::read_file(path2));

  CHECK_THROWS_AS(load_checkpoint(dir.path / "missing.ckpt"), DataError);
}
