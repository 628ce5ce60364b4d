#include <gtest/gtest.h>

#include <cmath>

#include "deeptraj/error.hpp"
#include "deeptraj/optimizer.hpp"
#include "deeptraj/rng.hpp"

using namespace deeptraj;

namespace {

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected a deeptraj::Error";
  return ErrorKind::InvalidArgument;
}

// 20 constant-plus-noise sequences of length 8.
Matrix toy_data() {
  RngStream rng(77);
  Matrix m(20, 8);
  for (std::size_t i = 0; i < 20; ++i) {
    const double level = rng.uniform(-3.0, 3.0);
    for (std::size_t t = 0; t < 8; ++t) m(i, t) = level + 0.1 * rng.normal();
  }
  return m;
}

ModelDims toy_dims() {
  ModelDims d;
  d.seq_len = 8;
  d.hidden_size = 8;
  d.decoder_widths = {16};
  return d;
}

}  // namespace

TEST(RmsProp, ScalarHandEvaluation) {
  ModelDims d;
  d.hidden_size = 1;
  d.embed_dim = 1;
  d.seq_len = 2;
  d.decoder_widths = {};
  AutoencoderModel m(d);
  auto grads = GradientSet::zeros_like(m.params);
  grads.values.head.bias(0, 0) = 2.0;
  auto state = OptimizerState::zeros_like(m.params);
  TrainConfig cfg;
  cfg.learning_rate = 0.1;
  rmsprop_step(m.params, grads, state, cfg);
  const std::size_t head_bias = m.params.tensors().size() - 1;
  EXPECT_NEAR(state.accumulators[head_bias](0, 0), 0.4, 1e-15);
  EXPECT_NEAR(m.params.head.bias(0, 0), -0.1 * 2.0 / (std::sqrt(0.4) + 1e-8), 1e-15);
  EXPECT_NEAR(m.params.head.bias(0, 0), -0.31623, 1e-5);
  EXPECT_EQ(m.params.head.bias(1, 0), 0.0);
  EXPECT_EQ(state.steps, 1u);
}

TEST(RmsProp, ZeroGradientDecaysAccumulatorsOnly) {
  RngStream rng(1);
  auto m = initialize_model(toy_dims(), rng);
  const Parameters before = m.params;
  auto state = OptimizerState::zeros_like(m.params);
  for (auto& acc : state.accumulators) acc.fill(2.0);
  rmsprop_step(m.params, GradientSet::zeros_like(m.params), state, TrainConfig{});
  const auto a = before.tensors();
  const auto b = m.params.tensors();
  for (std::size_t t = 0; t < a.size(); ++t) EXPECT_EQ(*a[t], *b[t]);
  for (const auto& acc : state.accumulators)
    for (double v : acc.values()) EXPECT_DOUBLE_EQ(v, 1.8);
}

TEST(RmsProp, FirstStepOpposesGradientAndAccumulatorsStayNonNegative) {
  RngStream rng(2);
  auto m = initialize_model(toy_dims(), rng);
  const Parameters before = m.params;
  const auto lg = backward(m, toy_data());
  auto state = OptimizerState::zeros_like(m.params);
  rmsprop_step(m.params, lg.grads, state, TrainConfig{});
  const auto p0 = before.tensors();
  const auto p1 = m.params.tensors();
  const auto g = lg.grads.values.tensors();
  for (std::size_t t = 0; t < g.size(); ++t)
    for (std::size_t k = 0; k < g[t]->size(); ++k) {
      const double step = p1[t]->values()[k] - p0[t]->values()[k];
      const double grad = g[t]->values()[k];
      if (grad != 0.0) EXPECT_LT(step * grad, 0.0);
      EXPECT_GE(state.accumulators[t].values()[k], 0.0);
    }
}

TEST(RmsProp, ShapeMismatch) {
  RngStream rng(3);
  auto m = initialize_model(toy_dims(), rng);
  ModelDims other = toy_dims();
  other.hidden_size = 3;
  const auto grads = GradientSet::zeros_like(AutoencoderModel(other).params);
  auto state = OptimizerState::zeros_like(m.params);
  EXPECT_EQ(kind_of([&] { rmsprop_step(m.params, grads, state, TrainConfig{}); }), ErrorKind::ShapeMismatch);
}

TEST(RmsProp, TinyStepIsContinuous) {
  RngStream rng(4);
  auto m = initialize_model(toy_dims(), rng);
  const Matrix data = toy_data();
  const double before = reconstruction_loss(m, data);
  auto state = OptimizerState::zeros_like(m.params);
  TrainConfig cfg;
  cfg.learning_rate = 1e-8;
  rmsprop_step(m.params, backward(m, data).grads, state, cfg);
  EXPECT_LE(std::abs(reconstruction_loss(m, data) - before), 1e-4);
}

TEST(TrainConfig, Validation) {
  TrainConfig c;
  c.learning_rate = 0;
  EXPECT_EQ(kind_of([&] { c.validate(); }), ErrorKind::InvalidArgument);
  c = TrainConfig{};
  c.rho = 1.0;
  EXPECT_EQ(kind_of([&] { c.validate(); }), ErrorKind::InvalidArgument);
  c = TrainConfig{};
  c.epochs = 0;
  EXPECT_EQ(kind_of([&] { c.validate(); }), ErrorKind::InvalidArgument);
}

TEST(Train, DeterministicForSameSeed) {
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.batch_size = 6;
  cfg.seed = 17;
  const auto a = train(toy_data(), toy_dims(), cfg);
  const auto b = train(toy_data(), toy_dims(), cfg);
  EXPECT_EQ(a.loss_history, b.loss_history);
  const auto ta = a.model.params.tensors();
  const auto tb = b.model.params.tensors();
  for (std::size_t t = 0; t < ta.size(); ++t) EXPECT_EQ(*ta[t], *tb[t]);
  cfg.seed = 18;
  EXPECT_NE(train(toy_data(), toy_dims(), cfg).loss_history, a.loss_history);
}

TEST(Train, ToyLossHalves) {
  TrainConfig cfg;
  cfg.epochs = 200;
  cfg.seed = 1;
  const auto res = train(toy_data(), toy_dims(), cfg);
  ASSERT_EQ(res.loss_history.size(), 200u);
  EXPECT_LT(res.loss_history.back(), 0.5 * res.loss_history.front());
}

TEST(Train, OneFullBatchEpochIsOneStep) {
  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.batch_size = 0;
  const auto res = train(toy_data(), toy_dims(), cfg);
  EXPECT_EQ(res.optimizer.steps, 1u);
  EXPECT_EQ(res.optimizer.accumulators.size(), res.model.params.tensors().size());
  cfg.batch_size = 6;  // 20 sequences -> 4 batches
  EXPECT_EQ(train(toy_data(), toy_dims(), cfg).optimizer.steps, 4u);
}

TEST(Train, FirstEpochLossIsBatchWeightedMean) {
  // Full batch: the first recorded loss is the loss of the initial model.
  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.batch_size = 0;
  cfg.seed = 5;
  const Matrix data = toy_data();
  const auto res = train(data, toy_dims(), cfg);
  RngStream init = RngStream(5).child(0);
  AutoencoderModel m0 = initialize_model(toy_dims(), init);
  EXPECT_DOUBLE_EQ(res.loss_history[0], reconstruction_loss(m0, normalize(data, res.model.norm)));
}

TEST(Train, StoresGlobalNormalization) {
  const Matrix data = toy_data();
  TrainConfig cfg;
  cfg.epochs = 1;
  const auto res = train(data, toy_dims(), cfg);
  double mean = 0.0;
  for (double v : data.values()) mean += v;
  mean /= static_cast<double>(data.size());
  double var = 0.0;
  for (double v : data.values()) var += (v - mean) * (v - mean);
  var /= static_cast<double>(data.size());
  EXPECT_NEAR(res.model.norm.mean, mean, 1e-12);
  EXPECT_NEAR(res.model.norm.sd, std::sqrt(var), 1e-12);
}

TEST(Train, Errors) {
  EXPECT_EQ(kind_of([] { train(Matrix(0, 8), toy_dims(), TrainConfig{}); }), ErrorKind::EmptyDataset);
  EXPECT_EQ(kind_of([] { train(Matrix(3, 5), toy_dims(), TrainConfig{}); }), ErrorKind::LengthMismatch);
  TrainConfig wild;
  wild.learning_rate = 1e200;
  wild.epochs = 5;
  EXPECT_EQ(kind_of([&] { train(toy_data(), toy_dims(), wild); }), ErrorKind::NonFiniteLoss);
}

TEST(Train, ClippingKeepsTrainingFinite) {
  TrainConfig cfg;
  cfg.epochs = 20;
  cfg.clip_gradients = true;
  cfg.clip_norm = 0.5;
  const auto res = train(toy_data(), toy_dims(), cfg);
  for (double l : res.loss_history) EXPECT_TRUE(std::isfinite(l));
}
