#include <gtest/gtest.h>

#include <cmath>

#include "deeptraj/autoencoder.hpp"
#include "deeptraj/error.hpp"
#include "deeptraj/lstm.hpp"
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

ModelDims small_dims(std::size_t T = 5) {
  ModelDims d;
  d.input_size = 1;
  d.seq_len = T;
  d.hidden_size = 4;
  d.embed_dim = 2;
  return d;
}

Matrix random_batch(std::size_t n, std::size_t len, std::uint64_t seed) {
  RngStream rng(seed);
  Matrix b(n, len);
  for (double& v : b.values()) v = rng.normal();
  return b;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Scalar LSTM oracle written directly from the gate equations.
struct ScalarCell {
  double wf = 0, uf = 0, bf = 0, wi = 0, ui = 0, bi = 0, wo = 0, uo = 0, bo = 0, wc = 0, uc = 0, bc = 0;

  void step(double x, double& h, double& c) const {
    const double f = sigmoid(wf * x + uf * h + bf);
    const double i = sigmoid(wi * x + ui * h + bi);
    const double o = sigmoid(wo * x + uo * h + bo);
    const double g = std::tanh(wc * x + uc * h + bc);
    c = f * c + i * g;
    h = o * std::tanh(c);
  }

  void install(LstmParams& p) const {
    const double vals[4][3] = {{wf, uf, bf}, {wi, ui, bi}, {wo, uo, bo}, {wc, uc, bc}};
    for (std::size_t k = 0; k < 4; ++k) {
      p.gates[k].input_weights(0, 0) = vals[k][0];
      p.gates[k].recurrent_weights(0, 0) = vals[k][1];
      p.gates[k].bias(0, 0) = vals[k][2];
    }
  }
};

}  // namespace

TEST(LstmStep, ZeroParametersKeepZeroState) {
  const LstmParams p(3, 2);
  const auto s = lstm_step(p, Vector{1.0, -2.0, 5.0}, LstmState::zeros(2));
  EXPECT_EQ(s.h, (Vector{0, 0}));
  EXPECT_EQ(s.c, (Vector{0, 0}));
}

TEST(LstmStep, ZeroParametersHalveCell) {
  const LstmParams p(1, 1);
  const auto s = lstm_step(p, Vector{0.3}, LstmState{{0.0}, {2.0}});
  EXPECT_DOUBLE_EQ(s.c[0], 1.0);
  EXPECT_NEAR(s.h[0], 0.5 * std::tanh(1.0), 1e-15);
  EXPECT_NEAR(s.h[0], 0.3808, 1e-4);
}

TEST(LstmStep, SaturatedGates) {
  LstmParams p(1, 1);
  ScalarCell cell;
  cell.bi = 50;
  cell.bf = -50;
  cell.bo = 50;
  cell.wc = 1;
  cell.install(p);
  const auto s = lstm_step(p, Vector{0.5}, LstmState{{0.0}, {7.0}});
  EXPECT_NEAR(s.c[0], std::tanh(0.5), 1e-12);
  EXPECT_NEAR(s.h[0], std::tanh(std::tanh(0.5)), 1e-12);
  EXPECT_NEAR(s.c[0], 0.4621, 1e-4);
  EXPECT_NEAR(s.h[0], 0.4318, 1e-4);
}

TEST(LstmStep, CandidateUsesTanhNotLogistic) {
  LstmParams p(1, 1);
  ScalarCell cell;
  cell.bc = -3.0;  // tanh(-3) < 0, logistic(-3) > 0
  cell.install(p);
  const auto s = lstm_step(p, Vector{0.0}, LstmState::zeros(1));
  EXPECT_LT(s.c[0], 0.0);
  EXPECT_NEAR(s.c[0], 0.5 * std::tanh(-3.0), 1e-15);
}

TEST(LstmStep, ShapeMismatch) {
  const LstmParams p(2, 3);
  EXPECT_EQ(kind_of([&] { lstm_step(p, Vector{1.0}, LstmState::zeros(3)); }), ErrorKind::ShapeMismatch);
  EXPECT_EQ(kind_of([&] { lstm_step(p, Vector{1.0, 2.0}, LstmState::zeros(2)); }), ErrorKind::ShapeMismatch);
}

TEST(LstmStep, HiddenOutputStaysInsideUnitInterval) {
  RngStream rng(4);
  LstmParams p(2, 5);
  for (auto& g : p.gates)
    for (Matrix* m : {&g.input_weights, &g.recurrent_weights, &g.bias})
      for (double& v : m->values()) v = rng.uniform(-3.0, 3.0);
  LstmState s = LstmState::zeros(5);
  for (int t = 0; t < 200; ++t) {
    s = lstm_step(p, Vector{rng.normal(0, 3), rng.normal(0, 3)}, s);
    for (double h : s.h) EXPECT_LT(std::abs(h), 1.0);
    for (double c : s.c) EXPECT_TRUE(std::isfinite(c));
  }
}

TEST(Encode, ZeroModelReturnsBottleneckBias) {
  AutoencoderModel m(small_dims());
  m.params.bottleneck.bias(0, 0) = 0.25;
  m.params.bottleneck.bias(1, 0) = -1.5;
  EXPECT_EQ(encode(m, Vector{1, 2, 3, 4, 5}), (Vector{0.25, -1.5}));
}

TEST(Encode, HandBuiltScalarTrace) {
  ModelDims d;
  d.hidden_size = 1;
  d.embed_dim = 1;
  d.seq_len = 2;
  d.decoder_widths = {};
  AutoencoderModel m(d);
  ScalarCell cell{0.4, -0.3, 0.1, 0.7, 0.2, -0.1, -0.5, 0.6, 0.3, 1.2, -0.8, 0.05};
  cell.install(m.params.encoder);
  m.params.bottleneck.weight(0, 0) = 2.0;
  m.params.bottleneck.bias(0, 0) = -0.5;
  double h = 0, c = 0;
  cell.step(0.9, h, c);
  cell.step(-1.3, h, c);
  const Vector e = encode(m, Vector{0.9, -1.3});
  ASSERT_EQ(e.size(), 1u);
  EXPECT_NEAR(e[0], 2.0 * h - 0.5, 1e-15);
}

TEST(Encode, LengthMismatch) {
  const AutoencoderModel m(small_dims());
  EXPECT_EQ(kind_of([&] { encode(m, Vector{1, 2, 3}); }), ErrorKind::LengthMismatch);
}

TEST(Encode, RandomModelGivesFiniteEmbeddingOfSizeD) {
  RngStream rng(8);
  const auto m = initialize_model(small_dims(), rng);
  const Vector e = encode(m, Vector{0.1, 0.2, -0.3, 0.4, 2.0});
  ASSERT_EQ(e.size(), 2u);
  for (double v : e) EXPECT_TRUE(std::isfinite(v));
  EXPECT_EQ(e, encode(m, Vector{0.1, 0.2, -0.3, 0.4, 2.0}));
}

TEST(Decode, ZeroModelReturnsHeadBias) {
  AutoencoderModel m(small_dims());
  for (std::size_t t = 0; t < 5; ++t) m.params.head.bias(t, 0) = 0.5 * static_cast<double>(t);
  EXPECT_EQ(decode(m, Vector{3.0, -2.0}), (Vector{0, 0.5, 1.0, 1.5, 2.0}));
}

TEST(Decode, HandTracedLinearLayer) {
  ModelDims d;
  d.hidden_size = 1;
  d.embed_dim = 1;
  d.seq_len = 2;
  d.decoder_widths = {1};
  d.decoder_activation = Activation::Identity;
  AutoencoderModel m(d);
  m.params.decoder[0].weight(0, 0) = 3.0;
  m.params.decoder[0].bias(0, 0) = 1.0;
  m.params.head.weight(0, 0) = 1.0;
  m.params.head.weight(1, 0) = -2.0;
  m.params.head.bias(1, 0) = 0.5;
  // z = 3 * 2 + 1 = 7; y = (7, -14 + 0.5)
  EXPECT_EQ(decode(m, Vector{2.0}), (Vector{7.0, -13.5}));
}

TEST(Decode, TanhDecoderAndShapes) {
  RngStream rng(12);
  const auto m = initialize_model(small_dims(7), rng);
  EXPECT_EQ(decode(m, Vector{0.1, 0.2}).size(), 7u);
  EXPECT_EQ(kind_of([&] { decode(m, Vector{0.1}); }), ErrorKind::ShapeMismatch);
}

TEST(Model, RejectsOvercompleteArchitecture) {
  ModelDims d = small_dims(2);
  d.embed_dim = 2;
  EXPECT_EQ(kind_of([&] { AutoencoderModel(d).validate(); }), ErrorKind::InvalidArgument);
}

TEST(Model, InitializationScale) {
  RngStream rng(1);
  const ModelDims d = small_dims();
  const auto m = initialize_model(d, rng);
  const double lstm_scale = 1.0 / std::sqrt(static_cast<double>(d.input_size + d.hidden_size));
  for (const auto& g : m.params.encoder.gates)
    for (const Matrix* t : {&g.input_weights, &g.recurrent_weights, &g.bias})
      for (double v : t->values()) EXPECT_LE(std::abs(v), lstm_scale);
  const double head_scale = 1.0 / std::sqrt(32.0);
  for (double v : m.params.head.weight.values()) EXPECT_LE(std::abs(v), head_scale);
  RngStream again(1);
  const auto m2 = initialize_model(d, again);
  EXPECT_EQ(m.params.head.weight, m2.params.head.weight);
}

TEST(Loss, ZeroModelOnConstantSequenceIsSquare) {
  const AutoencoderModel m(small_dims());
  const Matrix batch{{1.5, 1.5, 1.5, 1.5, 1.5}};
  EXPECT_DOUBLE_EQ(reconstruction_loss(m, batch), 1.5 * 1.5);
}

TEST(Loss, ExactReconstructionOfConstantData) {
  AutoencoderModel m(small_dims());
  for (std::size_t t = 0; t < 5; ++t) m.params.head.bias(t, 0) = 2.0;
  const Matrix batch{{2, 2, 2, 2, 2}, {2, 2, 2, 2, 2}};
  EXPECT_EQ(reconstruction_loss(m, batch), 0.0);
  const auto lg = backward(m, batch);
  for (double g : lg.grads.values.head.weight.values()) EXPECT_NEAR(g, 0.0, 1e-12);
  for (double g : lg.grads.values.head.bias.values()) EXPECT_NEAR(g, 0.0, 1e-12);
}

TEST(Loss, InvariantUnderReorderingAndNonNegative) {
  RngStream rng(3);
  const auto m = initialize_model(small_dims(), rng);
  const Matrix batch = random_batch(6, 5, 4);
  Matrix reversed(6, 5);
  for (std::size_t r = 0; r < 6; ++r)
    for (std::size_t c = 0; c < 5; ++c) reversed(r, c) = batch(5 - r, c);
  EXPECT_NEAR(reconstruction_loss(m, batch), reconstruction_loss(m, reversed), 1e-14);
  EXPECT_GT(reconstruction_loss(m, batch), 0.0);
}

TEST(Loss, Errors) {
  const AutoencoderModel m(small_dims());
  EXPECT_EQ(kind_of([&] { reconstruction_loss(m, Matrix(0, 5)); }), ErrorKind::EmptyBatch);
  EXPECT_EQ(kind_of([&] { backward(m, Matrix(0, 5)); }), ErrorKind::EmptyBatch);
  EXPECT_EQ(kind_of([&] { reconstruction_loss(m, Matrix(2, 4)); }), ErrorKind::LengthMismatch);
}

TEST(Backward, LossMatchesForwardBitForBit) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    RngStream rng(seed);
    const auto m = initialize_model(small_dims(), rng);
    const Matrix batch = random_batch(8, 5, seed + 100);
    EXPECT_EQ(backward(m, batch).loss, reconstruction_loss(m, batch));
  }
}

TEST(Backward, DuplicatedBatchLeavesGradientsUnchanged) {
  RngStream rng(21);
  const auto m = initialize_model(small_dims(), rng);
  const Matrix batch = random_batch(4, 5, 22);
  Matrix doubled(8, 5);
  for (std::size_t r = 0; r < 8; ++r)
    for (std::size_t c = 0; c < 5; ++c) doubled(r, c) = batch(r % 4, c);
  const auto ra = backward(m, batch);
  const auto rb = backward(m, doubled);
  const auto a = ra.grads.values.tensors();
  const auto b = rb.grads.values.tensors();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t t = 0; t < a.size(); ++t)
    for (std::size_t k = 0; k < a[t]->size(); ++k) EXPECT_NEAR(a[t]->values()[k], b[t]->values()[k], 1e-12);
}

TEST(Backward, MatchesIndependentFiniteDifferences) {
  // Plain double-precision central differences computed here, compared with
  // a tolerance that absorbs their rounding noise.
  RngStream rng(30);
  ModelDims d = small_dims(4);
  d.decoder_widths = {5};
  auto m = initialize_model(d, rng);
  const Matrix batch = random_batch(3, 4, 31);
  const auto result = backward(m, batch);
  const auto analytic = result.grads.values.tensors();
  auto params = m.params.tensors();
  const double h = 1e-6;
  for (std::size_t t = 0; t < params.size(); ++t) {
    for (std::size_t k = 0; k < params[t]->size(); ++k) {
      double& p = params[t]->values()[k];
      const double orig = p;
      p = orig + h;
      const double up = reconstruction_loss(m, batch);
      p = orig - h;
      const double down = reconstruction_loss(m, batch);
      p = orig;
      EXPECT_NEAR(analytic[t]->values()[k], (up - down) / (2 * h), 1e-7) << "tensor " << t << " entry " << k;
    }
  }
}

TEST(GradientCheck, CorrectImplementationPasses) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    RngStream rng(seed);
    const auto m = initialize_model(small_dims(), rng);
    const double err = gradient_check(m, random_batch(8, 5, seed + 50), 1e-5);
    EXPECT_GE(err, 0.0);
    EXPECT_LT(err, 1e-5);
  }
}

TEST(GradientCheck, DetectsZeroedGateBiasGradient) {
  RngStream rng(5);
  const auto m = initialize_model(small_dims(), rng);
  const GradientFn faulty = [](const AutoencoderModel& model, const Matrix& batch) {
    auto lg = backward(model, batch);
    lg.grads.values.encoder.gate(Gate::Input).bias.fill(0.0);
    return lg;
  };
  EXPECT_GT(gradient_check(m, random_batch(8, 5, 6), 1e-5, faulty), 1e-2);
}

TEST(GradientCheck, RejectsBadEpsilon) {
  const AutoencoderModel m(small_dims());
  const Matrix batch = random_batch(2, 5, 1);
  EXPECT_EQ(kind_of([&] { gradient_check(m, batch, 0.0); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([&] { gradient_check(m, batch, 1e-2); }), ErrorKind::InvalidArgument);
}

TEST(Embed, NormalizesWithModelStatistics) {
  RngStream rng(9);
  auto m = initialize_model(small_dims(), rng);
  m.norm = {10.0, 2.0};
  const Matrix raw{{10, 12, 8, 14, 6}};
  const Matrix e = embed(m, raw);
  EXPECT_EQ(e.rows(), 1u);
  EXPECT_EQ(e.row(0)[0], encode(m, Vector{0, 1, -1, 2, -2})[0]);
}
