#include "deeptraj/autoencoder.hpp"

#include <algorithm>
#include <cmath>

#include "deeptraj/error.hpp"

namespace deeptraj {

std::string_view to_string(Activation a) {
  return a == Activation::Tanh ? "tanh" : "identity";
}

Activation parse_activation(std::string_view name) {
  if (name == "tanh") return Activation::Tanh;
  if (name == "identity" || name == "linear") return Activation::Identity;
  throw Error(ErrorKind::InvalidArgument, "unknown activation '" + std::string(name) + "'");
}

namespace {

DenseLayer make_layer(std::size_t in, std::size_t out, Activation act) {
  return DenseLayer{Matrix(out, in), Matrix(out, 1), act};
}

void apply_activation(Activation act, std::span<double> z) {
  if (act == Activation::Tanh)
    for (double& v : z) v = std::tanh(v);
}

Vector dense_forward(const DenseLayer& layer, std::span<const double> in) {
  const auto bias = layer.bias.values();
  Vector z(bias.begin(), bias.end());
  gemv_acc(layer.weight, in, z);
  apply_activation(layer.activation, z);
  return z;
}

/// Forward pass of one sequence with everything backward needs.
struct SequenceTrace {
  std::vector<LstmState> states;  // states[t] is the state before step t; T + 1 entries
  std::vector<LstmStepCache> caches;
  Vector embedding;
  std::vector<Vector> decoder_outputs;
  Vector output;
};

LstmState run_encoder(const AutoencoderModel& model, std::span<const double> sequence,
                      SequenceTrace* trace) {
  const std::size_t m = model.dims.input_size;
  const std::size_t steps = model.dims.seq_len;
  require(sequence.size() == steps * m, ErrorKind::LengthMismatch,
          "sequence length does not match the model's T * input_size");
  LstmState state = LstmState::zeros(model.dims.hidden_size);
  if (trace) {
    trace->states.reserve(steps + 1);
    trace->caches.resize(steps);
    trace->states.push_back(state);
  }
  for (std::size_t t = 0; t < steps; ++t) {
    state = lstm_step(model.params.encoder, sequence.subspan(t * m, m), state,
                      trace ? &trace->caches[t] : nullptr);
    if (trace) trace->states.push_back(state);
  }
  return state;
}

Vector run_decoder(const AutoencoderModel& model, std::span<const double> embedding,
                   SequenceTrace* trace) {
  require(embedding.size() == model.dims.embed_dim, ErrorKind::ShapeMismatch,
          "embedding has the wrong dimension");
  Vector z(embedding.begin(), embedding.end());
  for (const auto& layer : model.params.decoder) {
    z = dense_forward(layer, z);
    if (trace) trace->decoder_outputs.push_back(z);
  }
  return dense_forward(model.params.head, z);
}

Vector forward(const AutoencoderModel& model, std::span<const double> sequence, SequenceTrace* trace) {
  const LstmState last = run_encoder(model, sequence, trace);
  Vector embedding = dense_forward(model.params.bottleneck, last.h);
  Vector out = run_decoder(model, embedding, trace);
  if (trace) {
    trace->embedding = std::move(embedding);
    trace->output = out;
  }
  return out;
}

double sequence_sse(std::span<const double> output, std::span<const double> target) {
  double sse = 0.0;
  for (std::size_t k = 0; k < output.size(); ++k) {
    const double d = output[k] - target[k];
    sse += d * d;
  }
  return sse;
}

void check_batch(const AutoencoderModel& model, const Matrix& batch) {
  require(batch.rows() > 0, ErrorKind::EmptyBatch, "batch has no sequences");
  require(batch.cols() == model.dims.output_size(), ErrorKind::LengthMismatch,
          "batch rows must hold T * input_size values");
}

/// Backpropagates dL/dz through a dense layer given its input and output.
/// Accumulates into `grad` and returns dL/d(input).
Vector dense_backward(const DenseLayer& layer, std::span<const double> in, std::span<const double> out,
                      Vector dz, DenseLayer& grad) {
  if (layer.activation == Activation::Tanh)
    for (std::size_t j = 0; j < dz.size(); ++j) dz[j] *= 1.0 - out[j] * out[j];
  outer_acc(dz, in, grad.weight);
  auto gb = grad.bias.values();
  for (std::size_t j = 0; j < dz.size(); ++j) gb[j] += dz[j];
  Vector din(layer.in(), 0.0);
  gemv_t_acc(layer.weight, dz, din);
  return din;
}

void backward_sequence(const AutoencoderModel& model, std::span<const double> sequence,
                       const SequenceTrace& trace, Vector d_output, Parameters& grads) {
  const Parameters& p = model.params;

  // Output head and decoder MLP, last layer first.
  const std::size_t n_dec = p.decoder.size();
  std::span<const double> head_in =
      n_dec == 0 ? std::span<const double>(trace.embedding) : std::span<const double>(trace.decoder_outputs.back());
  Vector dz = dense_backward(p.head, head_in, trace.output, std::move(d_output), grads.head);
  for (std::size_t l = n_dec; l-- > 0;) {
    std::span<const double> in =
        l == 0 ? std::span<const double>(trace.embedding) : std::span<const double>(trace.decoder_outputs[l - 1]);
    dz = dense_backward(p.decoder[l], in, trace.decoder_outputs[l], std::move(dz), grads.decoder[l]);
  }

  // Bottleneck.
  const std::size_t steps = model.dims.seq_len;
  const std::size_t hidden = model.dims.hidden_size;
  const std::size_t m = model.dims.input_size;
  Vector dh = dense_backward(p.bottleneck, trace.states[steps].h, trace.embedding, std::move(dz),
                             grads.bottleneck);

  // Backpropagation through time.
  Vector dc_next(hidden, 0.0);
  std::array<Vector, kGateCount> da;
  for (auto& v : da) v.assign(hidden, 0.0);
  for (std::size_t t = steps; t-- > 0;) {
    const LstmStepCache& cache = trace.caches[t];
    const LstmState& prev = trace.states[t];
    const LstmState& cur = trace.states[t + 1];
    auto& da_f = da[static_cast<std::size_t>(Gate::Forget)];
    auto& da_i = da[static_cast<std::size_t>(Gate::Input)];
    auto& da_o = da[static_cast<std::size_t>(Gate::Output)];
    auto& da_c = da[static_cast<std::size_t>(Gate::Cell)];
    for (std::size_t j = 0; j < hidden; ++j) {
      const double f = cache.forget[j];
      const double i = cache.input[j];
      const double o = cache.output[j];
      const double g = cache.candidate[j];
      const double tc = std::tanh(cur.c[j]);
      const double dc = dc_next[j] + dh[j] * o * (1.0 - tc * tc);
      da_o[j] = dh[j] * tc * o * (1.0 - o);
      da_f[j] = dc * prev.c[j] * f * (1.0 - f);
      da_i[j] = dc * g * i * (1.0 - i);
      da_c[j] = dc * i * (1.0 - g * g);
      dc_next[j] = dc * f;
    }
    const auto x_t = sequence.subspan(t * m, m);
    std::fill(dh.begin(), dh.end(), 0.0);
    for (std::size_t k = 0; k < kGateCount; ++k) {
      GateParams& gg = grads.encoder.gates[k];
      outer_acc(da[k], x_t, gg.input_weights);
      outer_acc(da[k], prev.h, gg.recurrent_weights);
      auto gb = gg.bias.values();
      for (std::size_t j = 0; j < hidden; ++j) gb[j] += da[k][j];
      gemv_t_acc(p.encoder.gates[k].recurrent_weights, da[k], dh);
    }
  }
}

/// Loss recomputed in extended precision with its own forward pass. Used as
/// the finite-difference oracle, where double rounding would swamp small
/// partials (absolute noise ~ 1e-16 / epsilon).
using Extended = long double;

std::vector<Extended> dense_extended(const DenseLayer& layer, const std::vector<Extended>& in) {
  std::vector<Extended> z(layer.out());
  for (std::size_t r = 0; r < layer.out(); ++r) {
    Extended acc = layer.bias(r, 0);
    for (std::size_t c = 0; c < layer.in(); ++c) acc += static_cast<Extended>(layer.weight(r, c)) * in[c];
    z[r] = layer.activation == Activation::Tanh ? std::tanh(acc) : acc;
  }
  return z;
}

Extended sigmoid_extended(Extended x) { return 1.0L / (1.0L + std::exp(-x)); }

Extended loss_extended(const AutoencoderModel& model, const Matrix& batch) {
  const auto& enc = model.params.encoder;
  const std::size_t hidden = model.dims.hidden_size;
  const std::size_t m = model.dims.input_size;
  Extended total = 0.0L;
  for (std::size_t r = 0; r < batch.rows(); ++r) {
    const auto seq = batch.row(r);
    std::vector<Extended> h(hidden, 0.0L), c(hidden, 0.0L);
    std::array<std::vector<Extended>, kGateCount> a;
    for (std::size_t t = 0; t < model.dims.seq_len; ++t) {
      for (std::size_t k = 0; k < kGateCount; ++k) {
        const GateParams& g = enc.gates[k];
        a[k].assign(hidden, 0.0L);
        for (std::size_t j = 0; j < hidden; ++j) {
          Extended acc = g.bias(j, 0);
          for (std::size_t q = 0; q < m; ++q) acc += static_cast<Extended>(g.input_weights(j, q)) * seq[t * m + q];
          for (std::size_t q = 0; q < hidden; ++q) acc += static_cast<Extended>(g.recurrent_weights(j, q)) * h[q];
          a[k][j] = acc;
        }
      }
      for (std::size_t j = 0; j < hidden; ++j) {
        const Extended f = sigmoid_extended(a[static_cast<std::size_t>(Gate::Forget)][j]);
        const Extended i = sigmoid_extended(a[static_cast<std::size_t>(Gate::Input)][j]);
        const Extended o = sigmoid_extended(a[static_cast<std::size_t>(Gate::Output)][j]);
        const Extended g = std::tanh(a[static_cast<std::size_t>(Gate::Cell)][j]);
        c[j] = f * c[j] + i * g;
        h[j] = o * std::tanh(c[j]);
      }
    }
    std::vector<Extended> z = dense_extended(model.params.bottleneck, h);
    for (const auto& layer : model.params.decoder) z = dense_extended(layer, z);
    z = dense_extended(model.params.head, z);
    for (std::size_t k = 0; k < z.size(); ++k) {
      const Extended d = z[k] - seq[k];
      total += d * d;
    }
  }
  return total / static_cast<Extended>(batch.size());
}

void init_uniform(Matrix& m, double scale, RngStream& rng) {
  for (double& v : m.values()) v = rng.uniform(-scale, scale);
}

}  // namespace

std::vector<Matrix*> Parameters::tensors() {
  std::vector<Matrix*> out;
  for (auto& g : encoder.gates) {
    out.push_back(&g.input_weights);
    out.push_back(&g.recurrent_weights);
    out.push_back(&g.bias);
  }
  out.push_back(&bottleneck.weight);
  out.push_back(&bottleneck.bias);
  for (auto& layer : decoder) {
    out.push_back(&layer.weight);
    out.push_back(&layer.bias);
  }
  out.push_back(&head.weight);
  out.push_back(&head.bias);
  return out;
}

std::vector<const Matrix*> Parameters::tensors() const {
  auto mutable_view = const_cast<Parameters*>(this)->tensors();
  return {mutable_view.begin(), mutable_view.end()};
}

std::size_t Parameters::parameter_count() const {
  std::size_t n = 0;
  for (const Matrix* t : tensors()) n += t->size();
  return n;
}

AutoencoderModel::AutoencoderModel(const ModelDims& d) : dims(d) {
  params.encoder = LstmParams(d.input_size, d.hidden_size);
  params.bottleneck = make_layer(d.hidden_size, d.embed_dim, Activation::Identity);
  std::size_t width = d.embed_dim;
  for (std::size_t w : d.decoder_widths) {
    params.decoder.push_back(make_layer(width, w, d.decoder_activation));
    width = w;
  }
  params.head = make_layer(width, d.output_size(), Activation::Identity);
}

void AutoencoderModel::validate() const {
  require(dims.input_size >= 1 && dims.hidden_size >= 1 && dims.embed_dim >= 1 && dims.seq_len >= 1,
          ErrorKind::InvalidArgument, "model dimensions must be positive");
  require(dims.embed_dim < dims.output_size(), ErrorKind::InvalidArgument,
          "embedding must be smaller than the sequence (undercomplete)");
  params.encoder.validate();
  require(params.encoder.input_size() == dims.input_size &&
              params.encoder.hidden_size() == dims.hidden_size,
          ErrorKind::ShapeMismatch, "encoder shape disagrees with dims");
  auto check_layer = [](const DenseLayer& l, std::size_t in, const char* what) {
    require(l.weight.cols() == in && l.bias.rows() == l.weight.rows() && l.bias.cols() == 1,
            ErrorKind::ShapeMismatch, std::string(what) + " layer shape does not chain");
  };
  check_layer(params.bottleneck, dims.hidden_size, "bottleneck");
  require(params.bottleneck.out() == dims.embed_dim, ErrorKind::ShapeMismatch,
          "bottleneck output must equal embed_dim");
  std::size_t width = dims.embed_dim;
  for (const auto& layer : params.decoder) {
    check_layer(layer, width, "decoder");
    width = layer.out();
  }
  check_layer(params.head, width, "output head");
  require(params.head.out() == dims.output_size(), ErrorKind::ShapeMismatch,
          "output head must produce T * input_size values");
  for (const Matrix* t : params.tensors())
    require(t->all_finite(), ErrorKind::NonFiniteValue, "model parameters must be finite");
}

AutoencoderModel initialize_model(const ModelDims& dims, RngStream& rng) {
  AutoencoderModel model(dims);
  model.validate();
  const double lstm_scale = 1.0 / std::sqrt(static_cast<double>(dims.input_size + dims.hidden_size));
  for (auto& g : model.params.encoder.gates) {
    init_uniform(g.input_weights, lstm_scale, rng);
    init_uniform(g.recurrent_weights, lstm_scale, rng);
    init_uniform(g.bias, lstm_scale, rng);
  }
  auto init_layer = [&](DenseLayer& layer) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(layer.in()));
    init_uniform(layer.weight, scale, rng);
    init_uniform(layer.bias, scale, rng);
  };
  init_layer(model.params.bottleneck);
  for (auto& layer : model.params.decoder) init_layer(layer);
  init_layer(model.params.head);
  return model;
}

Vector encode(const AutoencoderModel& model, std::span<const double> sequence) {
  const LstmState last = run_encoder(model, sequence, nullptr);
  return dense_forward(model.params.bottleneck, last.h);
}

Vector decode(const AutoencoderModel& model, std::span<const double> embedding) {
  return run_decoder(model, embedding, nullptr);
}

double reconstruction_loss(const AutoencoderModel& model, const Matrix& batch) {
  check_batch(model, batch);
  double total = 0.0;
  for (std::size_t r = 0; r < batch.rows(); ++r) {
    const Vector out = forward(model, batch.row(r), nullptr);
    total += sequence_sse(out, batch.row(r));
  }
  return total / static_cast<double>(batch.size());
}

GradientSet GradientSet::zeros_like(const Parameters& params) {
  GradientSet g{params};
  for (Matrix* t : g.values.tensors()) t->fill(0.0);
  return g;
}

LossAndGradients backward(const AutoencoderModel& model, const Matrix& batch) {
  check_batch(model, batch);
  LossAndGradients result{0.0, GradientSet::zeros_like(model.params)};
  const double scale = 2.0 / static_cast<double>(batch.size());
  double total = 0.0;
  for (std::size_t r = 0; r < batch.rows(); ++r) {
    const auto target = batch.row(r);
    SequenceTrace trace;
    const Vector out = forward(model, target, &trace);
    total += sequence_sse(out, target);
    Vector d_output(out.size());
    for (std::size_t k = 0; k < out.size(); ++k) d_output[k] = scale * (out[k] - target[k]);
    backward_sequence(model, target, trace, std::move(d_output), result.grads.values);
  }
  result.loss = total / static_cast<double>(batch.size());
  return result;
}

double gradient_check(const AutoencoderModel& model, const Matrix& batch, double epsilon,
                      const GradientFn& gradient) {
  require(epsilon > 0.0 && epsilon <= 1e-3, ErrorKind::InvalidArgument,
          "gradient check epsilon must lie in (0, 1e-3]");
  check_batch(model, batch);
  const LossAndGradients analytic = gradient(model, batch);
  AutoencoderModel probe = model;
  auto probe_tensors = probe.params.tensors();
  const auto grad_tensors = analytic.grads.values.tensors();
  require(probe_tensors.size() == grad_tensors.size(), ErrorKind::ShapeMismatch,
          "gradient set is not congruent with the model");

  double worst = 0.0;
  for (std::size_t t = 0; t < probe_tensors.size(); ++t) {
    auto values = probe_tensors[t]->values();
    const auto grads = grad_tensors[t]->values();
    require(values.size() == grads.size(), ErrorKind::ShapeMismatch,
            "gradient tensor is not congruent with the model");
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double original = values[k];
      const double up = original + epsilon;
      const double down = original - epsilon;
      values[k] = up;
      const Extended plus = loss_extended(probe, batch);
      values[k] = down;
      const Extended minus = loss_extended(probe, batch);
      values[k] = original;
      // Divide by the step actually taken after rounding up/down to double.
      const double numeric = static_cast<double>((plus - minus) / (static_cast<Extended>(up) - down));
      const double a = grads[k];
      const double denom = std::max({std::abs(a), std::abs(numeric), 1e-12});
      worst = std::max(worst, std::abs(a - numeric) / denom);
    }
  }
  return worst;
}

Matrix embed(const AutoencoderModel& model, const Matrix& raw_values) {
  require(raw_values.cols() == model.dims.output_size(), ErrorKind::LengthMismatch,
          "trajectories do not match the model's sequence length");
  Matrix out(raw_values.rows(), model.dims.embed_dim);
  Vector normalized(raw_values.cols());
  for (std::size_t r = 0; r < raw_values.rows(); ++r) {
    const auto row = raw_values.row(r);
    for (std::size_t k = 0; k < row.size(); ++k) normalized[k] = model.norm.apply(row[k]);
    const Vector e = encode(model, normalized);
    std::copy(e.begin(), e.end(), out.row(r).begin());
  }
  return out;
}

}  // namespace deeptraj
