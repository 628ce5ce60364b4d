#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "deeptraj/dataset.hpp"
#include "deeptraj/lstm.hpp"
#include "deeptraj/matrix.hpp"
#include "deeptraj/rng.hpp"

namespace deeptraj {

enum class Activation { Tanh, Identity };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view name);

/// Affine layer followed by an elementwise activation.
struct DenseLayer {
  Matrix weight;  ///< out x in
  Matrix bias;    ///< out x 1
  Activation activation = Activation::Identity;

  std::size_t in() const noexcept { return weight.cols(); }
  std::size_t out() const noexcept { return weight.rows(); }
};

/// Architecture of the recurrent autoencoder.
struct ModelDims {
  std::size_t input_size = 1;   ///< values per timestep
  std::size_t hidden_size = 32;
  std::size_t embed_dim = 2;
  std::size_t seq_len = 1;      ///< T
  std::vector<std::size_t> decoder_widths{32, 32};
  Activation decoder_activation = Activation::Tanh;

  std::size_t output_size() const noexcept { return seq_len * input_size; }

  friend bool operator==(const ModelDims&, const ModelDims&) = default;
};

/// Every trainable tensor of the model. Also used as the gradient container.
struct Parameters {
  LstmParams encoder;
  DenseLayer bottleneck;             ///< hidden -> embed_dim, identity
  std::vector<DenseLayer> decoder;   ///< embed_dim -> ... -> last width
  DenseLayer head;                   ///< last width -> T * input_size, identity

  /// Tensors in serialization order: encoder gates (f, i, o, c) each as
  /// (W, U, b), then bottleneck (W, b), decoder layers (W, b), head (W, b).
  std::vector<Matrix*> tensors();
  std::vector<const Matrix*> tensors() const;

  std::size_t parameter_count() const;
};

/**
 * Undercomplete recurrent autoencoder: an LSTM reads the sequence, its last
 * hidden state is projected to a low-dimensional embedding, and an MLP plus a
 * linear head reconstructs every value of the sequence.
 */
struct AutoencoderModel {
  ModelDims dims;
  Parameters params;
  Normalization norm;  ///< statistics used to normalize training data

  /// All-zero parameters with the given architecture.
  explicit AutoencoderModel(const ModelDims& dims);
  AutoencoderModel() : AutoencoderModel(ModelDims{}) {}

  /// Throws ShapeMismatch if layer shapes do not chain, InvalidArgument if the
  /// model is not undercomplete.
  void validate() const;
};

/// Uniform(-s, s) initialization with s = 1/sqrt(fan-in) for every tensor.
AutoencoderModel initialize_model(const ModelDims& dims, RngStream& rng);

/// Embedding of one flattened sequence (T * input_size values, timestep-major).
Vector encode(const AutoencoderModel& model, std::span<const double> sequence);

/// Reconstruction (T * input_size values) of one embedding.
Vector decode(const AutoencoderModel& model, std::span<const double> embedding);

/// Mean squared reconstruction error over all sequences (rows) and values.
double reconstruction_loss(const AutoencoderModel& model, const Matrix& batch);

struct GradientSet {
  Parameters values;

  static GradientSet zeros_like(const Parameters& params);
};

struct LossAndGradients {
  double loss = 0.0;
  GradientSet grads;
};

/// Loss and its exact gradient, backpropagated through all encoder steps.
LossAndGradients backward(const AutoencoderModel& model, const Matrix& batch);

using GradientFn = std::function<LossAndGradients(const AutoencoderModel&, const Matrix&)>;

/// Worst relative error max(|a-n| / max(|a|, |n|, 1e-12)) between analytic
/// partials (from `gradient`, default `backward`) and central differences
/// of the loss. The differenced losses are evaluated in long double by a
/// separate forward pass so that rounding does not dominate small partials.
double gradient_check(const AutoencoderModel& model, const Matrix& batch, double epsilon,
                      const GradientFn& gradient = backward);

/// Normalizes raw trajectories with the model's statistics and encodes each
/// row; returns N x embed_dim.
Matrix embed(const AutoencoderModel& model, const Matrix& raw_values);

}  // namespace deeptraj
