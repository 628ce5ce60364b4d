#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "deeptraj/autoencoder.hpp"
#include "deeptraj/dataset.hpp"

namespace deeptraj {

struct TrainConfig {
  double learning_rate = 1e-3;
  double rho = 0.9;
  double epsilon = 1e-8;
  std::size_t epochs = 500;
  std::size_t batch_size = 32;  ///< 0 means full batch
  std::uint64_t seed = 0;
  bool deterministic = true;
  bool clip_gradients = false;
  double clip_norm = 5.0;

  /// Throws InvalidArgument on out-of-range hyperparameters.
  void validate() const;
};

/// Running mean of squared gradients, one accumulator per parameter tensor.
struct OptimizerState {
  std::vector<Matrix> accumulators;
  std::size_t steps = 0;

  static OptimizerState zeros_like(const Parameters& params);
};

/**
 * One RMSProp update, elementwise:
 *   v <- rho * v + (1 - rho) * g^2
 *   p <- p - lr * g / (sqrt(v) + eps)
 */
void rmsprop_step(Parameters& params, const GradientSet& grads, OptimizerState& state,
                  const TrainConfig& config);

/// Global L2 norm over every gradient entry.
double gradient_norm(const GradientSet& grads);

struct TrainResult {
  AutoencoderModel model;
  std::vector<double> loss_history;  ///< mean loss per epoch, in normalized units
  OptimizerState optimizer;
};

/**
 * Fits an autoencoder to the dataset's trajectories.
 *
 * Values are z-scored with global statistics (stored in the returned model),
 * the model is initialized from `config.seed`, and each epoch visits a
 * freshly shuffled sequence of mini-batches. Throws EmptyDataset, or
 * NonFiniteLoss if training diverges.
 */
TrainResult train(const TrajectoryDataset& dataset, const ModelDims& arch, const TrainConfig& config);

/// Same as above on a raw matrix of flattened sequences.
TrainResult train(const Matrix& sequences, const ModelDims& arch, const TrainConfig& config);

}  // namespace deeptraj
