#include "deeptraj/optimizer.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "deeptraj/error.hpp"
#include "deeptraj/rng.hpp"

namespace deeptraj {

namespace {

// Stream indices under the training seed.
constexpr std::uint64_t kInitStream = 0;
constexpr std::uint64_t kShuffleStream = 1;

}  // namespace

void TrainConfig::validate() const {
  require(learning_rate > 0.0, ErrorKind::InvalidArgument, "learning rate must be positive");
  require(rho >= 0.0 && rho < 1.0, ErrorKind::InvalidArgument, "rho must lie in [0, 1)");
  require(epsilon > 0.0, ErrorKind::InvalidArgument, "epsilon must be positive");
  require(epochs >= 1, ErrorKind::InvalidArgument, "need at least one epoch");
  require(!clip_gradients || clip_norm > 0.0, ErrorKind::InvalidArgument,
          "clip norm must be positive");
}

OptimizerState OptimizerState::zeros_like(const Parameters& params) {
  OptimizerState state;
  for (const Matrix* t : params.tensors()) state.accumulators.emplace_back(t->rows(), t->cols());
  return state;
}

void rmsprop_step(Parameters& params, const GradientSet& grads, OptimizerState& state,
                  const TrainConfig& config) {
  auto p_tensors = params.tensors();
  const auto g_tensors = grads.values.tensors();
  require(p_tensors.size() == g_tensors.size() && p_tensors.size() == state.accumulators.size(),
          ErrorKind::ShapeMismatch, "optimizer state is not congruent with the model");
  for (std::size_t t = 0; t < p_tensors.size(); ++t) {
    require(p_tensors[t]->same_shape(*g_tensors[t]) && p_tensors[t]->same_shape(state.accumulators[t]),
            ErrorKind::ShapeMismatch, "gradient tensor shape differs from parameter");
    auto p = p_tensors[t]->values();
    const auto g = g_tensors[t]->values();
    auto v = state.accumulators[t].values();
    for (std::size_t k = 0; k < p.size(); ++k) {
      v[k] = config.rho * v[k] + (1.0 - config.rho) * g[k] * g[k];
      p[k] -= config.learning_rate * g[k] / (std::sqrt(v[k]) + config.epsilon);
    }
  }
  ++state.steps;
}

double gradient_norm(const GradientSet& grads) {
  double ss = 0.0;
  for (const Matrix* t : grads.values.tensors())
    for (double g : t->values()) ss += g * g;
  return std::sqrt(ss);
}

TrainResult train(const TrajectoryDataset& dataset, const ModelDims& arch, const TrainConfig& config) {
  require(dataset.subjects() > 0, ErrorKind::EmptyDataset, "dataset has no subjects");
  return train(dataset.values, arch, config);
}

TrainResult train(const Matrix& sequences, const ModelDims& arch, const TrainConfig& config) {
  config.validate();
  require(sequences.rows() > 0 && sequences.cols() > 0, ErrorKind::EmptyDataset,
          "dataset has no sequences");
  require(sequences.cols() == arch.output_size(), ErrorKind::LengthMismatch,
          "sequence length disagrees with the architecture");

  const Normalization norm = fit_normalization(sequences);
  const Matrix data = normalize(sequences, norm);

  const RngStream root(config.seed);
  RngStream init_rng = root.child(kInitStream);
  RngStream shuffle_rng = root.child(kShuffleStream);

  TrainResult result{initialize_model(arch, init_rng), {}, {}};
  result.model.norm = norm;
  result.optimizer = OptimizerState::zeros_like(result.model.params);

  const std::size_t n = data.rows();
  const std::size_t batch = config.batch_size == 0 ? n : std::min(config.batch_size, n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Matrix minibatch;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double weighted_loss = 0.0;
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t len = std::min(batch, n - start);
      minibatch = Matrix(len, data.cols());
      for (std::size_t r = 0; r < len; ++r) {
        const auto src = data.row(order[start + r]);
        std::copy(src.begin(), src.end(), minibatch.row(r).begin());
      }
      LossAndGradients lg = backward(result.model, minibatch);
      if (!std::isfinite(lg.loss)) {
        std::ostringstream msg;
        msg << "loss became non-finite at epoch " << epoch << ", batch starting at " << start
            << "; try a smaller learning rate or enable gradient clipping";
        throw Error(ErrorKind::NonFiniteLoss, msg.str());
      }
      if (config.clip_gradients) {
        const double gn = gradient_norm(lg.grads);
        if (gn > config.clip_norm) {
          const double s = config.clip_norm / gn;
          for (Matrix* t : lg.grads.values.tensors())
            for (double& g : t->values()) g *= s;
        }
      }
      rmsprop_step(result.model.params, lg.grads, result.optimizer, config);
      weighted_loss += lg.loss * static_cast<double>(len);
    }
    result.loss_history.push_back(weighted_loss / static_cast<double>(n));
  }
  return result;
}

}  // namespace deeptraj
