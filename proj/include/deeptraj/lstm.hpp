#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "deeptraj/matrix.hpp"

namespace deeptraj {

enum class Gate : std::size_t { Forget = 0, Input = 1, Output = 2, Cell = 3 };

inline constexpr std::size_t kGateCount = 4;

/// Affine parameters of one LSTM gate: W x_t + U h_{t-1} + b.
struct GateParams {
  Matrix input_weights;      ///< hidden x input
  Matrix recurrent_weights;  ///< hidden x hidden
  Matrix bias;               ///< hidden x 1
};

struct LstmParams {
  std::array<GateParams, kGateCount> gates;

  LstmParams() = default;
  LstmParams(std::size_t input_size, std::size_t hidden_size);

  GateParams& gate(Gate g) { return gates[static_cast<std::size_t>(g)]; }
  const GateParams& gate(Gate g) const { return gates[static_cast<std::size_t>(g)]; }

  std::size_t input_size() const noexcept { return gates[0].input_weights.cols(); }
  std::size_t hidden_size() const noexcept { return gates[0].input_weights.rows(); }

  /// Throws ShapeMismatch unless all gates agree on (input, hidden).
  void validate() const;
};

struct LstmState {
  Vector h;  ///< output, |h_j| < 1
  Vector c;  ///< cell state

  static LstmState zeros(std::size_t hidden) { return {Vector(hidden, 0.0), Vector(hidden, 0.0)}; }
};

/// Gate activations of one step, kept for backpropagation through time.
struct LstmStepCache {
  Vector forget, input, output, candidate;
};

/**
 * One LSTM update:
 *   f, i, o = logistic(W x + U h + b) for their gates
 *   g       = tanh(W_c x + U_c h + b_c)
 *   c'      = f * c + i * g
 *   h'      = o * tanh(c')
 * Throws ShapeMismatch if x or the state disagree with the parameters.
 */
LstmState lstm_step(const LstmParams& params, std::span<const double> x, const LstmState& state,
                    LstmStepCache* cache = nullptr);

}  // namespace deeptraj
