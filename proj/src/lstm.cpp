#include "deeptraj/lstm.hpp"

#include <cmath>

#include "deeptraj/error.hpp"
#include "deeptraj/stats.hpp"

namespace deeptraj {

LstmParams::LstmParams(std::size_t input_size, std::size_t hidden_size) {
  for (auto& g : gates) {
    g.input_weights = Matrix(hidden_size, input_size);
    g.recurrent_weights = Matrix(hidden_size, hidden_size);
    g.bias = Matrix(hidden_size, 1);
  }
}

void LstmParams::validate() const {
  const std::size_t in = input_size();
  const std::size_t hid = hidden_size();
  for (const auto& g : gates) {
    require(g.input_weights.rows() == hid && g.input_weights.cols() == in, ErrorKind::ShapeMismatch,
            "LSTM input weights disagree across gates");
    require(g.recurrent_weights.rows() == hid && g.recurrent_weights.cols() == hid,
            ErrorKind::ShapeMismatch, "LSTM recurrent weights must be hidden x hidden");
    require(g.bias.rows() == hid && g.bias.cols() == 1, ErrorKind::ShapeMismatch,
            "LSTM bias must be hidden x 1");
  }
}

LstmState lstm_step(const LstmParams& params, std::span<const double> x, const LstmState& state,
                    LstmStepCache* cache) {
  const std::size_t hidden = params.hidden_size();
  require(x.size() == params.input_size(), ErrorKind::ShapeMismatch, "LSTM input has wrong size");
  require(state.h.size() == hidden && state.c.size() == hidden, ErrorKind::ShapeMismatch,
          "LSTM state has wrong size");

  std::array<Vector, kGateCount> pre;
  for (std::size_t k = 0; k < kGateCount; ++k) {
    const GateParams& g = params.gates[k];
    const auto bias = g.bias.values();
    pre[k].assign(bias.begin(), bias.end());
    gemv_acc(g.input_weights, x, pre[k]);
    gemv_acc(g.recurrent_weights, state.h, pre[k]);
  }

  LstmState next{Vector(hidden), Vector(hidden)};
  auto& f = pre[static_cast<std::size_t>(Gate::Forget)];
  auto& i = pre[static_cast<std::size_t>(Gate::Input)];
  auto& o = pre[static_cast<std::size_t>(Gate::Output)];
  auto& g = pre[static_cast<std::size_t>(Gate::Cell)];
  for (std::size_t j = 0; j < hidden; ++j) {
    f[j] = logistic(f[j]);
    i[j] = logistic(i[j]);
    o[j] = logistic(o[j]);
    g[j] = std::tanh(g[j]);
    next.c[j] = f[j] * state.c[j] + i[j] * g[j];
    next.h[j] = o[j] * std::tanh(next.c[j]);
  }
  if (cache) {
    cache->forget = std::move(f);
    cache->input = std::move(i);
    cache->output = std::move(o);
    cache->candidate = std::move(g);
  }
  return next;
}

}  // namespace deeptraj
