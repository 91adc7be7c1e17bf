// Copyright 2026 The cfedit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CFEDIT_MLP_H_
#define CFEDIT_MLP_H_

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace cfedit {

// Two-layer perceptron applied row-wise: y = act(tanh(x W1^T + b1) W2^T + b2).
// Rows of the input are independent items (edges, nodes, incidences).
// Biases are stored as k x 1 matrices so every parameter is a MatrixXd.
struct Mlp {
  enum class Output { kLinear, kSigmoid };

  // Cached activations of one Forward call, consumed by Backward.
  struct Tape {
    Eigen::MatrixXd input;
    Eigen::MatrixXd hidden;
    Eigen::MatrixXd output;
  };

  Eigen::MatrixXd w1;  // hidden x in
  Eigen::MatrixXd b1;  // hidden x 1
  Eigen::MatrixXd w2;  // out x hidden
  Eigen::MatrixXd b2;  // out x 1
  Output output = Output::kLinear;

  // Glorot-uniform weights, zero biases.
  static Mlp Create(int in, int hidden, int out, Output output, std::mt19937_64& rng);

  int input_dim() const { return static_cast<int>(w1.cols()); }
  int hidden_dim() const { return static_cast<int>(w1.rows()); }
  int output_dim() const { return static_cast<int>(w2.rows()); }

  Mlp ZerosLike() const;

  // `tape` may be null for inference.
  Eigen::MatrixXd Forward(const Eigen::MatrixXd& x, Tape* tape) const;

  // `grad_output` is dL/d(output after activation). Adds parameter gradients
  // into `grad` and returns dL/d(input).
  Eigen::MatrixXd Backward(const Tape& tape, const Eigen::MatrixXd& grad_output,
                           Mlp* grad) const;

  template <typename F>
  void ForEachParameter(F&& f) {
    f("w1", w1);
    f("b1", b1);
    f("w2", w2);
    f("b2", b2);
  }
  template <typename F>
  void ForEachParameter(F&& f) const {
    f("w1", w1);
    f("b1", b1);
    f("w2", w2);
    f("b2", b2);
  }
};

}  // namespace cfedit

#endif  // CFEDIT_MLP_H_
