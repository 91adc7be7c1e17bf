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

#include "cfedit/mlp.h"

#include <cmath>

namespace cfedit {
namespace {

Eigen::MatrixXd Glorot(int rows, int cols, std::mt19937_64& rng) {
  const double limit = std::sqrt(6.0 / (rows + cols));
  std::uniform_real_distribution<double> dist(-limit, limit);
  Eigen::MatrixXd m(rows, cols);
  // Fill row by row so the draw order does not depend on storage order.
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m(r, c) = dist(rng);
  }
  return m;
}

}  // namespace

Mlp Mlp::Create(int in, int hidden, int out, Output output, std::mt19937_64& rng) {
  Mlp mlp;
  mlp.w1 = Glorot(hidden, in, rng);
  mlp.b1 = Eigen::MatrixXd::Zero(hidden, 1);
  mlp.w2 = Glorot(out, hidden, rng);
  mlp.b2 = Eigen::MatrixXd::Zero(out, 1);
  mlp.output = output;
  return mlp;
}

Mlp Mlp::ZerosLike() const {
  Mlp z;
  z.w1 = Eigen::MatrixXd::Zero(w1.rows(), w1.cols());
  z.b1 = Eigen::MatrixXd::Zero(b1.rows(), 1);
  z.w2 = Eigen::MatrixXd::Zero(w2.rows(), w2.cols());
  z.b2 = Eigen::MatrixXd::Zero(b2.rows(), 1);
  z.output = output;
  return z;
}

Eigen::MatrixXd Mlp::Forward(const Eigen::MatrixXd& x, Tape* tape) const {
  Eigen::MatrixXd hidden = x * w1.transpose();
  hidden.rowwise() += b1.col(0).transpose();
  hidden = hidden.array().tanh().matrix();
  Eigen::MatrixXd y = hidden * w2.transpose();
  y.rowwise() += b2.col(0).transpose();
  if (output == Output::kSigmoid) {
    y = (1.0 / (1.0 + (-y.array()).exp())).matrix();
  }
  if (tape != nullptr) {
    tape->input = x;
    tape->hidden = std::move(hidden);
    tape->output = y;
  }
  return y;
}

Eigen::MatrixXd Mlp::Backward(const Tape& tape, const Eigen::MatrixXd& grad_output,
                              Mlp* grad) const {
  Eigen::MatrixXd dz = grad_output;
  if (output == Output::kSigmoid) {
    dz = (dz.array() * tape.output.array() * (1.0 - tape.output.array())).matrix();
  }
  grad->w2.noalias() += dz.transpose() * tape.hidden;
  grad->b2 += dz.colwise().sum().transpose();
  Eigen::MatrixXd dh = dz * w2;
  dh = (dh.array() * (1.0 - tape.hidden.array().square())).matrix();
  grad->w1.noalias() += dh.transpose() * tape.input;
  grad->b1 += dh.colwise().sum().transpose();
  return dh * w1;
}

}  // namespace cfedit
