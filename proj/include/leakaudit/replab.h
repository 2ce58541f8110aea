// Copyright 2026 The Leakaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Desk-scale learned representations: a linear encoder Z = W^T x + b over
// one-hot features with a softmax task head, trained by mini-batch SGD, and a
// gradient-reversal variant with a softmax adversary head on a sensitive
// column. Representations are exported as equal-frequency quantized codes.

#ifndef LEAKAUDIT_REPLAB_H_
#define LEAKAUDIT_REPLAB_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "Eigen/Dense"
#include "absl/status/statusor.h"
#include "leakaudit/dataset.h"
#include "leakaudit/dist_json.h"
#include "leakaudit/empirical.h"

namespace leakaudit {

struct OneHotEncoding {
  std::vector<Alphabet> features;
  size_t width() const;
};

absl::StatusOr<OneHotEncoding> FitOneHot(
    const Dataset& ds, const std::vector<std::string>& feature_columns);

// rows x width design matrix.
absl::StatusOr<Eigen::MatrixXd> EncodeRows(const OneHotEncoding& encoding,
                                           const Dataset& ds,
                                           std::span<const size_t> rows);

struct EncoderParams {
  Eigen::MatrixXd weights;  // d_in x k
  Eigen::VectorXd bias;     // k
  size_t k() const { return static_cast<size_t>(bias.size()); }
};

struct SoftmaxHead {
  Eigen::MatrixXd weights;  // classes x k
  Eigen::VectorXd bias;     // classes
};

struct TrainConfig {
  double learning_rate = 0.05;
  size_t epochs = 20;
  size_t batch_size = 64;
  size_t width = 1;
  double censor_lambda = 0.0;
  std::optional<std::string> censor_target;
  uint64_t seed = 0;
  // Encoder gradients are rescaled to at most this Frobenius norm (weights
  // and bias together); 0 disables clipping.
  double max_grad_norm = 0.0;
  // Step size of the adversary head relative to learning_rate.
  double adversary_lr_scale = 1.0;
  // L2 penalty on the encoder weights.
  double weight_decay = 0.01;
  // Columns one-hot encoded as the encoder input.
  std::vector<std::string> feature_columns;
};

struct TrainedModel {
  OneHotEncoding encoding;
  EncoderParams encoder;
  SoftmaxHead task_head;
  std::optional<SoftmaxHead> adversary_head;
  std::string task;
  std::optional<std::string> censor_target;
  // Mean task cross-entropy over the training rows before training and after
  // every epoch.
  double initial_loss = 0.0;
  std::vector<double> epoch_losses;
};

struct Gradients {
  // Encoder gradient of (task CE - lambda * adversary CE).
  Eigen::MatrixXd encoder_weights;
  Eigen::VectorXd encoder_bias;
  Eigen::MatrixXd task_weights;
  Eigen::VectorXd task_bias;
  Eigen::MatrixXd adversary_weights;
  Eigen::VectorXd adversary_bias;
  double task_loss = 0.0;
  double adversary_loss = 0.0;
};

// Mean cross-entropy of a softmax head over an encoded batch.
double HeadLoss(const EncoderParams& encoder, const SoftmaxHead& head,
                const Eigen::MatrixXd& x, std::span<const uint32_t> labels);

// Analytic gradients for one batch. `adversary` may be null, in which case
// only the task terms are computed.
Gradients ComputeGradients(const EncoderParams& encoder,
                           const SoftmaxHead& task_head,
                           const SoftmaxHead* adversary,
                           const Eigen::MatrixXd& x,
                           std::span<const uint32_t> task_labels,
                           std::span<const uint32_t> sensitive_labels,
                           double lambda);

// Plain ERM. Requires censor_lambda == 0.
absl::StatusOr<TrainedModel> TrainEncoderErm(const Dataset& ds,
                                             const DatasetSplit& split,
                                             const std::string& task,
                                             const TrainConfig& config);

// Gradient-reversal censoring of config.censor_target. Heads descend their
// own losses while the encoder descends task CE - lambda * adversary CE.
absl::StatusOr<TrainedModel> TrainEncoderCensored(const Dataset& ds,
                                                  const DatasetSplit& split,
                                                  const std::string& task,
                                                  const TrainConfig& config);

// Continuous representations for the listed rows (rows x k).
absl::StatusOr<Eigen::MatrixXd> Represent(const TrainedModel& model,
                                          const Dataset& ds,
                                          std::span<const size_t> rows);

// Accuracy of the model's own task head on the listed rows.
absl::StatusOr<double> TaskHeadAccuracy(const TrainedModel& model,
                                        const Dataset& ds,
                                        std::span<const size_t> rows);

struct QuantizerSpec {
  size_t bins_per_dim = 4;
  // Strictly increasing per dimension; fewer than bins_per_dim - 1 edges when
  // the training values have ties.
  std::vector<std::vector<double>> edges;
};

// Equal-frequency edges from training representations (rows x k).
absl::StatusOr<QuantizerSpec> FitQuantizer(const Eigen::MatrixXd& z_train,
                                           size_t bins_per_dim);

// Bin index of `value` along dimension `dim`.
uint32_t QuantizeValue(const QuantizerSpec& quant, size_t dim, double value);

// Columns z_0..z_{k-1} of bin codes for every row of `ds`.
absl::StatusOr<std::vector<Column>> ExportRepresentations(
    const TrainedModel& model, const Dataset& ds, const QuantizerSpec& quant);

OrderedJson ModelToJson(const TrainedModel& model, const QuantizerSpec& quant);

// ReprProvider that trains one encoder per task (ERM, or censored when
// `censor_for_task` names a target for that task) and exports quantized
// representation columns.
ReprProvider TrainingProvider(
    const Dataset& ds, const DatasetSplit& split, const TrainConfig& base,
    size_t bins_per_dim,
    std::function<std::optional<std::string>(const std::string&)>
        censor_for_task = nullptr);

}  // namespace leakaudit

#endif  // LEAKAUDIT_REPLAB_H_
