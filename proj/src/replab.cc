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

#include "leakaudit/replab.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "leakaudit/random.h"
#include "leakaudit/status_macros.h"

namespace leakaudit {
namespace {

// Row-wise softmax of logits.
Eigen::MatrixXd Softmax(const Eigen::MatrixXd& logits) {
  Eigen::MatrixXd out(logits.rows(), logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double top = logits.row(r).maxCoeff();
    out.row(r) = (logits.row(r).array() - top).exp().matrix();
    out.row(r) /= out.row(r).sum();
  }
  return out;
}

Eigen::MatrixXd Forward(const EncoderParams& encoder,
                        const Eigen::MatrixXd& x) {
  return (x * encoder.weights).rowwise() + encoder.bias.transpose();
}

Eigen::MatrixXd HeadLogits(const SoftmaxHead& head, const Eigen::MatrixXd& z) {
  return (z * head.weights.transpose()).rowwise() + head.bias.transpose();
}

// Returns (P - onehot) / batch and writes the mean cross-entropy.
Eigen::MatrixXd SoftmaxResidual(const Eigen::MatrixXd& logits,
                                std::span<const uint32_t> labels,
                                double& loss) {
  Eigen::MatrixXd p = Softmax(logits);
  const double n = static_cast<double>(labels.size());
  loss = 0.0;
  for (size_t r = 0; r < labels.size(); ++r) {
    loss -= std::log(std::max(p(r, labels[r]), 1e-300));
    p(r, labels[r]) -= 1.0;
  }
  loss /= n;
  return p / n;
}

Eigen::MatrixXd XavierUniform(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = rng.Uniform(-limit, limit);
  }
  return m;
}

std::vector<uint32_t> Labels(const Column& col, std::span<const size_t> rows) {
  std::vector<uint32_t> out;
  out.reserve(rows.size());
  for (size_t r : rows) out.push_back(col.codes[r]);
  return out;
}

absl::Status ValidateConfig(const TrainConfig& config) {
  if (!(config.learning_rate > 0.0)) {
    return absl::InvalidArgumentError("learning_rate must be > 0");
  }
  if (config.batch_size < 1) {
    return absl::InvalidArgumentError("batch_size must be >= 1");
  }
  if (config.width < 1) return absl::InvalidArgumentError("width must be >= 1");
  if (config.censor_lambda < 0.0) {
    return absl::InvalidArgumentError("censor_lambda must be >= 0");
  }
  if (config.censor_lambda > 0.0 && !config.censor_target) {
    return absl::InvalidArgumentError("censor_lambda > 0 needs censor_target");
  }
  if (!(config.adversary_lr_scale > 0.0)) {
    return absl::InvalidArgumentError("adversary_lr_scale must be > 0");
  }
  if (config.max_grad_norm < 0.0 || config.weight_decay < 0.0) {
    return absl::InvalidArgumentError(
        "max_grad_norm and weight_decay must be >= 0");
  }
  if (config.feature_columns.empty()) {
    return absl::InvalidArgumentError("no feature columns");
  }
  return absl::OkStatus();
}

absl::StatusOr<TrainedModel> Train(const Dataset& ds, const DatasetSplit& split,
                                   const std::string& task,
                                   const TrainConfig& config, bool censored) {
  LEAKAUDIT_RETURN_IF_ERROR(ValidateConfig(config));
  if (split.train_idx.empty()) return absl::InvalidArgumentError("no training rows");
  TrainedModel model;
  model.task = task;
  LEAKAUDIT_ASSIGN_OR_RETURN(model.encoding,
                             FitOneHot(ds, config.feature_columns));
  LEAKAUDIT_ASSIGN_OR_RETURN(const Column* task_col, ds.Find(task));
  const Column* sensitive_col = nullptr;
  if (censored) {
    LEAKAUDIT_ASSIGN_OR_RETURN(sensitive_col, ds.Find(*config.censor_target));
    model.censor_target = config.censor_target;
  }
  const auto& rows = split.train_idx;
  LEAKAUDIT_ASSIGN_OR_RETURN(Eigen::MatrixXd x,
                             EncodeRows(model.encoding, ds, rows));
  const std::vector<uint32_t> y = Labels(*task_col, rows);
  const std::vector<uint32_t> s =
      censored ? Labels(*sensitive_col, rows) : std::vector<uint32_t>();

  const auto d_in = static_cast<Eigen::Index>(model.encoding.width());
  const auto k = static_cast<Eigen::Index>(config.width);
  {
    Rng rng(config.seed, "init.encoder");
    model.encoder.weights = XavierUniform(rng, d_in, k);
    model.encoder.bias = Eigen::VectorXd::Zero(k);
  }
  {
    Rng rng(config.seed, "init.task");
    const auto classes = static_cast<Eigen::Index>(task_col->alphabet.size());
    model.task_head.weights = XavierUniform(rng, classes, k);
    model.task_head.bias = Eigen::VectorXd::Zero(classes);
  }
  if (censored) {
    Rng rng(config.seed, "init.adversary");
    const auto classes =
        static_cast<Eigen::Index>(sensitive_col->alphabet.size());
    model.adversary_head =
        SoftmaxHead{XavierUniform(rng, classes, k), Eigen::VectorXd::Zero(classes)};
  }
  model.initial_loss = HeadLoss(model.encoder, model.task_head, x, y);

  Rng batch_rng(config.seed, "batches");
  std::vector<size_t> order(rows.size());
  std::iota(order.begin(), order.end(), size_t{0});
  const double lr = config.learning_rate;
  for (size_t epoch = 0; epoch < config.epochs; ++epoch) {
    batch_rng.Shuffle(order);
    for (size_t start = 0; start < order.size(); start += config.batch_size) {
      const size_t end = std::min(order.size(), start + config.batch_size);
      const auto b = static_cast<Eigen::Index>(end - start);
      Eigen::MatrixXd xb(b, d_in);
      std::vector<uint32_t> yb, sb;
      for (size_t i = start; i < end; ++i) {
        xb.row(static_cast<Eigen::Index>(i - start)) =
            x.row(static_cast<Eigen::Index>(order[i]));
        yb.push_back(y[order[i]]);
        if (censored) sb.push_back(s[order[i]]);
      }
      const Gradients g = ComputeGradients(
          model.encoder, model.task_head,
          censored ? &*model.adversary_head : nullptr, xb, yb, sb,
          config.censor_lambda);
      Eigen::MatrixXd dw = g.encoder_weights;
      Eigen::VectorXd db = g.encoder_bias;
      if (config.weight_decay > 0.0) {
        dw += config.weight_decay * model.encoder.weights;
      }
      if (config.max_grad_norm > 0.0) {
        const double norm = std::sqrt(dw.squaredNorm() + db.squaredNorm());
        if (norm > config.max_grad_norm) {
          dw *= config.max_grad_norm / norm;
          db *= config.max_grad_norm / norm;
        }
      }
      model.encoder.weights -= lr * dw;
      model.encoder.bias -= lr * db;
      model.task_head.weights -= lr * g.task_weights;
      model.task_head.bias -= lr * g.task_bias;
      if (censored) {
        const double adv_lr = lr * config.adversary_lr_scale;
        model.adversary_head->weights -= adv_lr * g.adversary_weights;
        model.adversary_head->bias -= adv_lr * g.adversary_bias;
      }
    }
    const double loss = HeadLoss(model.encoder, model.task_head, x, y);
    if (!std::isfinite(loss) || !model.encoder.weights.allFinite()) {
      return absl::InternalError(
          absl::StrCat("divergence: non-finite loss at epoch ", epoch + 1));
    }
    model.epoch_losses.push_back(loss);
  }
  return model;
}

}  // namespace

size_t OneHotEncoding::width() const {
  size_t w = 0;
  for (const auto& f : features) w += f.size();
  return w;
}

absl::StatusOr<OneHotEncoding> FitOneHot(
    const Dataset& ds, const std::vector<std::string>& feature_columns) {
  OneHotEncoding enc;
  for (const auto& name : feature_columns) {
    LEAKAUDIT_ASSIGN_OR_RETURN(const Column* col, ds.Find(name));
    enc.features.push_back(col->alphabet);
  }
  return enc;
}

absl::StatusOr<Eigen::MatrixXd> EncodeRows(const OneHotEncoding& encoding,
                                           const Dataset& ds,
                                           std::span<const size_t> rows) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(
      static_cast<Eigen::Index>(rows.size()),
      static_cast<Eigen::Index>(encoding.width()));
  Eigen::Index offset = 0;
  for (const auto& feature : encoding.features) {
    LEAKAUDIT_ASSIGN_OR_RETURN(const Column* col, ds.Find(feature.name()));
    // Map the dataset's codes onto the encoding's symbol positions.
    std::vector<Eigen::Index> position(col->alphabet.size(), -1);
    for (size_t i = 0; i < col->alphabet.size(); ++i) {
      if (auto p = feature.IndexOf(col->alphabet.symbol(i))) {
        position[i] = static_cast<Eigen::Index>(*p);
      }
    }
    for (size_t r = 0; r < rows.size(); ++r) {
      const Eigen::Index p = position[col->codes[rows[r]]];
      if (p >= 0) x(static_cast<Eigen::Index>(r), offset + p) = 1.0;
    }
    offset += static_cast<Eigen::Index>(feature.size());
  }
  return x;
}

double HeadLoss(const EncoderParams& encoder, const SoftmaxHead& head,
                const Eigen::MatrixXd& x, std::span<const uint32_t> labels) {
  double loss = 0.0;
  SoftmaxResidual(HeadLogits(head, Forward(encoder, x)), labels, loss);
  return loss;
}

Gradients ComputeGradients(const EncoderParams& encoder,
                           const SoftmaxHead& task_head,
                           const SoftmaxHead* adversary,
                           const Eigen::MatrixXd& x,
                           std::span<const uint32_t> task_labels,
                           std::span<const uint32_t> sensitive_labels,
                           double lambda) {
  Gradients g;
  const Eigen::MatrixXd z = Forward(encoder, x);
  const Eigen::MatrixXd task_res =
      SoftmaxResidual(HeadLogits(task_head, z), task_labels, g.task_loss);
  g.task_weights = task_res.transpose() * z;
  g.task_bias = task_res.colwise().sum().transpose();
  Eigen::MatrixXd dz = task_res * task_head.weights;
  if (adversary != nullptr) {
    const Eigen::MatrixXd adv_res = SoftmaxResidual(
        HeadLogits(*adversary, z), sensitive_labels, g.adversary_loss);
    g.adversary_weights = adv_res.transpose() * z;
    g.adversary_bias = adv_res.colwise().sum().transpose();
    // Reversed gradient: the encoder ascends the adversary's loss.
    dz -= lambda * (adv_res * adversary->weights);
  }
  g.encoder_weights = x.transpose() * dz;
  g.encoder_bias = dz.colwise().sum().transpose();
  return g;
}

absl::StatusOr<TrainedModel> TrainEncoderErm(const Dataset& ds,
                                             const DatasetSplit& split,
                                             const std::string& task,
                                             const TrainConfig& config) {
  if (config.censor_lambda != 0.0) {
    return absl::InvalidArgumentError("ERM training needs censor_lambda == 0");
  }
  return Train(ds, split, task, config, /*censored=*/false);
}

absl::StatusOr<TrainedModel> TrainEncoderCensored(const Dataset& ds,
                                                  const DatasetSplit& split,
                                                  const std::string& task,
                                                  const TrainConfig& config) {
  if (!config.censor_target) {
    return absl::InvalidArgumentError("censored training needs censor_target");
  }
  return Train(ds, split, task, config, /*censored=*/true);
}

absl::StatusOr<Eigen::MatrixXd> Represent(const TrainedModel& model,
                                          const Dataset& ds,
                                          std::span<const size_t> rows) {
  LEAKAUDIT_ASSIGN_OR_RETURN(Eigen::MatrixXd x,
                             EncodeRows(model.encoding, ds, rows));
  return Forward(model.encoder, x);
}

absl::StatusOr<double> TaskHeadAccuracy(const TrainedModel& model,
                                        const Dataset& ds,
                                        std::span<const size_t> rows) {
  if (rows.empty()) return absl::InvalidArgumentError("no rows");
  LEAKAUDIT_ASSIGN_OR_RETURN(const Column* task_col, ds.Find(model.task));
  LEAKAUDIT_ASSIGN_OR_RETURN(Eigen::MatrixXd z, Represent(model, ds, rows));
  const Eigen::MatrixXd logits = HeadLogits(model.task_head, z);
  size_t hits = 0;
  for (size_t r = 0; r < rows.size(); ++r) {
    Eigen::Index best = 0;
    logits.row(static_cast<Eigen::Index>(r)).maxCoeff(&best);
    if (static_cast<uint32_t>(best) == task_col->codes[rows[r]]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(rows.size());
}

absl::StatusOr<QuantizerSpec> FitQuantizer(const Eigen::MatrixXd& z_train,
                                           size_t bins_per_dim) {
  if (bins_per_dim < 2) {
    return absl::InvalidArgumentError("bins_per_dim must be >= 2");
  }
  if (z_train.rows() == 0) return absl::InvalidArgumentError("no training rows");
  QuantizerSpec quant;
  quant.bins_per_dim = bins_per_dim;
  const auto n = static_cast<size_t>(z_train.rows());
  for (Eigen::Index d = 0; d < z_train.cols(); ++d) {
    std::vector<double> values(z_train.col(d).data(),
                               z_train.col(d).data() + n);
    std::sort(values.begin(), values.end());
    std::vector<double> edges;
    for (size_t j = 1; j < bins_per_dim; ++j) {
      const double edge = values[j * n / bins_per_dim];
      if (edge > values.front() && (edges.empty() || edge > edges.back())) {
        edges.push_back(edge);
      }
    }
    quant.edges.push_back(std::move(edges));
  }
  return quant;
}

uint32_t QuantizeValue(const QuantizerSpec& quant, size_t dim, double value) {
  const auto& edges = quant.edges[dim];
  return static_cast<uint32_t>(
      std::upper_bound(edges.begin(), edges.end(), value) - edges.begin());
}

absl::StatusOr<std::vector<Column>> ExportRepresentations(
    const TrainedModel& model, const Dataset& ds, const QuantizerSpec& quant) {
  if (quant.edges.size() != model.encoder.k()) {
    return absl::InvalidArgumentError("quantizer width differs from encoder");
  }
  std::vector<size_t> all(ds.num_rows());
  std::iota(all.begin(), all.end(), size_t{0});
  LEAKAUDIT_ASSIGN_OR_RETURN(Eigen::MatrixXd z, Represent(model, ds, all));
  std::vector<Column> out;
  for (size_t d = 0; d < model.encoder.k(); ++d) {
    std::vector<std::string> codes;
    codes.reserve(all.size());
    for (size_t r = 0; r < all.size(); ++r) {
      codes.push_back(std::to_string(QuantizeValue(
          quant, d, z(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(d)))));
    }
    LEAKAUDIT_ASSIGN_OR_RETURN(Column col,
                               Dataset::MakeColumn(absl::StrCat("z_", d), codes));
    out.push_back(std::move(col));
  }
  return out;
}

namespace {

OrderedJson MatrixToJson(const Eigen::MatrixXd& m) {
  OrderedJson rows = OrderedJson::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    OrderedJson row = OrderedJson::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(Round12(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

OrderedJson VectorToJson(const Eigen::VectorXd& v) {
  OrderedJson out = OrderedJson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(Round12(v(i)));
  return out;
}

OrderedJson HeadToJson(const SoftmaxHead& head) {
  OrderedJson doc;
  doc["weights"] = MatrixToJson(head.weights);
  doc["bias"] = VectorToJson(head.bias);
  return doc;
}

}  // namespace

OrderedJson ModelToJson(const TrainedModel& model, const QuantizerSpec& quant) {
  OrderedJson doc;
  doc["task"] = model.task;
  doc["censor_target"] =
      model.censor_target ? OrderedJson(*model.censor_target) : OrderedJson();
  doc["features"] = OrderedJson::array();
  for (const auto& f : model.encoding.features) {
    doc["features"].push_back(AlphabetToJson(f));
  }
  doc["width"] = model.encoder.k();
  doc["weights"] = MatrixToJson(model.encoder.weights);
  doc["bias"] = VectorToJson(model.encoder.bias);
  doc["task_head"] = HeadToJson(model.task_head);
  doc["adversary_head"] = model.adversary_head
                              ? HeadToJson(*model.adversary_head)
                              : OrderedJson();
  OrderedJson q;
  q["bins_per_dim"] = quant.bins_per_dim;
  q["edges"] = OrderedJson::array();
  for (const auto& e : quant.edges) {
    OrderedJson dim = OrderedJson::array();
    for (double v : e) dim.push_back(Round12(v));
    q["edges"].push_back(std::move(dim));
  }
  doc["quantizer"] = std::move(q);
  doc["initial_loss"] = Round12(model.initial_loss);
  OrderedJson losses = OrderedJson::array();
  for (double l : model.epoch_losses) losses.push_back(Round12(l));
  doc["epoch_losses"] = std::move(losses);
  return doc;
}

ReprProvider TrainingProvider(
    const Dataset& ds, const DatasetSplit& split, const TrainConfig& base,
    size_t bins_per_dim,
    std::function<std::optional<std::string>(const std::string&)>
        censor_for_task) {
  return [=](const std::string& task) -> absl::StatusOr<Representation> {
    TrainConfig config = base;
    std::optional<std::string> censor;
    if (censor_for_task) censor = censor_for_task(task);
    absl::StatusOr<TrainedModel> model;
    if (censor) {
      config.censor_target = censor;
      model = TrainEncoderCensored(ds, split, task, config);
    } else {
      config.censor_target.reset();
      config.censor_lambda = 0.0;
      model = TrainEncoderErm(ds, split, task, config);
    }
    if (!model.ok()) return model.status();
    LEAKAUDIT_ASSIGN_OR_RETURN(Eigen::MatrixXd z_train,
                               Represent(*model, ds, split.train_idx));
    LEAKAUDIT_ASSIGN_OR_RETURN(QuantizerSpec quant,
                               FitQuantizer(z_train, bins_per_dim));
    LEAKAUDIT_ASSIGN_OR_RETURN(std::vector<Column> cols,
                               ExportRepresentations(*model, ds, quant));
    Representation repr{ds, {}};
    for (const auto& c : cols) repr.z_columns.push_back(c.name());
    LEAKAUDIT_ASSIGN_OR_RETURN(repr.data, ds.WithColumns(std::move(cols)));
    return repr;
  };
}

}  // namespace leakaudit
