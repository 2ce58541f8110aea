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

#include "leakaudit/cli.h"

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "leakaudit/certify.h"
#include "leakaudit/dataset.h"
#include "leakaudit/dist_json.h"
#include "leakaudit/empirical.h"
#include "leakaudit/frontier.h"
#include "leakaudit/manifest.h"
#include "leakaudit/random.h"
#include "leakaudit/replab.h"
#include "leakaudit/status_macros.h"
#include "leakaudit/svg.h"
#include "leakaudit/synth.h"

namespace leakaudit {
namespace {

struct GlobalOptions {
  uint64_t seed = 0;
  int jobs = 1;
  std::string out = "leakaudit-out";
  double tolerance = kCertTolerance;
};

// Maps a failed status to an exit code: an input problem (2) or a
// broken internal invariant (3).
int ExitFor(const absl::Status& status, std::ostream& err) {
  err << "error: " << status.message() << "\n";
  return status.code() == absl::StatusCode::kInternal ? kExitInvariantViolated
                                                      : kExitInputError;
}

bool UseColor(const std::ostream& out) {
  return &out == &std::cout && std::getenv("NO_COLOR") == nullptr &&
         isatty(STDOUT_FILENO) != 0;
}

std::string Verdict(bool pass, const std::ostream& out) {
  const char* word = pass ? "PASS" : "FAIL";
  if (!UseColor(out)) return word;
  return absl::StrCat(pass ? "\033[32m" : "\033[31m", word, "\033[0m");
}

// Collects the files of one output bundle and writes its manifest last.
class Bundle {
 public:
  Bundle(const GlobalOptions& global, std::string command,
         std::vector<std::string> arguments)
      : dir_(global.out) {
    manifest_.command = std::move(command);
    manifest_.arguments = std::move(arguments);
    manifest_.seed = global.seed;
    manifest_.started_at = UtcTimestamp();
  }

  void AddInput(std::string contents) { inputs_.push_back(std::move(contents)); }

  absl::Status Write(const std::string& name, const std::string& contents) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) {
      return absl::InvalidArgumentError(
          absl::StrCat("cannot create output directory '", dir_, "'"));
    }
    const std::string path = (std::filesystem::path(dir_) / name).string();
    LEAKAUDIT_RETURN_IF_ERROR(WriteFile(path, contents));
    manifest_.outputs.emplace_back(name, ContentDigest(contents));
    return absl::OkStatus();
  }

  absl::Status Finish() {
    manifest_.config_digest = ConfigDigest(manifest_.arguments, inputs_);
    manifest_.finished_at = UtcTimestamp();
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    return WriteFile((std::filesystem::path(dir_) / "manifest.json").string(),
                     ManifestToJson(manifest_).dump(2) + "\n");
  }

  std::string Path(const std::string& name) const {
    return (std::filesystem::path(dir_) / name).string();
  }

 private:
  std::string dir_;
  RunManifest manifest_;
  std::vector<std::string> inputs_;
};

absl::StatusOr<OrderedJson> ReadJsonFile(const std::string& path,
                                         Bundle& bundle) {
  LEAKAUDIT_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  bundle.AddInput(text);
  return ParseJson(text);
}

// ---------------------------------------------------------------- synth

struct SynthOptions {
  bool positive_posterior = false;
  std::string label_rule;
  size_t x_size = 4;
  size_t y_size = 2;
  double min_posterior = 0.02;
  std::optional<double> bsc;
  bool identity = false;
  bool constant = false;
  size_t z_size = 2;
  size_t sample = 0;
  bool battery = false;
};

absl::Status RunSynth(const SynthOptions& o, const GlobalOptions& g,
                      Bundle& bundle, std::ostream& out) {
  const int channel_flags = int{o.bsc.has_value()} + o.identity + o.constant;
  const bool has_joint = o.positive_posterior || !o.label_rule.empty();
  if (!has_joint && channel_flags == 0 && !o.battery) {
    return absl::InvalidArgumentError(
        "nothing to synthesize: give a joint, channel or --battery flag");
  }
  if (channel_flags > 1) {
    return absl::InvalidArgumentError("choose one of --bsc, --identity, --constant");
  }
  if (o.battery && (has_joint || channel_flags > 0)) {
    return absl::InvalidArgumentError("--battery stands alone");
  }
  if (o.sample > 0 && !has_joint && !o.battery) {
    return absl::InvalidArgumentError("--sample needs a joint or --battery");
  }
  if (o.battery) {
    BatteryConfig config;
    config.seed = g.seed;
    if (o.sample > 0) config.rows = o.sample;
    LEAKAUDIT_ASSIGN_OR_RETURN(Dataset ds, AttributeBattery(config));
    LEAKAUDIT_RETURN_IF_ERROR(bundle.Write("data.csv", ds.ToCsv()));
    out << "wrote " << bundle.Path("data.csv") << " (" << ds.num_rows()
        << " rows)\n";
    return absl::OkStatus();
  }
  std::optional<JointPmf> joint;
  if (o.positive_posterior) {
    LEAKAUDIT_ASSIGN_OR_RETURN(
        joint, RandomPositivePosteriorJoint(o.x_size, o.y_size, g.seed,
                                            o.min_posterior));
  } else if (!o.label_rule.empty()) {
    LEAKAUDIT_ASSIGN_OR_RETURN(joint,
                               DeterministicLabelJoint(o.label_rule, o.x_size));
  }
  if (joint) {
    LEAKAUDIT_RETURN_IF_ERROR(
        bundle.Write("joint.json", JointToJson(*joint).dump(2) + "\n"));
    out << "wrote " << bundle.Path("joint.json") << "\n";
  }
  if (channel_flags == 1) {
    const Alphabet input =
        joint ? joint->axis(0)
              : Alphabet::Range("X", o.bsc ? 2 : o.x_size);
    Channel channel = Channel::Identity(input);
    std::string role = "identity";
    if (o.bsc) {
      LEAKAUDIT_ASSIGN_OR_RETURN(channel, Channel::BinarySymmetric(*o.bsc, input));
      role = absl::StrCat("bsc(", Format12(*o.bsc), ")");
    } else if (o.constant) {
      if (o.z_size < 1) return absl::InvalidArgumentError("--z-size must be >= 1");
      channel = Channel::Constant(input, o.z_size);
      role = "constant";
    }
    LEAKAUDIT_RETURN_IF_ERROR(bundle.Write(
        "channel.json", ChannelToJson(channel, role).dump(2) + "\n"));
    out << "wrote " << bundle.Path("channel.json") << "\n";
  }
  if (o.sample > 0) {
    LEAKAUDIT_ASSIGN_OR_RETURN(Dataset ds, SampleJoint(*joint, o.sample, g.seed));
    LEAKAUDIT_RETURN_IF_ERROR(bundle.Write("data.csv", ds.ToCsv()));
    out << "wrote " << bundle.Path("data.csv") << " (" << ds.num_rows()
        << " rows)\n";
  }
  return absl::OkStatus();
}

// ---------------------------------------------------------------- certify

struct CertifyOptions {
  std::string joint_path;
  std::string channel_path;
  std::optional<double> gamma;
};

// Returns the exit code on success.
absl::StatusOr<int> RunCertify(const CertifyOptions& o, const GlobalOptions& g,
                               Bundle& bundle, std::ostream& out) {
  LEAKAUDIT_ASSIGN_OR_RETURN(OrderedJson joint_doc,
                             ReadJsonFile(o.joint_path, bundle));
  LEAKAUDIT_ASSIGN_OR_RETURN(OrderedJson channel_doc,
                             ReadJsonFile(o.channel_path, bundle));
  LEAKAUDIT_ASSIGN_OR_RETURN(JointPmf joint, JointFromJson(joint_doc));
  LEAKAUDIT_ASSIGN_OR_RETURN(Channel channel, ChannelFromJson(channel_doc));
  if (joint.rank() != 2) {
    return absl::InvalidArgumentError("joint must have axes (X, Y)");
  }
  LEAKAUDIT_ASSIGN_OR_RETURN(LeakageReport report,
                             TheoremReport(joint, channel, g.tolerance));
  OrderedJson doc = LeakageReportToJson(report);
  int code = kExitOk;
  if (o.gamma) {
    LEAKAUDIT_ASSIGN_OR_RETURN(
        CertResult cert,
        CertifyLpp(joint, channel, CertBudget{*o.gamma}, g.tolerance));
    OrderedJson c;
    c["gamma"] = Round12(cert.budget);
    c["achieved"] = Round12(cert.achieved);
    c["residual"] = Round12(cert.residual);
    c["pass"] = cert.pass;
    doc["certification"] = std::move(c);
    out << "certification gamma_lpp <= " << Format12(*o.gamma) << ": "
        << Verdict(cert.pass, out) << "\n";
    if (!cert.pass) code = kExitCertificationFailed;
  }
  out << "gamma_lpp    " << absl::StrFormat("%.6f", report.gamma_lpp) << "\n"
      << "gamma_ulpp   " << absl::StrFormat("%.6f", report.gamma_ulpp) << "\n"
      << "epsilon_ldp  "
      << (report.epsilon_ldp.infinite()
              ? std::string("inf")
              : absl::StrFormat("%.6f", report.epsilon_ldp.epsilon))
      << "\n"
      << "utility_i1   " << absl::StrFormat("%.6f", report.utility_i1) << "\n"
      << "utility_iinf " << absl::StrFormat("%.6f", report.utility_iinf) << "\n";
  for (const auto& flag : report.theorem_flags) {
    out << flag.name << ": "
        << (flag.applicable ? Verdict(flag.pass, out) : std::string("n/a"))
        << "\n";
  }
  LEAKAUDIT_RETURN_IF_ERROR(bundle.Write("report.json", doc.dump(2) + "\n"));
  if (!report.AllFlagsPass()) code = kExitInvariantViolated;
  return code;
}

// ---------------------------------------------------------------- audit

struct TrainOptions {
  std::vector<std::string> features;
  double lambda = 4.0;
  size_t bins = 4;
  size_t epochs = TrainConfig{}.epochs;
  double learning_rate = TrainConfig{}.learning_rate;
  size_t width = 2;
  size_t batch_size = TrainConfig{}.batch_size;
  double weight_decay = TrainConfig{}.weight_decay;
  double max_grad_norm = 1.0;
};

void AddTrainFlags(CLI::App* cmd, TrainOptions& t) {
  cmd->add_option("--features", t.features,
                  "Encoder input columns (default: all but tasks and z_*)")
      ->delimiter(',');
  cmd->add_option("--lambda", t.lambda, "Censoring strength")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--bins", t.bins, "Quantizer bins per dimension")
      ->check(CLI::Range(2, 1 << 16));
  cmd->add_option("--epochs", t.epochs, "Training epochs");
  cmd->add_option("--lr", t.learning_rate, "Learning rate")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--width", t.width, "Representation width")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--batch", t.batch_size, "Mini-batch size")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--weight-decay", t.weight_decay, "Encoder L2 penalty")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--max-grad-norm", t.max_grad_norm,
                  "Encoder gradient clipping (0 = off)")
      ->check(CLI::NonNegativeNumber);
}

std::vector<std::string> DefaultFeatures(const Dataset& ds,
                                         const std::vector<std::string>& tasks) {
  std::vector<std::string> features;
  for (const auto& name : ds.names()) {
    if (absl::StartsWith(name, "z_")) continue;
    if (std::find(tasks.begin(), tasks.end(), name) != tasks.end()) continue;
    features.push_back(name);
  }
  return features;
}

TrainConfig MakeTrainConfig(const TrainOptions& t, uint64_t seed,
                            std::vector<std::string> features) {
  TrainConfig c;
  c.learning_rate = t.learning_rate;
  c.epochs = t.epochs;
  c.batch_size = t.batch_size;
  c.width = t.width;
  c.seed = seed;
  c.weight_decay = t.weight_decay;
  c.max_grad_norm = t.max_grad_norm;
  c.feature_columns = std::move(features);
  return c;
}

struct AuditOptions {
  std::string data_path;
  std::vector<std::string> tasks;
  std::vector<std::string> sensitives;
  std::string repr = "columns";
  size_t repeats = 5;
  std::string censor;
  TrainOptions train;
};

absl::StatusOr<Dataset> ReadDataset(const std::string& path, Bundle& bundle) {
  LEAKAUDIT_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  bundle.AddInput(text);
  return Dataset::FromCsv(text);
}

uint64_t RepeatSeed(uint64_t seed, size_t repeat) {
  return DeriveSeed(seed, absl::StrCat("repeat-", repeat));
}

absl::StatusOr<AuditMatrix> AuditRepeats(
    const Dataset& ds, const AuditOptions& o, const GlobalOptions& g,
    const std::vector<std::string>& features,
    const std::map<std::string, std::string>& censor_map, bool censored) {
  std::vector<AuditMatrix> runs;
  for (size_t r = 0; r < o.repeats; ++r) {
    const uint64_t seed = RepeatSeed(g.seed, r);
    LEAKAUDIT_ASSIGN_OR_RETURN(DatasetSplit split, SplitDataset(ds, seed));
    ReprProvider provider;
    if (o.repr == "columns") {
      provider = ColumnsProvider(ds);
    } else {
      TrainConfig base = MakeTrainConfig(o.train, seed, features);
      std::function<std::optional<std::string>(const std::string&)> censor;
      if (censored) {
        base.censor_lambda = o.train.lambda;
        censor = [censor_map](const std::string& task)
            -> std::optional<std::string> {
          auto it = censor_map.find(task);
          if (it == censor_map.end() || it->second == task) return std::nullopt;
          return it->second;
        };
      }
      provider = TrainingProvider(ds, split, base, o.train.bins, censor);
    }
    LEAKAUDIT_ASSIGN_OR_RETURN(
        AuditMatrix m, BuildAuditMatrix(ds, split, o.tasks, o.sensitives,
                                        provider, GainOptions{}, g.jobs));
    runs.push_back(std::move(m));
  }
  return AverageMatrices(runs);
}

absl::Status RunAudit(const AuditOptions& o, const GlobalOptions& g,
                      Bundle& bundle, std::ostream& out, std::ostream& err) {
  LEAKAUDIT_ASSIGN_OR_RETURN(Dataset ds, ReadDataset(o.data_path, bundle));
  for (const auto& name : o.tasks) LEAKAUDIT_RETURN_IF_ERROR(ds.Find(name).status());
  for (const auto& name : o.sensitives) {
    LEAKAUDIT_RETURN_IF_ERROR(ds.Find(name).status());
  }
  if (o.repeats < 1) return absl::InvalidArgumentError("--repeats must be >= 1");
  std::vector<std::string> features =
      o.train.features.empty() ? DefaultFeatures(ds, o.tasks) : o.train.features;
  if (o.repr == "columns") {
    bool any = false;
    for (const auto& n : ds.names()) any = any || absl::StartsWith(n, "z_");
    if (!any) {
      return absl::InvalidArgumentError(
          "--repr columns needs z_ columns in the dataset");
    }
  }

  std::map<std::string, std::string> censor_map;
  OrderedJson censored_doc;
  if (o.repr == "grad") {
    if (!o.censor.empty()) {
      LEAKAUDIT_RETURN_IF_ERROR(ds.Find(o.censor).status());
      for (const auto& t : o.tasks) censor_map[t] = o.censor;
    } else {
      // Censor, per task, the attribute the ERM audit ranks highest.
      AuditOptions erm = o;
      erm.repr = "erm";
      LEAKAUDIT_ASSIGN_OR_RETURN(
          AuditMatrix m, AuditRepeats(ds, erm, g, features, {}, false));
      const std::vector<std::string> top = TopAttributePerTask(m);
      for (size_t t = 0; t < o.tasks.size(); ++t) {
        if (!top[t].empty()) censor_map[o.tasks[t]] = top[t];
      }
      LEAKAUDIT_RETURN_IF_ERROR(bundle.Write(
          "audit_erm.json", AuditMatrixToJson(m).dump(2) + "\n"));
    }
    for (const auto& [task, attr] : censor_map) censored_doc[task] = attr;
  }
  LEAKAUDIT_ASSIGN_OR_RETURN(
      AuditMatrix matrix,
      AuditRepeats(ds, o, g, features, censor_map, o.repr == "grad"));

  OrderedJson doc = AuditMatrixToJson(matrix);
  doc["repr"] = o.repr;
  doc["repeats"] = o.repeats;
  doc["seed"] = g.seed;
  if (o.repr == "grad") doc["censored"] = censored_doc;
  const std::vector<std::string> top = TopAttributePerTask(matrix);
  OrderedJson top_doc;
  for (size_t t = 0; t < matrix.tasks.size(); ++t) {
    top_doc[matrix.tasks[t]] = top[t].empty() ? OrderedJson() : OrderedJson(top[t]);
  }
  doc["top_attribute_per_task"] = top_doc;
  LEAKAUDIT_RETURN_IF_ERROR(bundle.Write("audit.json", doc.dump(2) + "\n"));
  LEAKAUDIT_RETURN_IF_ERROR(bundle.Write("audit.csv", AuditMatrixCsv(matrix)));

  HeatmapSpec heat;
  heat.title = absl::StrCat("Delta_Adv (", o.repr, ")");
  heat.row_labels = matrix.tasks;
  heat.column_labels = matrix.sensitives;
  for (const auto& c : matrix.cells) heat.values.push_back(c.delta_adv);
  LEAKAUDIT_ASSIGN_OR_RETURN(std::string svg, RenderHeatmapSvg(heat));
  LEAKAUDIT_RETURN_IF_ERROR(bundle.Write("heatmap.svg", svg));

  absl::StatusOr<PearsonResult> pearson = PearsonMatrix(ds, o.sensitives);
  if (pearson.ok()) {
    OrderedJson p;
    p["columns"] = pearson->columns;
    OrderedJson rows = OrderedJson::array();
    for (size_t i = 0; i < pearson->columns.size(); ++i) {
      OrderedJson row = OrderedJson::array();
      for (size_t j = 0; j < pearson->columns.size(); ++j) {
        row.push_back(Round12(pearson->at(i, j)));
      }
      rows.push_back(std::move(row));
    }
    p["abs_r"] = std::move(rows);
    p["warnings"] = pearson->warnings;
    for (const auto& w : pearson->warnings) err << "warning: " << w << "\n";
    LEAKAUDIT_RETURN_IF_ERROR(bundle.Write("pearson.json", p.dump(2) + "\n"));
  } else {
    err << "note: pearson matrix skipped: " << pearson.status().message() << "\n";
  }

  for (size_t t = 0; t < matrix.tasks.size(); ++t) {
    out << "task " << matrix.tasks[t] << ": ";
    if (top[t].empty()) {
      out << "no off-diagonal attribute\n";
      continue;
    }
    const auto it =
        std::find(matrix.sensitives.begin(), matrix.sensitives.end(), top[t]);
    const size_t s = static_cast<size_t>(it - matrix.sensitives.begin());
    out << "highest leakage " << top[t] << " (delta_adv "
        << Format3(matrix.at(t, s).delta_adv) << ", utility "
        << Format3(matrix.at(t, s).utility) << ")\n";
  }
  return absl::OkStatus();
}

// ---------------------------------------------------------------- frontier

struct FrontierOptions {
  std::string joint_path;
  size_t z_size = 2;
  bool enumerate = false;
  bool search = false;
  size_t restarts = SearchConfig{}.restarts;
  size_t steps = SearchConfig{}.steps_per_restart;
  double step_scale = SearchConfig{}.step_scale;
  std::optional<double> budget;
};

absl::StatusOr<int> RunFrontier(const FrontierOptions& o,
                                const GlobalOptions& g, Bundle& bundle,
                                std::ostream& out) {
  LEAKAUDIT_ASSIGN_OR_RETURN(OrderedJson joint_doc,
                             ReadJsonFile(o.joint_path, bundle));
  LEAKAUDIT_ASSIGN_OR_RETURN(JointPmf joint, JointFromJson(joint_doc));
  if (joint.rank() != 2) {
    return absl::InvalidArgumentError("joint must have axes (X, Y)");
  }
  if (o.z_size < 1) return absl::InvalidArgumentError("--z-size must be >= 1");
  const bool enumerate = o.enumerate || !o.search;
  std::vector<FrontierPoint> points;
  if (enumerate) {
    LEAKAUDIT_ASSIGN_OR_RETURN(points, EnumerateDeterministic(joint, o.z_size));
  }
  if (o.search) {
    SearchConfig config;
    config.z_size = o.z_size;
    config.restarts = o.restarts;
    config.steps_per_restart = o.steps;
    config.step_scale = o.step_scale;
    config.leakage_budget = o.budget;
    config.seed = g.seed;
    LEAKAUDIT_ASSIGN_OR_RETURN(std::vector<FrontierPoint> found,
                               SearchChannels(joint, config, g.jobs));
    points.insert(points.end(), found.begin(), found.end());
  }
  LEAKAUDIT_ASSIGN_OR_RETURN(std::vector<FrontierPoint> pareto,
                             ParetoFilter(points, AlphaOrder::kInfinity));
  PosteriorReport posterior;
  if (auto p = PosteriorPositivity(joint); p.ok()) posterior = *p;
  const FeasibilityResult feasible =
      FeasibilityCheck(points, posterior, g.tolerance);

  LEAKAUDIT_RETURN_IF_ERROR(bundle.Write("points.csv", FrontierCsv(points)));
  LEAKAUDIT_RETURN_IF_ERROR(bundle.Write("frontier.csv", FrontierCsv(pareto)));
  ScatterSpec scatter;
  scatter.title = "Feasible region";
  scatter.x_label = "gamma_lpp (bits)";
  scatter.y_label = "I_inf(Y;Z) (bits)";
  std::set<std::string> on_front;
  for (const auto& p : pareto) on_front.insert(p.channel_digest);
  for (const auto& p : points) {
    scatter.points.push_back(
        {p.gamma_lpp, p.utility_iinf, on_front.count(p.channel_digest) > 0});
  }
  LEAKAUDIT_ASSIGN_OR_RETURN(std::string svg, RenderScatterSvg(scatter));
  LEAKAUDIT_RETURN_IF_ERROR(bundle.Write("frontier.svg", svg));

  out << points.size() << " points, " << pareto.size() << " on the frontier\n"
      << "strictly positive posterior: "
      << (posterior.strictly_positive ? "yes" : "no") << "\n"
      << "feasibility (utility <= gamma_lpp): "
      << (feasible.assumption_met ? Verdict(feasible.pass, out)
                                  : std::string("not applicable"))
      << " (worst residual " << Format12(feasible.worst_residual) << ")\n";
  return feasible.pass ? kExitOk : kExitInvariantViolated;
}

// ---------------------------------------------------------------- replab

struct ReplabOptions {
  std::string data_path;
  std::string task;
  std::string censor;
  TrainOptions train;
};

absl::Status RunReplab(const ReplabOptions& o, const GlobalOptions& g,
                       Bundle& bundle, std::ostream& out) {
  LEAKAUDIT_ASSIGN_OR_RETURN(Dataset ds, ReadDataset(o.data_path, bundle));
  LEAKAUDIT_RETURN_IF_ERROR(ds.Find(o.task).status());
  std::vector<std::string> features = o.train.features.empty()
                                          ? DefaultFeatures(ds, {o.task})
                                          : o.train.features;
  LEAKAUDIT_ASSIGN_OR_RETURN(DatasetSplit split, SplitDataset(ds, g.seed));
  TrainConfig config = MakeTrainConfig(o.train, g.seed, features);
  absl::StatusOr<TrainedModel> model;
  if (o.censor.empty()) {
    model = TrainEncoderErm(ds, split, o.task, config);
  } else {
    config.censor_target = o.censor;
    config.censor_lambda = o.train.lambda;
    model = TrainEncoderCensored(ds, split, o.task, config);
  }
  if (!model.ok()) return model.status();
  LEAKAUDIT_ASSIGN_OR_RETURN(Eigen::MatrixXd z_train,
                             Represent(*model, ds, split.train_idx));
  LEAKAUDIT_ASSIGN_OR_RETURN(QuantizerSpec quant,
                             FitQuantizer(z_train, o.train.bins));
  LEAKAUDIT_ASSIGN_OR_RETURN(std::vector<Column> columns,
                             ExportRepresentations(*model, ds, quant));
  LEAKAUDIT_ASSIGN_OR_RETURN(Dataset with_z, ds.WithColumns(std::move(columns)));
  LEAKAUDIT_ASSIGN_OR_RETURN(double accuracy,
                             TaskHeadAccuracy(*model, ds, split.eval_idx));
  LEAKAUDIT_RETURN_IF_ERROR(
      bundle.Write("model.json", ModelToJson(*model, quant).dump(2) + "\n"));
  LEAKAUDIT_RETURN_IF_ERROR(bundle.Write("representations.csv", with_z.ToCsv()));
  out << "task " << o.task << (o.censor.empty() ? "" : ", censoring ")
      << o.censor << "\n"
      << "training loss " << Format12(model->initial_loss) << " -> "
      << Format12(model->epoch_losses.empty() ? model->initial_loss
                                              : model->epoch_losses.back())
      << "\n"
      << "eval accuracy " << Format3(accuracy) << "\n";
  return absl::OkStatus();
}

// ---------------------------------------------------------------- report

absl::Status RunReport(const std::string& input, Bundle& bundle,
                       std::ostream& out) {
  LEAKAUDIT_ASSIGN_OR_RETURN(std::string text, ReadFile(input));
  bundle.AddInput(text);
  if (absl::EndsWith(input, ".csv")) {
    LEAKAUDIT_ASSIGN_OR_RETURN(std::vector<FrontierPoint> points,
                               ParseFrontierCsv(text));
    ScatterSpec scatter;
    scatter.title = "Feasible region";
    scatter.x_label = "gamma_lpp (bits)";
    scatter.y_label = "I_inf(Y;Z) (bits)";
    for (const auto& p : points) scatter.points.push_back({p.gamma_lpp, p.utility_iinf, false});
    LEAKAUDIT_ASSIGN_OR_RETURN(std::string svg, RenderScatterSvg(scatter));
    LEAKAUDIT_RETURN_IF_ERROR(bundle.Write("frontier.svg", svg));
    out << "wrote " << bundle.Path("frontier.svg") << "\n";
    return absl::OkStatus();
  }
  LEAKAUDIT_ASSIGN_OR_RETURN(OrderedJson doc, ParseJson(text));
  LEAKAUDIT_ASSIGN_OR_RETURN(AuditMatrix matrix, AuditMatrixFromJson(doc));
  HeatmapSpec heat;
  const std::string repr =
      doc.contains("repr") && doc["repr"].is_string() ? doc["repr"].get<std::string>()
                                                      : "columns";
  heat.title = absl::StrCat("Delta_Adv (", repr, ")");
  heat.row_labels = matrix.tasks;
  heat.column_labels = matrix.sensitives;
  for (const auto& c : matrix.cells) heat.values.push_back(c.delta_adv);
  LEAKAUDIT_ASSIGN_OR_RETURN(std::string svg, RenderHeatmapSvg(heat));
  LEAKAUDIT_RETURN_IF_ERROR(bundle.Write("heatmap.svg", svg));
  out << "wrote " << bundle.Path("heatmap.svg") << "\n";
  return absl::OkStatus();
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"leakaudit: least-privilege leakage engine and auditor",
               "leakaudit"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  app.add_option("--seed", g.seed, "Seed for every random stream");
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::Range(1, 1024));
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--tolerance", g.tolerance, "Numerical tolerance")
      ->check(CLI::NonNegativeNumber);

  SynthOptions synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Generate seeded instances");
  synth_cmd->add_flag("--positive-posterior", synth.positive_posterior,
                      "Random joint with P(y|x) > 0");
  synth_cmd->add_option("--deterministic-labels", synth.label_rule,
                        "Deterministic-label joint: parity or threshold");
  synth_cmd->add_option("--x-size", synth.x_size, "|X|")->check(CLI::Range(1, 4096));
  synth_cmd->add_option("--y-size", synth.y_size, "|Y|")->check(CLI::Range(1, 4096));
  synth_cmd->add_option("--min-posterior", synth.min_posterior,
                        "Lower bound on P(y|x)");
  synth_cmd->add_option("--bsc", synth.bsc, "Binary symmetric channel crossover");
  synth_cmd->add_flag("--identity", synth.identity, "Identity channel");
  synth_cmd->add_flag("--constant", synth.constant, "Constant channel");
  synth_cmd->add_option("--z-size", synth.z_size, "|Z| of the constant channel");
  synth_cmd->add_option("--sample", synth.sample, "Rows to sample into data.csv");
  synth_cmd->add_flag("--battery", synth.battery,
                      "Correlated-attribute audit dataset");

  CertifyOptions certify;
  CLI::App* certify_cmd =
      app.add_subcommand("certify", "Certify a channel and run theorem checks");
  certify_cmd->add_option("--joint", certify.joint_path, "Joint (X, Y) JSON")
      ->required();
  certify_cmd->add_option("--channel", certify.channel_path, "Channel JSON")
      ->required();
  certify_cmd->add_option("--gamma", certify.gamma, "LPP budget in bits");

  AuditOptions audit;
  CLI::App* audit_cmd = app.add_subcommand("audit", "Attribute-inference audit");
  audit_cmd->add_option("--data", audit.data_path, "CSV dataset")->required();
  audit_cmd->add_option("--task", audit.tasks, "Task columns")
      ->required()
      ->delimiter(',');
  audit_cmd->add_option("--sensitive", audit.sensitives, "Sensitive columns")
      ->required()
      ->delimiter(',');
  audit_cmd->add_option("--repr", audit.repr, "columns, erm or grad")
      ->check(CLI::IsMember({"columns", "erm", "grad"}));
  audit_cmd->add_option("--repeats", audit.repeats, "Repetitions to average");
  audit_cmd->add_option("--censor", audit.censor,
                        "Attribute to censor (grad; default: ERM's top per task)");
  AddTrainFlags(audit_cmd, audit.train);

  FrontierOptions frontier;
  CLI::App* frontier_cmd =
      app.add_subcommand("frontier", "Trace the utility-leakage region");
  frontier_cmd->add_option("--joint", frontier.joint_path, "Joint (X, Y) JSON")
      ->required();
  frontier_cmd->add_option("--z-size", frontier.z_size, "|Z|");
  frontier_cmd->add_flag("--enumerate", frontier.enumerate,
                         "Enumerate deterministic maps");
  frontier_cmd->add_flag("--search", frontier.search, "Hill-climb over channels");
  frontier_cmd->add_option("--restarts", frontier.restarts, "Search restarts");
  frontier_cmd->add_option("--steps", frontier.steps, "Steps per restart");
  frontier_cmd->add_option("--step-scale", frontier.step_scale,
                           "Initial perturbation size");
  frontier_cmd->add_option("--budget", frontier.budget,
                           "Leakage budget for the search penalty");

  ReplabOptions replab;
  CLI::App* replab_cmd =
      app.add_subcommand("replab", "Train and export one encoder");
  replab_cmd->add_option("--data", replab.data_path, "CSV dataset")->required();
  replab_cmd->add_option("--task", replab.task, "Task column")->required();
  replab_cmd->add_option("--censor", replab.censor, "Attribute to censor");
  AddTrainFlags(replab_cmd, replab.train);

  std::string report_input;
  CLI::App* report_cmd =
      app.add_subcommand("report", "Re-render SVGs from saved outputs");
  report_cmd->add_option("--input", report_input,
                         "audit JSON or frontier CSV")
      ->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  CLI::App* cmd = app.get_subcommands().front();
  Bundle bundle(g, cmd->get_name(), args);
  absl::StatusOr<int> code = kExitOk;
  if (cmd == synth_cmd) {
    absl::Status s = RunSynth(synth, g, bundle, out);
    if (!s.ok()) code = s;
  } else if (cmd == certify_cmd) {
    code = RunCertify(certify, g, bundle, out);
  } else if (cmd == audit_cmd) {
    absl::Status s = RunAudit(audit, g, bundle, out, err);
    if (!s.ok()) code = s;
  } else if (cmd == frontier_cmd) {
    code = RunFrontier(frontier, g, bundle, out);
  } else if (cmd == replab_cmd) {
    absl::Status s = RunReplab(replab, g, bundle, out);
    if (!s.ok()) code = s;
  } else {
    absl::Status s = RunReport(report_input, bundle, out);
    if (!s.ok()) code = s;
  }
  if (!code.ok()) return ExitFor(code.status(), err);
  if (absl::Status s = bundle.Finish(); !s.ok()) return ExitFor(s, err);
  return *code;
}

}  // namespace leakaudit
