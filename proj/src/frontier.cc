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

#include "leakaudit/frontier.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "leakaudit/certify.h"
#include "leakaudit/dist_json.h"
#include "leakaudit/parallel.h"
#include "leakaudit/random.h"
#include "leakaudit/status_macros.h"

namespace leakaudit {
namespace {

constexpr char kCsvHeader[] =
    "gamma_lpp,gamma_ulpp,utility_i1,utility_iinf,provenance,channel_digest";

// Clamp negatives to 0 and renormalize; a row with no mass left resets to
// uniform.
void ProjectToSimplex(std::vector<double>& row) {
  double total = 0.0;
  for (double& v : row) {
    if (v < 0.0) v = 0.0;
    total += v;
  }
  if (total <= 0.0) {
    std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(row.size()));
    return;
  }
  for (double& v : row) v /= total;
}

absl::StatusOr<std::vector<FrontierPoint>> RunRestart(
    const JointPmf& joint_xy, const SearchConfig& config, size_t restart) {
  Rng rng(DeriveSeed(config.seed, "search"),
          absl::StrCat("restart-", restart));
  const Alphabet& x = joint_xy.axis(0);
  const Alphabet z = Alphabet::Range("Z", config.z_size);
  std::vector<std::vector<double>> rows;
  for (size_t i = 0; i < x.size(); ++i) {
    rows.push_back(rng.FlatDirichlet(config.z_size));
  }
  LEAKAUDIT_ASSIGN_OR_RETURN(Channel channel, Channel::Create({x}, z, rows));
  LEAKAUDIT_ASSIGN_OR_RETURN(
      FrontierPoint current,
      EvaluateChannel(joint_xy, channel, Provenance::kSearched));
  double objective = SearchObjective(current, config);
  std::vector<FrontierPoint> trace = {current};

  double scale = config.step_scale;
  for (size_t step = 0; step < config.steps_per_restart; ++step) {
    std::vector<std::vector<double>> candidate = rows;
    for (auto& row : candidate) {
      std::vector<double> noise(row.size());
      double mean = 0.0;
      for (double& n : noise) {
        n = rng.Uniform(-scale, scale);
        mean += n;
      }
      mean /= static_cast<double>(noise.size());
      for (size_t j = 0; j < row.size(); ++j) row[j] += noise[j] - mean;
      ProjectToSimplex(row);
    }
    scale *= config.step_decay;
    LEAKAUDIT_ASSIGN_OR_RETURN(Channel next,
                               Channel::Create({x}, z, candidate));
    LEAKAUDIT_ASSIGN_OR_RETURN(
        FrontierPoint point,
        EvaluateChannel(joint_xy, next, Provenance::kSearched));
    const double next_objective = SearchObjective(point, config);
    if (next_objective > objective) {
      rows = std::move(candidate);
      objective = next_objective;
      trace.push_back(std::move(point));
    }
  }
  return trace;
}

}  // namespace

const char* ProvenanceName(Provenance p) {
  return p == Provenance::kEnumerated ? "enumerated" : "searched";
}

std::string ChannelDigest(const Channel& channel) {
  std::string canon;
  char buf[64];
  for (size_t r = 0; r < channel.num_rows(); ++r) {
    for (double v : channel.row(r)) {
      std::snprintf(buf, sizeof(buf), "%.12f,", v);
      canon += buf;
    }
    canon += ';';
  }
  return HexDigest(Fnv1a64(canon));
}

absl::StatusOr<FrontierPoint> EvaluateChannel(const JointPmf& joint_xy,
                                              const Channel& channel,
                                              Provenance provenance) {
  LEAKAUDIT_ASSIGN_OR_RETURN(JointPmf xyz, ComposeFeatures(joint_xy, channel));
  LEAKAUDIT_ASSIGN_OR_RETURN(MeasureValue lpp,
                             CondMaxLeakage(joint_xy, channel));
  LEAKAUDIT_ASSIGN_OR_RETURN(MeasureValue ulpp,
                             MaxLeakage(joint_xy.MarginalPmf(0), channel));
  const JointPmf yz = xyz.Marginal({1, 2});
  LEAKAUDIT_ASSIGN_OR_RETURN(MeasureValue i1, ShannonMi(yz));
  LEAKAUDIT_ASSIGN_OR_RETURN(MeasureValue iinf, IInf(yz));
  FrontierPoint point;
  point.gamma_lpp = lpp.bits;
  point.gamma_ulpp = ulpp.bits;
  point.utility_i1 = i1.bits;
  point.utility_iinf = iinf.bits;
  point.channel_digest = ChannelDigest(channel);
  point.provenance = provenance;
  point.rows = channel.Rows();
  return point;
}

absl::StatusOr<std::vector<FrontierPoint>> EnumerateDeterministic(
    const JointPmf& joint_xy, size_t z_size) {
  if (joint_xy.rank() != 2) {
    return absl::InvalidArgumentError("expected a joint over (X, Y)");
  }
  if (z_size == 0) return absl::InvalidArgumentError("z_size must be >= 1");
  const Alphabet& x = joint_xy.axis(0);
  const double count =
      std::pow(static_cast<double>(z_size), static_cast<double>(x.size()));
  if (count > kEnumerationLimit) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "too large: ", z_size, "^", x.size(), " maps exceeds the limit of ",
        kEnumerationLimit));
  }
  const Alphabet z = Alphabet::Range("Z", z_size);
  std::vector<size_t> mapping(x.size(), 0);
  std::vector<FrontierPoint> points;
  points.reserve(static_cast<size_t>(count));
  while (true) {
    LEAKAUDIT_ASSIGN_OR_RETURN(Channel channel,
                               Channel::Deterministic(x, z, mapping));
    LEAKAUDIT_ASSIGN_OR_RETURN(
        FrontierPoint point,
        EvaluateChannel(joint_xy, channel, Provenance::kEnumerated));
    points.push_back(std::move(point));
    size_t i = mapping.size();
    while (i > 0 && ++mapping[i - 1] == z_size) mapping[--i] = 0;
    if (i == 0) break;
  }
  return points;
}

double SearchObjective(const FrontierPoint& point, const SearchConfig& config) {
  if (!config.leakage_budget) return point.utility_iinf;
  return point.utility_iinf -
         config.penalty_weight *
             std::max(0.0, point.gamma_lpp - *config.leakage_budget);
}

absl::StatusOr<std::vector<FrontierPoint>> SearchChannels(
    const JointPmf& joint_xy, const SearchConfig& config, int jobs) {
  if (joint_xy.rank() != 2) {
    return absl::InvalidArgumentError("expected a joint over (X, Y)");
  }
  if (config.restarts < 1 || !(config.step_scale > 0.0) ||
      config.z_size < 1) {
    return absl::InvalidArgumentError(
        "search config needs restarts >= 1, step_scale > 0, z_size >= 1");
  }
  std::vector<absl::StatusOr<std::vector<FrontierPoint>>> traces(
      config.restarts, absl::UnknownError("not run"));
  ParallelFor(config.restarts, jobs, [&](size_t r) {
    traces[r] = RunRestart(joint_xy, config, r);
  });
  std::vector<FrontierPoint> out;
  for (auto& trace : traces) {
    if (!trace.ok()) return trace.status();
    for (auto& p : *trace) out.push_back(std::move(p));
  }
  return out;
}

absl::StatusOr<std::vector<FrontierPoint>> ParetoFilter(
    const std::vector<FrontierPoint>& points, AlphaOrder utility_key) {
  if (points.empty()) return absl::InvalidArgumentError("empty input");
  auto utility = [utility_key](const FrontierPoint& p) {
    return utility_key == AlphaOrder::kOne ? p.utility_i1 : p.utility_iinf;
  };
  std::vector<const FrontierPoint*> order;
  for (const auto& p : points) order.push_back(&p);
  std::sort(order.begin(), order.end(),
            [&](const FrontierPoint* a, const FrontierPoint* b) {
              if (a->gamma_lpp != b->gamma_lpp) {
                return a->gamma_lpp < b->gamma_lpp;
              }
              if (utility(*a) != utility(*b)) return utility(*a) > utility(*b);
              return a->channel_digest < b->channel_digest;
            });
  std::vector<FrontierPoint> kept;
  bool have_best = false;
  double best_before_group = 0.0;  // max utility over strictly smaller gamma
  size_t i = 0;
  while (i < order.size()) {
    const double gamma = order[i]->gamma_lpp;
    const double group_top = utility(*order[i]);
    size_t j = i;
    for (; j < order.size() && order[j]->gamma_lpp == gamma; ++j) {
      const FrontierPoint& p = *order[j];
      if (utility(p) != group_top) continue;
      if (have_best && best_before_group >= group_top) continue;
      if (!kept.empty() && kept.back().channel_digest == p.channel_digest &&
          kept.back().gamma_lpp == gamma) {
        continue;
      }
      kept.push_back(p);
    }
    if (!have_best || group_top > best_before_group) {
      best_before_group = group_top;
      have_best = true;
    }
    i = j;
  }
  return kept;
}

FeasibilityResult FeasibilityCheck(const std::vector<FrontierPoint>& points,
                                   const PosteriorReport& posterior,
                                   double tolerance) {
  FeasibilityResult result;
  result.assumption_met = posterior.strictly_positive;
  bool first = true;
  for (const auto& p : points) {
    const double residual =
        std::max(p.utility_i1, p.utility_iinf) - p.gamma_lpp;
    if (first || residual > result.worst_residual) {
      result.worst_residual = residual;
      first = false;
    }
    if (residual > tolerance) ++result.violations;
  }
  result.pass = !result.assumption_met || result.violations == 0;
  return result;
}

std::string FrontierCsv(const std::vector<FrontierPoint>& points) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& p : points) {
    absl::StrAppend(&out, Format12(p.gamma_lpp), ",", Format12(p.gamma_ulpp),
                    ",", Format12(p.utility_i1), ",", Format12(p.utility_iinf),
                    ",", ProvenanceName(p.provenance), ",", p.channel_digest,
                    "\n");
  }
  return out;
}

absl::StatusOr<std::vector<FrontierPoint>> ParseFrontierCsv(
    const std::string& text) {
  std::vector<std::string> lines = absl::StrSplit(text, '\n', absl::SkipEmpty());
  if (lines.empty() || lines[0] != kCsvHeader) {
    return absl::InvalidArgumentError("frontier CSV: unexpected header");
  }
  std::vector<FrontierPoint> points;
  for (size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::string> fields = absl::StrSplit(lines[i], ',');
    if (fields.size() != 6) {
      return absl::InvalidArgumentError(
          absl::StrCat("frontier CSV: line ", i + 1, " has ", fields.size(),
                       " fields"));
    }
    FrontierPoint p;
    double* targets[] = {&p.gamma_lpp, &p.gamma_ulpp, &p.utility_i1,
                         &p.utility_iinf};
    for (int k = 0; k < 4; ++k) {
      char* end = nullptr;
      *targets[k] = std::strtod(fields[k].c_str(), &end);
      if (end == fields[k].c_str() || *end != '\0') {
        return absl::InvalidArgumentError(
            absl::StrCat("frontier CSV: bad number '", fields[k], "'"));
      }
    }
    if (fields[4] == "enumerated") {
      p.provenance = Provenance::kEnumerated;
    } else if (fields[4] == "searched") {
      p.provenance = Provenance::kSearched;
    } else {
      return absl::InvalidArgumentError(
          absl::StrCat("frontier CSV: bad provenance '", fields[4], "'"));
    }
    p.channel_digest = fields[5];
    points.push_back(std::move(p));
  }
  return points;
}

}  // namespace leakaudit
