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

#ifndef LEAKAUDIT_TESTS_ORACLES_H_
#define LEAKAUDIT_TESTS_ORACLES_H_

// Independent reference computations used by the tests. These work on raw
// nested vectors with plain loops and never call the measure code under test.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <cstdlib>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "gtest/gtest.h"
#include "leakaudit/dist.h"

namespace leakaudit::testing {

using Matrix = std::vector<std::vector<double>>;

// Unwraps a StatusOr inside a test, failing loudly.
template <typename T>
T Unwrap(absl::StatusOr<T> value) {
  if (!value.ok()) {
    std::fprintf(stderr, "unexpected error: %s\n",
                 value.status().ToString().c_str());
    std::abort();
  }
  return *std::move(value);
}

inline std::vector<double> Vec(std::span<const double> values) {
  return std::vector<double>(values.begin(), values.end());
}

inline double Log2(double v) { return std::log(v) / std::log(2.0); }

// P(x, y) as a |X| x |Y| table from a rank-2 joint.
inline Matrix Table2(const JointPmf& j) {
  Matrix t(j.dim(0), std::vector<double>(j.dim(1)));
  for (size_t a = 0; a < j.dim(0); ++a) {
    for (size_t b = 0; b < j.dim(1); ++b) t[a][b] = j.probs()[a * j.dim(1) + b];
  }
  return t;
}

// sum_z max_{x : p(x) > 0} W(z | x).
inline double MaxLeakageOracle(const std::vector<double>& px, const Matrix& w) {
  double total = 0.0;
  for (size_t z = 0; z < w[0].size(); ++z) {
    double best = 0.0;
    for (size_t x = 0; x < px.size(); ++x) {
      if (px[x] > 0) best = std::max(best, w[x][z]);
    }
    total += best;
  }
  return Log2(total);
}

// max_y sum_z max_{x : p(x, y) > 0} W(z | x).
inline double CondMaxLeakageOracle(const Matrix& pxy, const Matrix& w) {
  double worst = 0.0;
  for (size_t y = 0; y < pxy[0].size(); ++y) {
    double py = 0.0;
    for (size_t x = 0; x < pxy.size(); ++x) py += pxy[x][y];
    if (py <= 0) continue;
    double total = 0.0;
    for (size_t z = 0; z < w[0].size(); ++z) {
      double best = 0.0;
      for (size_t x = 0; x < pxy.size(); ++x) {
        if (pxy[x][y] > 0) best = std::max(best, w[x][z]);
      }
      total += best;
    }
    worst = std::max(worst, total);
  }
  return Log2(worst);
}

// Bayes success of guessing a from b for a table P(a, b).
inline double GuessFrom(const Matrix& pab) {
  double total = 0.0;
  for (size_t b = 0; b < pab[0].size(); ++b) {
    double best = 0.0;
    for (size_t a = 0; a < pab.size(); ++a) best = std::max(best, pab[a][b]);
    total += best;
  }
  return total;
}

inline double Marginal0Max(const Matrix& pab) {
  double best = 0.0;
  for (const auto& row : pab) {
    double s = 0.0;
    for (double v : row) s += v;
    best = std::max(best, s);
  }
  return best;
}

// I_inf(A; B) = log2(GuessFrom / max_a P(a)).
inline double IInfOracle(const Matrix& pab) {
  return Log2(GuessFrom(pab) / Marginal0Max(pab));
}

inline double MiOracle(const Matrix& pab) {
  std::vector<double> pa(pab.size(), 0.0), pb(pab[0].size(), 0.0);
  for (size_t a = 0; a < pab.size(); ++a) {
    for (size_t b = 0; b < pab[0].size(); ++b) {
      pa[a] += pab[a][b];
      pb[b] += pab[a][b];
    }
  }
  double mi = 0.0;
  for (size_t a = 0; a < pab.size(); ++a) {
    for (size_t b = 0; b < pab[0].size(); ++b) {
      if (pab[a][b] > 0) mi += pab[a][b] * Log2(pab[a][b] / (pa[a] * pb[b]));
    }
  }
  return mi;
}

// P(y, z) = sum_x P(x, y) W(z | x).
inline Matrix TaskOutputTable(const Matrix& pxy, const Matrix& w) {
  Matrix out(pxy[0].size(), std::vector<double>(w[0].size(), 0.0));
  for (size_t x = 0; x < pxy.size(); ++x) {
    for (size_t y = 0; y < pxy[0].size(); ++y) {
      for (size_t z = 0; z < w[0].size(); ++z) out[y][z] += pxy[x][y] * w[x][z];
    }
  }
  return out;
}

// Conditional attribute gain for S - (X, Y) - Z with P(s | x, y) given as
// attr[x * |Y| + y][s]: log2 of sum_{y,z} max_s P(s,y,z) over
// sum_y max_s P(s,y).
inline double AttributeGainCondOracle(const Matrix& pxy, const Matrix& attr,
                                      const Matrix& w) {
  const size_t nx = pxy.size(), ny = pxy[0].size(), ns = attr[0].size(),
               nz = w[0].size();
  double with_z = 0.0, without_z = 0.0;
  for (size_t y = 0; y < ny; ++y) {
    std::vector<double> psy(ns, 0.0);
    for (size_t x = 0; x < nx; ++x) {
      for (size_t s = 0; s < ns; ++s) psy[s] += pxy[x][y] * attr[x * ny + y][s];
    }
    without_z += *std::max_element(psy.begin(), psy.end());
    for (size_t z = 0; z < nz; ++z) {
      double best = 0.0;
      for (size_t s = 0; s < ns; ++s) {
        double p = 0.0;
        for (size_t x = 0; x < nx; ++x) {
          p += pxy[x][y] * attr[x * ny + y][s] * w[x][z];
        }
        best = std::max(best, p);
      }
      with_z += best;
    }
  }
  return Log2(with_z / without_z);
}

}  // namespace leakaudit::testing

#endif  // LEAKAUDIT_TESTS_ORACLES_H_
