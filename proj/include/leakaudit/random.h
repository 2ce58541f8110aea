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

#ifndef LEAKAUDIT_RANDOM_H_
#define LEAKAUDIT_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace leakaudit {

// 64-bit FNV-1a.
uint64_t Fnv1a64(std::string_view bytes);

// Lower-case hex rendering of a 64-bit digest, zero padded to 16 chars.
std::string HexDigest(uint64_t digest);

// Derives an independent seed for the named substream of `seed`. All
// randomness in a run flows from one user seed through these names
// ("split", "init", "search", ...).
uint64_t DeriveSeed(uint64_t seed, std::string_view stream);

// Portable random source. Only the raw 64-bit engine output is used, so
// sequences are identical across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}
  Rng(uint64_t seed, std::string_view stream)
      : engine_(DeriveSeed(seed, stream)) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform();
  // Uniform on (0, 1).
  double UniformOpen();
  // Uniform on [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Unbiased integer in [0, n).
  size_t UniformIndex(size_t n);
  double Exponential();
  // Uniform draw from the probability simplex of dimension n.
  std::vector<double> FlatDirichlet(size_t n);
  bool Bernoulli(double p) { return Uniform() < p; }
  // Index drawn from a (not necessarily normalized) weight vector.
  size_t Categorical(const std::vector<double>& weights);

  template <typename T>
  void Shuffle(std::vector<T>& values) {
    for (size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[UniformIndex(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace leakaudit

#endif  // LEAKAUDIT_RANDOM_H_
