// Copyright 2026 The simverify Authors
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

#ifndef SIMVERIFY_COMMON_RNG_H_
#define SIMVERIFY_COMMON_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace simverify {

// Combines two 64-bit values with the splitmix64 finalizer. Used to derive
// independent sub-stream seeds from a single user-facing seed.
uint64_t MixSeed(uint64_t seed, uint64_t value);

// Folds `path` into `seed` left to right: MixSeed(MixSeed(seed, p0), p1)...
uint64_t DeriveSeed(uint64_t seed, std::initializer_list<uint64_t> path);

// A seeded random stream. Every randomized operation owns its own Rng; there
// is no global generator.
//
// UniformOpen() and UniformIndex() are defined purely in terms of the raw
// mt19937_64 output, so they are reproducible across standard libraries.
// Draws that go through engine() with <random> distributions are only
// reproducible within one standard library implementation.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Uniform double on the open interval (0, 1): ((bits >> 11) + 0.5) / 2^53.
  double UniformOpen();

  // Uniform integer in [0, n). Requires n > 0.
  uint64_t UniformIndex(uint64_t n);

  // In-place Fisher-Yates shuffle driven by UniformIndex().
  template <typename T>
  void Shuffle(std::span<T> values) {
    for (size_t i = values.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(UniformIndex(i));
      std::swap(values[i - 1], values[j]);
    }
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace simverify

#endif  // SIMVERIFY_COMMON_RNG_H_
