// Copyright 2026 The SARR Authors
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

#ifndef SARR_RANDOM_HPP
#define SARR_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace sarr {

// Exclusively-owned random stream. All draws are inverse-CDF based where the
// draw-count contract matters (uniform, bernoulli, normal, laplace consume
// exactly one engine output), so a stream is replayable from its seed alone.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Uniform on [0, 1) with 53-bit resolution; one engine draw.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // One engine draw.
  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer on [0, bound); one engine draw (multiply-shift).
  std::uint64_t uniform_int(std::uint64_t bound);

  double normal(double mean = 0.0, double sd = 1.0);
  double laplace(double scale);
  double exponential(double rate = 1.0);
  double gamma(double shape, double scale = 1.0);
  double beta(double a, double b);
  double chi_squared(double df) { return gamma(df / 2.0, 2.0); }
  double student_t(double df);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// Counter-based seed derivation: hashes (master, path...) so replicate
// streams are independent of draw order and worker scheduling.
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> path);

}  // namespace sarr

#endif  // SARR_RANDOM_HPP
