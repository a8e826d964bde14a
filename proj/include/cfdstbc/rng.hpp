/*
 * Copyright 2026 The cfdstbc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <random>

#include "cfdstbc/types.hpp"

namespace cfdstbc {

// Stateless 64-bit mix used to derive independent substream seeds from a
// parent seed and a tag (setup index, realization index, purpose, ...).
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag);

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  double uniform();                      // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  double normal();                       // N(0, 1)
  cplx complex_normal();                 // CN(0, 1)
  int index(int n);                      // uniform in {0, ..., n-1}

  CVec complex_normal_vector(int n);

  RandomStream substream(std::uint64_t tag) const {
    return RandomStream(derive_seed(seed_, tag));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace cfdstbc
