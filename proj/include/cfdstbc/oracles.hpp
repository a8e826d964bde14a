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
#include <string>
#include <vector>

#include "cfdstbc/channel.hpp"
#include "cfdstbc/clustering.hpp"
#include "cfdstbc/rng.hpp"

namespace cfdstbc {

struct OracleCheck {
  std::string name;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

// Random DSTBC link: each UE served by L_k distinct APs out of L, own gains
// CN(0, 1), interfering gains CN(0, interference_scale^2). Phases are zero.
struct SyntheticLink {
  EffectiveChannels g;
  ClusterMap clusters;
};

SyntheticLink synthetic_link(int K, int L, int L_k, double interference_scale, RandomStream& rng);

// Noiseless single-UE links with random phases and random unitary C^{t-1}:
// returns the fraction of correctly detected codewords and the worst relative
// deviation of tr(A_n Y) from its zero-phase value.
struct PhaseCancellation {
  double detection_rate = 0.0;
  double max_relative_deviation = 0.0;
  int draws = 0;
};
PhaseCancellation phase_cancellation_check(int L_k, int draws, RandomStream& rng);

// Decoupled per-symbol detection vs exhaustive joint ML on noisy blocks.
struct DecouplingAgreement {
  int instances = 0;
  int unique = 0;
  int agree = 0;
};
DecouplingAgreement decoupling_vs_joint_ml(int L_k, int instances, double sigma2, RandomStream& rng);

// Table printed by the CLI oracle subcommand.
std::vector<OracleCheck> run_oracles(std::uint64_t seed);

}  // namespace cfdstbc
