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

#include <memory>
#include <vector>

#include "cfdstbc/channel.hpp"
#include "cfdstbc/geometry.hpp"
#include "cfdstbc/rng.hpp"
#include "cfdstbc/types.hpp"

namespace cfdstbc {

struct PilotBook {
  int tau_p = 0;
  std::vector<int> pilot;  // pilot index per UE, 0-based

  int K() const { return static_cast<int>(pilot.size()); }
  std::vector<int> copilots(int k) const;  // Q_k, contains k
  std::vector<int> users_of(int t) const;
  bool shares_pilot(int i, int k) const { return pilot[i] == pilot[k]; }
};

// Greedy: UEs by descending max_l beta; the first tau_p take distinct pilots,
// later UEs take the pilot with the least co-pilot gain at their strongest AP.
PilotBook assign_pilots(const RMat& betas, int tau_p);

struct TrainingParams {
  double eta_mw = 100.0;  // pilot power per UE
  double sigma2 = 1.0;    // uplink noise power
  bool pilot_phase = false;
};

// Per-snapshot second-order statistics of the MMSE estimator.
struct EstimationStatistics {
  int K = 0, L = 0, N = 0, tau_p = 0;
  TrainingParams params;
  PilotBook pilots;
  Grid<CMat> psi;       // tau_p x L, Psi_{t,l}
  Grid<CMat> psi_inv;   // tau_p x L
  Grid<CMat> psi_root;  // tau_p x L, Psi^{1/2}
  Grid<CMat> gain;      // K x L, sqrt(tau_p eta_k) R_{k,l} Psi^{-1}
  Grid<CMat> theta;     // K x L, R Psi^{-1} R
  Grid<CMat> err_cov;   // K x L, R - eta_k tau_p Theta
  const Grid<CMat>* covariances = nullptr;
};

inline constexpr double kConditionBound = 1e12;

EstimationStatistics estimation_statistics(const NetworkSnapshot& snapshot, const PilotBook& pilots,
                                           const TrainingParams& params);

using ReceivedPilots = Grid<CVec>;  // tau_p x L

ReceivedPilots received_pilot(const ChannelRealization& realization, const PhaseState& phases,
                              const PilotBook& pilots, const TrainingParams& params, int tau_p,
                              RandomStream& rng);

// Draws received pilots with the correct joint law, without channels.
ReceivedPilots sample_received_pilots(const EstimationStatistics& stats, RandomStream& rng);

struct ChannelEstimate {
  Grid<CVec> h_hat;  // K x L
  std::shared_ptr<const EstimationStatistics> stats;
};

ChannelEstimate mmse_estimate(const ReceivedPilots& received,
                              std::shared_ptr<const EstimationStatistics> stats);

}  // namespace cfdstbc
