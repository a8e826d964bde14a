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

#include "cfdstbc/clustering.hpp"
#include "cfdstbc/config.hpp"
#include "cfdstbc/rng.hpp"
#include "cfdstbc/training.hpp"
#include "cfdstbc/types.hpp"

namespace cfdstbc {

// Unnormalized directions w̄_{k,l}; zero vectors where a_{k,l} = 0.
struct Directions {
  Grid<CVec> w;  // K x L
};

Directions mr_direction(const ChannelEstimate& est, const ClusterMap& clusters);
Directions lpmmse_direction(const ChannelEstimate& est, const ClusterMap& clusters, double eta, double sigma2);
// Centralized over the APs of M_k: eta_k (sum_{i in P_k} eta_i D(h_i h_i^H + U_i)D + sigma2 I)^{-1} D h_k.
Directions pmmse_direction(const ChannelEstimate& est, const ClusterMap& clusters, double eta, double sigma2);
Directions compute_directions(Precoder p, const ChannelEstimate& est, const ClusterMap& clusters, double eta,
                              double sigma2);

// P_k = {i : M_i and M_k share an AP}; contains k when M_k is nonempty.
std::vector<int> interference_set(const ClusterMap& clusters, int k);

struct DirectionMoments {
  RMat per_ap;      // K x L, E||w̄_{k,l}||^2
  RVec collective;  // K, E||w̄_k||^2
};

// MR: E||ĥ_{k,l}||^2 = tau_p eta_k tr(Theta_{k,l}).
DirectionMoments mr_moments(const EstimationStatistics& stats, const ClusterMap& clusters);
// Sample mean over independent estimate draws.
DirectionMoments sample_direction_moments(Precoder p, std::shared_ptr<const EstimationStatistics> stats,
                                          const ClusterMap& clusters, int draws, RandomStream& rng);

enum class PowerMode { distributed, centralized };

struct PowerAllocation {
  PowerMode mode = PowerMode::distributed;
  RMat per_ap;  // K x L, distributed
  RVec per_ue;  // K, centralized
};

RMat distributed_power(const RMat& betas, const ClusterMap& clusters, double rho_max);

// varpi_k = max_{l in M_k} E||w̄_{k,l}||^2 / E||w̄_k||^2.
RVec largest_ap_fraction(const DirectionMoments& moments, const ClusterMap& clusters);

RVec fractional_power(const RMat& betas, const ClusterMap& clusters, const RVec& varpi, double rho_max,
                      double varsigma, double kappa, double zeta);

struct PrecoderSet {
  PowerMode mode = PowerMode::distributed;
  Grid<CVec> w;  // K x L
  RMat rho;      // K x L, expected power E||w_{k,l}||^2
};

PrecoderSet normalize(const Directions& dirs, const PowerAllocation& power, const DirectionMoments& moments,
                      const ClusterMap& clusters);

}  // namespace cfdstbc
