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

#include <vector>

#include "cfdstbc/channel.hpp"
#include "cfdstbc/clustering.hpp"
#include "cfdstbc/precoding.hpp"
#include "cfdstbc/training.hpp"
#include "cfdstbc/types.hpp"

namespace cfdstbc {

class PskConstellation {
 public:
  explicit PskConstellation(int order);

  int order() const { return order_; }
  int bits_per_symbol() const { return bits_; }
  cplx point(int index) const { return points_[index]; }
  const std::vector<cplx>& points() const { return points_; }
  // Reflected binary Gray label of a symbol index.
  static int gray(int index) { return index ^ (index >> 1); }
  int bit_errors(int sent, int detected) const;

 private:
  int order_;
  int bits_;
  std::vector<cplx> points_;
};

// sinc^2(alpha) = (sin(alpha)/alpha)^2, 1 at alpha = 0.
double nu_tilde(double alpha);

// y_k = sum_l sum_i g_tilde(i, k, l) s_i + n_k.
std::vector<cplx> transmit_symbol(const EffectiveChannels& g, const std::vector<cplx>& symbols,
                                  const std::vector<cplx>& noise);

// Minimum wrapped angular distance; ties to the lowest index; y = 0 gives 0.
int detect_psk(cplx y, const PskConstellation& constellation);

// Per-realization terms of the phase-averaged SINR, computed once and
// evaluated for any alpha.
struct UpperBoundTerms {
  RVec own_coherent;     // |sum_l h_ef_{k,l}|^2
  RVec own_noncoherent;  // sum_l |h_ef_{k,l}|^2
  RVec int_coherent;     // sum_{i != k} |sum_l h_tilde_{i,k,l}|^2
  RVec int_noncoherent;  // sum_{i != k} sum_l |h_tilde_{i,k,l}|^2
};

UpperBoundTerms upper_bound_terms(const EffectiveChannels& phase_free);
RVec sinr_upper(const UpperBoundTerms& terms, double alpha, double sigma2);
RVec sinr_upper(const EffectiveChannels& phase_free, double alpha, double sigma2);

// Instantaneous SINR for given phases: |sum_l g_ef|^2 / (sum_{i != k} |sum_l g_tilde|^2 + sigma2).
RVec sinr_instantaneous(const EffectiveChannels& g, double sigma2);

// Statistical inputs of the hardening bound.
struct HardeningMoments {
  CMat mean_gain;  // K x L, E{h_ef_{k,l}}
  RMat coherent;   // K x K, (i, k): E{|sum_l h_tilde_{i,k,l}|^2}
  RMat noncoherent;  // K x K, (i, k): E{sum_l |h_tilde_{i,k,l}|^2}
};

class HardeningAccumulator {
 public:
  HardeningAccumulator(int K, int L);
  void add(const EffectiveChannels& phase_free);
  HardeningMoments moments() const;
  int count() const { return n_; }

 private:
  int K_, L_, n_ = 0;
  CMat sum_gain_;
  RMat sum_coh_, sum_noncoh_;
};

struct HardeningResult {
  RVec sinr;
  std::vector<int> clamped;  // UEs whose denominator hit the floor
};

// Denominator: sum over all i (including k) of nu*coh + (1 - nu)*noncoh,
// minus nu |sum_l E h_ef|^2, plus sigma2; floored at sigma2 * 1e-6.
HardeningResult sinr_hardening(const HardeningMoments& m, double alpha, double sigma2);

// Closed-form MR moments for distributed power rho (K x L).
HardeningMoments mr_closed_form_moments(const EstimationStatistics& stats, const ClusterMap& clusters,
                                        const RMat& rho);

double se_from_sinr(double sinr, int tau_d, int tau_c);

}  // namespace cfdstbc
