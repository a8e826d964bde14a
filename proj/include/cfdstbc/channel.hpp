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

#include "cfdstbc/geometry.hpp"
#include "cfdstbc/rng.hpp"
#include "cfdstbc/types.hpp"

namespace cfdstbc {

struct ClusterMap;
struct PrecoderSet;

// Hermitian PSD square root; eigenvalues below -1e-10 * trace are an error,
// small negatives above that are clipped to zero.
CMat psd_sqrt(const CMat& R);

struct ChannelRealization {
  Grid<CVec> h;  // K x L, h_{k,l}
  int block_index = 0;
};

// Precomputed covariance square roots for repeated channel draws.
class ChannelSampler {
 public:
  explicit ChannelSampler(const NetworkSnapshot& snapshot);
  ChannelRealization sample(RandomStream& rng, int block_index = 0) const;

 private:
  Grid<CMat> roots_;
};

ChannelRealization sample_channels(const NetworkSnapshot& snapshot, RandomStream& rng);

struct PhaseState {
  std::vector<double> theta;  // L oscillator phases in [-alpha, alpha]
};

PhaseState sample_phases(double alpha, int L, RandomStream& rng);
PhaseState zero_phases(int L);

// g_tilde(i, k, l) = a_{i,l} e^{j theta_l} h_{k,l}^H w_{i,l}; g_ef(k, l) = g_tilde(k, k, l).
class EffectiveChannels {
 public:
  EffectiveChannels() = default;
  EffectiveChannels(int K, int L) : K_(K), L_(L), data_(static_cast<std::size_t>(K) * K * L, 0.0) {}

  int K() const { return K_; }
  int L() const { return L_; }

  cplx& g_tilde(int i, int k, int l) { return data_[(static_cast<std::size_t>(i) * K_ + k) * L_ + l]; }
  cplx g_tilde(int i, int k, int l) const { return data_[(static_cast<std::size_t>(i) * K_ + k) * L_ + l]; }
  cplx g_ef(int k, int l) const { return g_tilde(k, k, l); }

  // Copy with every AP-l term multiplied by e^{j theta_l}.
  EffectiveChannels rotated(const PhaseState& phases) const;

 private:
  int K_ = 0;
  int L_ = 0;
  std::vector<cplx> data_;
};

EffectiveChannels effective_channels(const ChannelRealization& realization, const PhaseState& phases,
                                     const PrecoderSet& precoders, const ClusterMap& clusters);

}  // namespace cfdstbc
