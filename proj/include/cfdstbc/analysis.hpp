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

#include <complex>
#include <vector>

#include "cfdstbc/channel.hpp"
#include "cfdstbc/clustering.hpp"
#include "cfdstbc/config.hpp"
#include "cfdstbc/dstbc.hpp"
#include "cfdstbc/rng.hpp"
#include "cfdstbc/types.hpp"

namespace cfdstbc {

inline constexpr double kSinrCap = 1e9;

// Cross-row trace constant of the coherent-interference term: 0 for L_k = 2,
// 0.112 for L_k = 4, 1/8 for L_k = 8.
double ltilde(int L_k);

struct DstbcSinrInputs {
  RVec own;           // |g_ef_{k,l}|^2 over the L APs
  RMat interference;  // (K-1) x L, |g_tilde_{i,k,l}|^2 for i != k
  int n_s = 2;
  int L_k = 2;
  double sigma2 = 1.0;
  double ltilde = 0.0;
};

DstbcSinrInputs dstbc_sinr_inputs(const EffectiveChannels& g, int k, int L_k, double sigma2);

// sum_l |g_{k,l}|^2 / (2 n_s sigma2)
double snr_dstbc(const DstbcSinrInputs& in);

struct SinrValue {
  double value = 0.0;
  bool capped = false;
};

SinrValue sinr_dstbc_closed(const DstbcSinrInputs& in);

// SE prefactor: tau_d / tau_c (conventional), (G - 1) n_s / tau_c (dstbc),
// G = floor(tau_d / L_k).
double se_prefactor(Scheme scheme, int tau_c, int tau_d, int L_k);
double se_from_ber(double ber, Scheme scheme, int tau_c, int tau_d, int L_k, int M_o);

// Decision-statistic power ratio with fixed channels: var(MLI_1) / var(MLI - MLI_1)
// for symbol n of UE k, over a stream of coherence intervals of `blocks` blocks.
struct EmpiricalSinr {
  double signal = 0.0;
  double impairment = 0.0;
  double ratio = 0.0;
};

EmpiricalSinr empirical_dstbc_sinr(const EffectiveChannels& g, const ClusterMap& clusters, int k, int symbol_n,
                                   double sigma2, int block_pairs, int blocks, int M_o, RandomStream& rng);

// Trace expectations over encoded streams (intervals of `blocks` blocks).
// same_row: E|c_m A_n d_m^H|^2; other_row: E|c_mu A_n d_m^H|^2 (mu != m);
// cross: E{(c_mu A_n d_mu^H) conj(c_m A_n d_m^H)} (mu != m), real part.
// c = rows of C^{t-1}, d = rows of C^t; averaged over n and row pairs.
struct TraceExpectations {
  double same_row = 0.0;
  double other_row = 0.0;
  double cross = 0.0;
  long long samples = 0;
};

TraceExpectations trace_expectations(int L_k, int pairs, int blocks, int M_o, RandomStream& rng);

}  // namespace cfdstbc
