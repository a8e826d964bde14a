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
#include "cfdstbc/coherent.hpp"
#include "cfdstbc/types.hpp"

namespace cfdstbc {

// Square orthogonal code: Alamouti for L_k = 2, rate-3/4 code for L_k = 4.
class OrthogonalCode {
 public:
  explicit OrthogonalCode(int L_k);

  int size() const { return L_k_; }     // L_k = P
  int symbols() const { return n_s_; }  // n_s
  double rate() const { return static_cast<double>(n_s_) / L_k_; }

  CMat build(const std::vector<cplx>& s) const;

 private:
  int L_k_;
  int n_s_;
};

CMat build_code_matrix(const std::vector<cplx>& symbols, int L_k);

// X = (1/sqrt(n_s)) sum_n (Re(s_n) A_n + j Im(s_n) B_n).
struct AmicableDesignSet {
  std::vector<IMat> A;
  std::vector<IMat> B;
};

AmicableDesignSet amicable_designs(int L_k);

// Exact integer check of the pairwise design conditions.
bool satisfies_amicable_conditions(const AmicableDesignSet& d);

struct InfoMatrixState {
  CMat C;                  // C^t
  int t = 0;               // block index
  int since_reorth = 0;

  static InfoMatrixState initial(int L_k);
};

// C^t = C^{t-1} X; every `reorth_period` encodes C is replaced by its polar
// factor (0 disables).
void differential_encode(InfoMatrixState& state, const CMat& X, int reorth_period = 64);

// Per-UE row combiner: q_{i,k} = sum_{l in M_i} g_tilde(i,k,l) e_{m(l,i)}, so
// that the noiseless block at UE k is sum_i q_{i,k} C_i.
std::vector<CRow> row_combiners(const EffectiveChannels& g, const ClusterMap& clusters, int k);

// y_k = sum_i sum_{l in M_i} g_tilde(i,k,l) [C_i]_{m(l,i),:} + n_k.
std::vector<CRow> transmit_block(const EffectiveChannels& g, const std::vector<CMat>& C,
                                 const ClusterMap& clusters, const std::vector<CRow>& noise);

struct Detection {
  std::vector<int> symbols;
  bool degenerate = false;  // Y was identically zero
};

Detection differential_detect(const CRow& y_t, const CRow& y_prev, const AmicableDesignSet& designs,
                              const PskConstellation& constellation);

// Exhaustive argmax of Re tr(X Y); codeword index = sum_n s_n M^n.
int joint_ml_oracle(const CRow& y_t, const CRow& y_prev, const OrthogonalCode& code,
                    const PskConstellation& constellation);

std::vector<int> codeword_symbols(int index, int n_s, int M);

}  // namespace cfdstbc
