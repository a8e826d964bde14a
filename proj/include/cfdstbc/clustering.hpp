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

#include "cfdstbc/types.hpp"

namespace cfdstbc {

struct ClusterMap {
  int K = 0;
  int L = 0;
  int L_k = 0;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> a;  // K x L
  std::vector<std::vector<int>> serving;  // M_k, in request (descending beta) order
  std::vector<std::vector<int>> served;   // K_l, ascending UE index
  std::vector<std::vector<int>> row;      // K x L, m(l, k) in 0..L_k-1, -1 when a_{k,l} = 0
  std::vector<int> degraded;              // UEs with |M_k| < L_k

  bool serves(int k, int l) const { return a(k, l); }
  int row_of(int l, int k) const { return row[k][l]; }
};

// Single-pass request/accept association on large-scale gains.
ClusterMap build_clusters(const RMat& betas, int L_k, int K_max);

// m(l, k) = rank of l within M_k sorted by ascending AP index (0-based).
std::vector<std::vector<int>> row_mapping(const ClusterMap& clusters);

// Recomputes a, K_l and rows from explicit M_k lists.
ClusterMap clusters_from_lists(int L, int L_k, const std::vector<std::vector<int>>& serving);

}  // namespace cfdstbc
