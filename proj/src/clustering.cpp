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

#include "cfdstbc/clustering.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace cfdstbc {

namespace {

void finalize(ClusterMap& c) {
  c.a.setConstant(c.K, c.L, false);
  c.served.assign(c.L, {});
  c.degraded.clear();
  for (int k = 0; k < c.K; ++k) {
    for (int l : c.serving[k]) {
      c.a(k, l) = true;
      c.served[l].push_back(k);
    }
    if (static_cast<int>(c.serving[k].size()) < c.L_k) c.degraded.push_back(k);
  }
  for (auto& s : c.served) std::sort(s.begin(), s.end());
  c.row = row_mapping(c);
}

}  // namespace

ClusterMap build_clusters(const RMat& betas, int L_k, int K_max) {
  const int K = static_cast<int>(betas.rows());
  const int L = static_cast<int>(betas.cols());
  if (L_k < 1) throw Error("build_clusters: L_k >= 1 required");
  if (L_k > L) throw Error("build_clusters: L_k <= L required");
  if (K_max < 1) throw Error("build_clusters: K_max >= 1 required");

  ClusterMap c;
  c.K = K;
  c.L = L;
  c.L_k = L_k;
  c.serving.assign(K, {});
  std::vector<std::vector<int>> load(L);

  std::vector<int> order(K);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return betas.row(x).maxCoeff() > betas.row(y).maxCoeff();
  });

  std::vector<int> aps(L);
  for (int k : order) {
    std::iota(aps.begin(), aps.end(), 0);
    std::stable_sort(aps.begin(), aps.end(), [&](int x, int y) { return betas(k, x) > betas(k, y); });
    for (int n = 0; n < L_k; ++n) {
      const int l = aps[n];
      auto& users = load[l];
      if (static_cast<int>(users.size()) < K_max) {
        users.push_back(k);
        c.serving[k].push_back(l);
        continue;
      }
      // Weakest currently served UE (ties: the later-indexed one).
      int weakest = users.front();
      for (int u : users)
        if (betas(u, l) < betas(weakest, l) || (betas(u, l) == betas(weakest, l) && u > weakest)) weakest = u;
      if (betas(k, l) > betas(weakest, l)) {
        std::replace(users.begin(), users.end(), weakest, k);
        auto& ms = c.serving[weakest];
        ms.erase(std::remove(ms.begin(), ms.end(), l), ms.end());
        c.serving[k].push_back(l);
      }
    }
  }
  finalize(c);
  return c;
}

std::vector<std::vector<int>> row_mapping(const ClusterMap& c) {
  std::vector<std::vector<int>> row(c.K, std::vector<int>(c.L, -1));
  for (int k = 0; k < c.K; ++k) {
    std::vector<int> sorted = c.serving[k];
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t m = 0; m < sorted.size(); ++m) row[k][sorted[m]] = static_cast<int>(m);
  }
  return row;
}

ClusterMap clusters_from_lists(int L, int L_k, const std::vector<std::vector<int>>& serving) {
  ClusterMap c;
  c.K = static_cast<int>(serving.size());
  c.L = L;
  c.L_k = L_k;
  c.serving = serving;
  for (const auto& ms : serving) {
    if (static_cast<int>(ms.size()) > L_k) throw Error("clusters_from_lists: |M_k| > L_k");
    for (int l : ms)
      if (l < 0 || l >= L) throw Error("clusters_from_lists: AP index " + std::to_string(l) + " out of range");
  }
  finalize(c);
  return c;
}

}  // namespace cfdstbc
