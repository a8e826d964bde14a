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

#include "cfdstbc/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace cfdstbc {

std::vector<int> PilotBook::copilots(int k) const { return users_of(pilot[k]); }

std::vector<int> PilotBook::users_of(int t) const {
  std::vector<int> out;
  for (int i = 0; i < K(); ++i)
    if (pilot[i] == t) out.push_back(i);
  return out;
}

PilotBook assign_pilots(const RMat& betas, int tau_p) {
  if (tau_p < 1) throw Error("assign_pilots: tau_p >= 1 required");
  const int K = static_cast<int>(betas.rows());
  PilotBook book;
  book.tau_p = tau_p;
  book.pilot.assign(K, -1);
  std::vector<int> order(K);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return betas.row(a).maxCoeff() > betas.row(b).maxCoeff();
  });
  for (int n = 0; n < K; ++n) {
    const int k = order[n];
    if (n < tau_p) {
      book.pilot[k] = n;
      continue;
    }
    int master = 0;
    betas.row(k).maxCoeff(&master);
    int best = 0;
    double best_load = std::numeric_limits<double>::infinity();
    for (int t = 0; t < tau_p; ++t) {
      double load = 0.0;
      for (int i = 0; i < K; ++i)
        if (book.pilot[i] == t) load += betas(i, master);
      if (load < best_load) {
        best_load = load;
        best = t;
      }
    }
    book.pilot[k] = best;
  }
  return book;
}

EstimationStatistics estimation_statistics(const NetworkSnapshot& s, const PilotBook& pilots,
                                           const TrainingParams& params) {
  EstimationStatistics st;
  st.K = s.K();
  st.L = s.L();
  st.N = s.N();
  st.tau_p = pilots.tau_p;
  st.params = params;
  st.pilots = pilots;
  st.covariances = &s.covariances;
  const int N = st.N;
  const double tp = st.tau_p;
  st.psi = Grid<CMat>(st.tau_p, st.L);
  st.psi_inv = Grid<CMat>(st.tau_p, st.L);
  st.psi_root = Grid<CMat>(st.tau_p, st.L);
  for (int t = 0; t < st.tau_p; ++t) {
    const auto users = pilots.users_of(t);
    for (int l = 0; l < st.L; ++l) {
      CMat psi = params.sigma2 * CMat::Identity(N, N);
      for (int i : users) psi += params.eta_mw * tp * s.covariances(i, l);
      psi = 0.5 * (psi + psi.adjoint()).eval();
      Eigen::SelfAdjointEigenSolver<CMat> es(psi);
      const RVec ev = es.eigenvalues();
      if (!(ev.minCoeff() > 0) || ev.maxCoeff() / ev.minCoeff() > kConditionBound)
        throw Error("mmse_estimate: pilot covariance Psi is ill-conditioned (cond > 1e12) at pilot " +
                    std::to_string(t) + ", AP " + std::to_string(l));
      st.psi(t, l) = psi;
      st.psi_inv(t, l) = es.eigenvectors() * ev.cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();
      st.psi_root(t, l) = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
    }
  }
  st.gain = Grid<CMat>(st.K, st.L);
  st.theta = Grid<CMat>(st.K, st.L);
  st.err_cov = Grid<CMat>(st.K, st.L);
  for (int k = 0; k < st.K; ++k) {
    const int t = pilots.pilot[k];
    for (int l = 0; l < st.L; ++l) {
      const CMat& R = s.covariances(k, l);
      const CMat RPi = R * st.psi_inv(t, l);
      st.gain(k, l) = std::sqrt(tp * params.eta_mw) * RPi;
      CMat th = RPi * R;
      th = 0.5 * (th + th.adjoint()).eval();
      st.theta(k, l) = th;
      CMat u = R - params.eta_mw * tp * th;
      st.err_cov(k, l) = 0.5 * (u + u.adjoint());
    }
  }
  return st;
}

ReceivedPilots received_pilot(const ChannelRealization& r, const PhaseState& phases, const PilotBook& pilots,
                              const TrainingParams& params, int tau_p, RandomStream& rng) {
  const int K = r.h.rows();
  const int L = r.h.cols();
  const int N = K > 0 && L > 0 ? static_cast<int>(r.h(0, 0).size()) : 0;
  ReceivedPilots y(tau_p, L, CVec::Zero(N));
  for (int t = 0; t < tau_p; ++t)
    for (int l = 0; l < L; ++l) {
      CVec& v = y(t, l);
      if (params.sigma2 > 0) v = std::sqrt(params.sigma2) * rng.complex_normal_vector(N);
    }
  for (int k = 0; k < K; ++k) {
    const double amp = std::sqrt(tau_p * params.eta_mw);
    for (int l = 0; l < L; ++l) {
      cplx f = amp;
      if (params.pilot_phase) f *= std::polar(1.0, -phases.theta[l]);
      y(pilots.pilot[k], l) += f * r.h(k, l);
    }
  }
  return y;
}

ReceivedPilots sample_received_pilots(const EstimationStatistics& st, RandomStream& rng) {
  ReceivedPilots y(st.tau_p, st.L);
  for (int t = 0; t < st.tau_p; ++t)
    for (int l = 0; l < st.L; ++l) y(t, l) = st.psi_root(t, l) * rng.complex_normal_vector(st.N);
  return y;
}

ChannelEstimate mmse_estimate(const ReceivedPilots& received,
                              std::shared_ptr<const EstimationStatistics> stats) {
  ChannelEstimate e;
  e.h_hat = Grid<CVec>(stats->K, stats->L);
  for (int k = 0; k < stats->K; ++k) {
    const int t = stats->pilots.pilot[k];
    for (int l = 0; l < stats->L; ++l) e.h_hat(k, l) = stats->gain(k, l) * received(t, l);
  }
  e.stats = std::move(stats);
  return e;
}

}  // namespace cfdstbc
