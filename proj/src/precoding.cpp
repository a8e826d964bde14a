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

#include "cfdstbc/precoding.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cfdstbc {

namespace {

template <class Solver>
void check_conditioning(const Solver& llt, const char* who) {
  if (llt.info() != Eigen::Success || llt.rcond() < 1.0 / kConditionBound)
    throw Error(std::string(who) + ": regularized covariance is ill-conditioned (cond > 1e12)");
}

}  // namespace

Directions mr_direction(const ChannelEstimate& est, const ClusterMap& c) {
  const int N = est.stats->N;
  Directions d{Grid<CVec>(c.K, c.L, CVec::Zero(N))};
  for (int k = 0; k < c.K; ++k)
    for (int l : c.serving[k]) d.w(k, l) = est.h_hat(k, l);
  return d;
}

Directions lpmmse_direction(const ChannelEstimate& est, const ClusterMap& c, double eta, double sigma2) {
  if (!(sigma2 > 0)) throw Error("lpmmse_direction: sigma2 > 0 required");
  const auto& st = *est.stats;
  const int N = st.N;
  Directions d{Grid<CVec>(c.K, c.L, CVec::Zero(N))};
  for (int l = 0; l < c.L; ++l) {
    if (c.served[l].empty()) continue;
    CMat S = sigma2 * CMat::Identity(N, N);
    for (int i : c.served[l]) {
      const CVec& h = est.h_hat(i, l);
      S.noalias() += eta * (h * h.adjoint());
      S += eta * st.err_cov(i, l);
    }
    Eigen::LLT<CMat> llt(S);
    check_conditioning(llt, "lpmmse_direction");
    for (int k : c.served[l]) d.w(k, l) = eta * llt.solve(est.h_hat(k, l));
  }
  return d;
}

std::vector<int> interference_set(const ClusterMap& c, int k) {
  std::vector<int> out;
  for (int i = 0; i < c.K; ++i) {
    bool shared = false;
    for (int l : c.serving[k])
      if (c.a(i, l)) {
        shared = true;
        break;
      }
    if (shared) out.push_back(i);
  }
  return out;
}

Directions pmmse_direction(const ChannelEstimate& est, const ClusterMap& c, double eta, double sigma2) {
  if (!(sigma2 > 0)) throw Error("pmmse_direction: sigma2 > 0 required");
  const auto& st = *est.stats;
  const int N = st.N;
  Directions d{Grid<CVec>(c.K, c.L, CVec::Zero(N))};
  for (int k = 0; k < c.K; ++k) {
    const auto& mk = c.serving[k];
    const int nap = static_cast<int>(mk.size());
    if (nap == 0) continue;
    const int dim = N * nap;
    const auto iset = interference_set(c, k);
    CMat S = sigma2 * CMat::Identity(dim, dim);
    CMat V = CMat::Zero(dim, static_cast<Eigen::Index>(iset.size()));
    for (std::size_t j = 0; j < iset.size(); ++j) {
      const int i = iset[j];
      for (int b = 0; b < nap; ++b) {
        const int l = mk[b];
        if (!c.a(i, l)) continue;
        V.block(b * N, static_cast<Eigen::Index>(j), N, 1) = est.h_hat(i, l);
        S.block(b * N, b * N, N, N) += eta * st.err_cov(i, l);
      }
    }
    S.selfadjointView<Eigen::Lower>().rankUpdate(V, eta);
    CVec v(dim);
    for (int b = 0; b < nap; ++b) v.segment(b * N, N) = est.h_hat(k, mk[b]);
    Eigen::LLT<CMat> llt(S);
    check_conditioning(llt, "pmmse_direction");
    const CVec w = eta * llt.solve(v);
    for (int b = 0; b < nap; ++b) d.w(k, mk[b]) = w.segment(b * N, N);
  }
  return d;
}

Directions compute_directions(Precoder p, const ChannelEstimate& est, const ClusterMap& c, double eta,
                              double sigma2) {
  switch (p) {
    case Precoder::mr: return mr_direction(est, c);
    case Precoder::lpmmse: return lpmmse_direction(est, c, eta, sigma2);
    case Precoder::pmmse: return pmmse_direction(est, c, eta, sigma2);
  }
  throw Error("compute_directions: unknown precoder");
}

DirectionMoments mr_moments(const EstimationStatistics& st, const ClusterMap& c) {
  DirectionMoments m{RMat::Zero(c.K, c.L), RVec::Zero(c.K)};
  for (int k = 0; k < c.K; ++k)
    for (int l : c.serving[k]) {
      m.per_ap(k, l) = st.tau_p * st.params.eta_mw * st.theta(k, l).trace().real();
      m.collective(k) += m.per_ap(k, l);
    }
  return m;
}

DirectionMoments sample_direction_moments(Precoder p, std::shared_ptr<const EstimationStatistics> stats,
                                          const ClusterMap& c, int draws, RandomStream& rng) {
  if (draws < 1) throw Error("sample_direction_moments: draws >= 1 required");
  DirectionMoments m{RMat::Zero(c.K, c.L), RVec::Zero(c.K)};
  const double eta = stats->params.eta_mw;
  const double s2 = stats->params.sigma2;
  for (int n = 0; n < draws; ++n) {
    const ChannelEstimate est = mmse_estimate(sample_received_pilots(*stats, rng), stats);
    const Directions d = compute_directions(p, est, c, eta, s2);
    for (int k = 0; k < c.K; ++k)
      for (int l : c.serving[k]) m.per_ap(k, l) += d.w(k, l).squaredNorm();
  }
  m.per_ap /= draws;
  m.collective = m.per_ap.rowwise().sum();
  return m;
}

RMat distributed_power(const RMat& betas, const ClusterMap& c, double rho_max) {
  RMat rho = RMat::Zero(c.K, c.L);
  for (int l = 0; l < c.L; ++l) {
    double denom = 0.0;
    for (int i : c.served[l]) denom += std::sqrt(betas(i, l));
    if (denom <= 0.0) {
      // all served UEs have zero gain: split evenly
      for (int i : c.served[l]) rho(i, l) = rho_max / c.served[l].size();
      continue;
    }
    for (int i : c.served[l]) rho(i, l) = rho_max * std::sqrt(betas(i, l)) / denom;
  }
  return rho;
}

RVec largest_ap_fraction(const DirectionMoments& m, const ClusterMap& c) {
  RVec varpi = RVec::Zero(c.K);
  for (int k = 0; k < c.K; ++k) {
    if (c.serving[k].empty() || !(m.collective(k) > 0)) continue;
    double best = 0.0;
    for (int l : c.serving[k]) best = std::max(best, m.per_ap(k, l));
    varpi(k) = best / m.collective(k);
  }
  return varpi;
}

RVec fractional_power(const RMat& betas, const ClusterMap& c, const RVec& varpi, double rho_max,
                      double varsigma, double kappa, double zeta) {
  RVec x = RVec::Zero(c.K);
  for (int k = 0; k < c.K; ++k) {
    double s = 0.0;
    for (int l : c.serving[k]) s += std::pow(betas(k, l), varsigma);
    x(k) = std::pow(s, kappa);
  }
  RVec load = RVec::Zero(c.L);  // sum_{i in K_l} x_i varpi_i^{1 - zeta}
  for (int l = 0; l < c.L; ++l)
    for (int i : c.served[l])
      if (varpi(i) > 0) load(l) += x(i) * std::pow(varpi(i), 1.0 - zeta);
  RVec rho = RVec::Zero(c.K);
  for (int k = 0; k < c.K; ++k) {
    if (c.serving[k].empty() || !(varpi(k) > 0)) continue;
    double denom = 0.0;
    for (int l : c.serving[k]) denom = std::max(denom, load(l));
    rho(k) = rho_max * x(k) * std::pow(varpi(k), -zeta) / denom;
  }
  return rho;
}

PrecoderSet normalize(const Directions& dirs, const PowerAllocation& power, const DirectionMoments& m,
                      const ClusterMap& c) {
  PrecoderSet out;
  out.mode = power.mode;
  const int N = c.K > 0 && c.L > 0 ? static_cast<int>(dirs.w(0, 0).size()) : 0;
  out.w = Grid<CVec>(c.K, c.L, CVec::Zero(N));
  out.rho = RMat::Zero(c.K, c.L);
  auto reject = [](int k, int l) {
    throw Error("normalize: zero-direction precoder for UE " + std::to_string(k) +
                (l >= 0 ? ", AP " + std::to_string(l) : std::string()) + " with positive power");
  };
  for (int k = 0; k < c.K; ++k) {
    if (power.mode == PowerMode::distributed) {
      for (int l : c.serving[k]) {
        const double rho = power.per_ap(k, l);
        if (rho == 0.0) continue;
        if (!(m.per_ap(k, l) > 0)) reject(k, l);
        out.w(k, l) = std::sqrt(rho / m.per_ap(k, l)) * dirs.w(k, l);
        out.rho(k, l) = rho;
      }
    } else {
      const double rho = power.per_ue(k);
      if (rho == 0.0 || c.serving[k].empty()) continue;
      if (!(m.collective(k) > 0)) reject(k, -1);
      const double f = std::sqrt(rho / m.collective(k));
      for (int l : c.serving[k]) {
        out.w(k, l) = f * dirs.w(k, l);
        out.rho(k, l) = rho * m.per_ap(k, l) / m.collective(k);
      }
    }
  }
  return out;
}

}  // namespace cfdstbc
