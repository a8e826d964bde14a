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

#include "cfdstbc/coherent.hpp"

#include <bit>
#include <cmath>
#include <iostream>
#include <limits>

namespace cfdstbc {

PskConstellation::PskConstellation(int order) : order_(order), bits_(0) {
  if (order < 2 || (order & (order - 1))) throw Error("PskConstellation: order must be a power of two >= 2");
  while ((1 << bits_) < order) ++bits_;
  points_.resize(order);
  for (int m = 0; m < order; ++m) points_[m] = std::polar(1.0, 2.0 * kPi * m / order);
}

int PskConstellation::bit_errors(int sent, int detected) const {
  return std::popcount(static_cast<unsigned>(gray(sent) ^ gray(detected)));
}

double nu_tilde(double alpha) {
  if (alpha == 0.0) return 1.0;
  const double s = std::sin(alpha) / alpha;
  return s * s;
}

std::vector<cplx> transmit_symbol(const EffectiveChannels& g, const std::vector<cplx>& s,
                                  const std::vector<cplx>& noise) {
  const int K = g.K(), L = g.L();
  std::vector<cplx> y(K, 0.0);
  for (int k = 0; k < K; ++k) {
    cplx acc = noise.empty() ? cplx(0.0) : noise[k];
    for (int i = 0; i < K; ++i) {
      cplx c = 0.0;
      for (int l = 0; l < L; ++l) c += g.g_tilde(i, k, l);
      acc += c * s[i];
    }
    y[k] = acc;
  }
  return y;
}

int detect_psk(cplx y, const PskConstellation& c) {
  if (y == cplx(0.0)) return 0;
  const double ang = std::arg(y);
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int m = 0; m < c.order(); ++m) {
    double d = ang - 2.0 * kPi * m / c.order();
    d = std::remainder(d, 2.0 * kPi);
    if (d == -kPi) d = kPi;
    const double dd = d * d;
    if (dd < best_d) {
      best_d = dd;
      best = m;
    }
  }
  return best;
}

UpperBoundTerms upper_bound_terms(const EffectiveChannels& g) {
  const int K = g.K(), L = g.L();
  UpperBoundTerms t{RVec::Zero(K), RVec::Zero(K), RVec::Zero(K), RVec::Zero(K)};
  for (int k = 0; k < K; ++k) {
    for (int i = 0; i < K; ++i) {
      cplx sum = 0.0;
      double pow = 0.0;
      for (int l = 0; l < L; ++l) {
        const cplx v = g.g_tilde(i, k, l);
        sum += v;
        pow += std::norm(v);
      }
      if (i == k) {
        t.own_coherent(k) = std::norm(sum);
        t.own_noncoherent(k) = pow;
      } else {
        t.int_coherent(k) += std::norm(sum);
        t.int_noncoherent(k) += pow;
      }
    }
  }
  return t;
}

RVec sinr_upper(const UpperBoundTerms& t, double alpha, double sigma2) {
  const double nu = nu_tilde(alpha);
  const RVec num = nu * t.own_coherent + (1.0 - nu) * t.own_noncoherent;
  const RVec den = (nu * t.int_coherent + (1.0 - nu) * t.int_noncoherent).array() + sigma2;
  RVec out(num.size());
  for (int k = 0; k < num.size(); ++k) out(k) = den(k) > 0 ? num(k) / den(k) : (num(k) > 0 ? 1e9 : 0.0);
  return out;
}

RVec sinr_upper(const EffectiveChannels& g, double alpha, double sigma2) {
  return sinr_upper(upper_bound_terms(g), alpha, sigma2);
}

RVec sinr_instantaneous(const EffectiveChannels& g, double sigma2) {
  UpperBoundTerms t = upper_bound_terms(g);
  RVec out(g.K());
  for (int k = 0; k < g.K(); ++k) {
    const double den = t.int_coherent(k) + sigma2;
    out(k) = den > 0 ? t.own_coherent(k) / den : (t.own_coherent(k) > 0 ? 1e9 : 0.0);
  }
  return out;
}

HardeningAccumulator::HardeningAccumulator(int K, int L)
    : K_(K), L_(L), sum_gain_(CMat::Zero(K, L)), sum_coh_(RMat::Zero(K, K)), sum_noncoh_(RMat::Zero(K, K)) {}

void HardeningAccumulator::add(const EffectiveChannels& g) {
  for (int i = 0; i < K_; ++i)
    for (int k = 0; k < K_; ++k) {
      cplx sum = 0.0;
      double pow = 0.0;
      for (int l = 0; l < L_; ++l) {
        const cplx v = g.g_tilde(i, k, l);
        sum += v;
        pow += std::norm(v);
      }
      sum_coh_(i, k) += std::norm(sum);
      sum_noncoh_(i, k) += pow;
    }
  for (int k = 0; k < K_; ++k)
    for (int l = 0; l < L_; ++l) sum_gain_(k, l) += g.g_ef(k, l);
  ++n_;
}

HardeningMoments HardeningAccumulator::moments() const {
  const double inv = n_ > 0 ? 1.0 / n_ : 0.0;
  return {sum_gain_ * inv, sum_coh_ * inv, sum_noncoh_ * inv};
}

HardeningResult sinr_hardening(const HardeningMoments& m, double alpha, double sigma2) {
  const double nu = nu_tilde(alpha);
  const int K = static_cast<int>(m.mean_gain.rows());
  HardeningResult r{RVec::Zero(K), {}};
  for (int k = 0; k < K; ++k) {
    const double mean_sq = std::norm(m.mean_gain.row(k).sum());
    double den = sigma2 - nu * mean_sq;
    for (int i = 0; i < K; ++i) den += nu * m.coherent(i, k) + (1.0 - nu) * m.noncoherent(i, k);
    const double floor = sigma2 * 1e-6;
    if (den < floor) {
      den = floor;
      r.clamped.push_back(k);
    }
    r.sinr(k) = nu * mean_sq / den;
  }
  if (!r.clamped.empty())
    std::cerr << "warning: hardening-bound denominator clamped for " << r.clamped.size() << " UE(s)\n";
  return r;
}

HardeningMoments mr_closed_form_moments(const EstimationStatistics& st, const ClusterMap& c, const RMat& rho) {
  const int K = c.K, L = c.L;
  const double eta = st.params.eta_mw;
  const double tp = st.tau_p;
  const Grid<CMat>& R = *st.covariances;
  HardeningMoments m{CMat::Zero(K, L), RMat::Zero(K, K), RMat::Zero(K, K)};
  for (int k = 0; k < K; ++k)
    for (int l : c.serving[k]) m.mean_gain(k, l) = std::sqrt(eta * tp * rho(k, l) * st.theta(k, l).trace().real());
  for (int i = 0; i < K; ++i) {
    for (int k = 0; k < K; ++k) {
      const bool copilot = st.pilots.shares_pilot(i, k);
      double var = 0.0;
      cplx mean_sum = 0.0;
      double mean_pow = 0.0;
      for (int l : c.serving[i]) {
        const double trth = st.theta(i, l).trace().real();
        if (!(trth > 0)) continue;
        var += rho(i, l) * (st.theta(i, l) * R(k, l)).trace().real() / trth;
        if (copilot) {
          const int t = st.pilots.pilot[i];
          const cplx tr_cross = (R(i, l) * st.psi_inv(t, l) * R(k, l)).trace();
          const cplx mean = std::sqrt(eta * tp * rho(i, l) / trth) * tr_cross;
          mean_sum += mean;
          mean_pow += std::norm(mean);
        }
      }
      m.coherent(i, k) = var + std::norm(mean_sum);
      m.noncoherent(i, k) = var + mean_pow;
    }
  }
  return m;
}

double se_from_sinr(double sinr, int tau_d, int tau_c) {
  if (!(sinr >= 0)) throw Error("se_from_sinr: sinr >= 0 required");
  return static_cast<double>(tau_d) / tau_c * std::log2(1.0 + sinr);
}

}  // namespace cfdstbc
