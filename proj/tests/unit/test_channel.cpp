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

#include <gtest/gtest.h>

#include <cmath>

#include "cfdstbc/channel.hpp"
#include "cfdstbc/clustering.hpp"
#include "cfdstbc/precoding.hpp"

using namespace cfdstbc;

namespace {

NetworkSnapshot snapshot_with(const std::vector<CMat>& per_link, int K, int L) {
  NetworkSnapshot s;
  s.ap_positions.resize(L);
  s.ue_positions.resize(K);
  s.covariances = Grid<CMat>(K, L);
  s.betas = RMat::Zero(K, L);
  for (int k = 0; k < K; ++k)
    for (int l = 0; l < L; ++l) {
      s.covariances(k, l) = per_link[(k * L + l) % per_link.size()];
      s.betas(k, l) = s.covariances(k, l).trace().real() / s.covariances(k, l).rows();
    }
  return s;
}

CMat empirical_cov(const NetworkSnapshot& s, int draws, std::uint64_t seed) {
  const ChannelSampler sampler(s);
  RandomStream r(seed);
  const int N = s.N();
  CMat acc = CMat::Zero(N, N);
  for (int d = 0; d < draws; ++d) {
    const auto h = sampler.sample(r).h(0, 0);
    acc += h * h.adjoint();
  }
  return acc / draws;
}

}  // namespace

TEST(Channel, ZeroCovarianceGivesZeroChannel) {
  const auto s = snapshot_with({CMat::Zero(3, 3)}, 1, 1);
  RandomStream r(1);
  EXPECT_TRUE(sample_channels(s, r).h(0, 0).isZero());
}

TEST(Channel, IdentityCovariancePerEntryVariance) {
  const auto s = snapshot_with({CMat::Identity(4, 4)}, 1, 1);
  const CMat c = empirical_cov(s, 100000, 2);
  for (int n = 0; n < 4; ++n) EXPECT_NEAR(c(n, n).real(), 1.0, 0.02);
}

TEST(Channel, GenericCovarianceReproduced) {
  const CMat R = spatial_correlation_matrix(0.4, 15.0 * kPi / 180.0, 1.0, 4);
  const auto s = snapshot_with({R}, 1, 1);
  const CMat c = empirical_cov(s, 100000, 3);
  EXPECT_LE((c - R).norm(), 0.03 * R.norm());
}

TEST(Channel, PsdSqrtRejectsIndefinite) {
  CMat m = CMat::Identity(2, 2);
  m(1, 1) = -1.0;
  EXPECT_THROW(psd_sqrt(m), Error);
  const CMat R = spatial_correlation_matrix(0.2, 0.0, 1.0, 3);  // rank one
  const CMat S = psd_sqrt(R);
  EXPECT_LT((S * S - R).norm(), 1e-10);
}

TEST(Channel, ZeroSpreadPhasesAreZero) {
  RandomStream r(1);
  for (double t : sample_phases(0.0, 10, r).theta) EXPECT_EQ(t, 0.0);
  EXPECT_THROW(sample_phases(4.0, 3, r), Error);
}

TEST(Channel, PhaseMeanMatchesSinc) {
  for (double alpha : {kPi / 2, kPi}) {
    RandomStream r(17);
    const int n = 1000000;
    const auto p = sample_phases(alpha, n, r);
    cplx m = 0.0;
    for (double t : p.theta) m += std::polar(1.0, t);
    m /= static_cast<double>(n);
    const double expected = std::sin(alpha) / alpha;
    const double stderr_re = std::sqrt((0.5 + std::sin(2 * alpha) / (4 * alpha) - expected * expected) / n);
    EXPECT_NEAR(m.real(), expected, 3 * stderr_re + 1e-12) << alpha;
    if (alpha == kPi / 2) {
      EXPECT_NEAR(expected, 0.63662, 5e-6);
    }
  }
}

TEST(Channel, EffectiveGainMatchedMaskedAndPhaseInvariant) {
  const int K = 2, L = 3;
  const auto s = snapshot_with({CMat::Identity(4, 4)}, K, L);
  RandomStream r(5);
  const auto real = sample_channels(s, r);
  const ClusterMap c = clusters_from_lists(L, 2, {{0, 1}, {1, 2}});
  PrecoderSet p;
  p.w = Grid<CVec>(K, L, CVec::Zero(4));
  p.rho = RMat::Zero(K, L);
  for (int k = 0; k < K; ++k)
    for (int l : c.serving[k]) p.w(k, l) = real.h(k, l);
  const auto g0 = effective_channels(real, zero_phases(L), p, c);
  for (int k = 0; k < K; ++k)
    for (int l = 0; l < L; ++l) {
      if (c.a(k, l)) {
        EXPECT_NEAR(g0.g_ef(k, l).real(), real.h(k, l).squaredNorm(), 1e-12);
        EXPECT_NEAR(g0.g_ef(k, l).imag(), 0.0, 1e-12);
      } else {
        EXPECT_EQ(g0.g_ef(k, l), cplx(0.0));
      }
    }
  const auto ph = sample_phases(kPi, L, r);
  const auto g1 = effective_channels(real, ph, p, c);
  const auto g2 = g0.rotated(ph);
  for (int i = 0; i < K; ++i)
    for (int k = 0; k < K; ++k)
      for (int l = 0; l < L; ++l) {
        EXPECT_NEAR(std::abs(g1.g_tilde(i, k, l)), std::abs(g0.g_tilde(i, k, l)), 1e-12);
        EXPECT_NEAR(std::abs(g1.g_tilde(i, k, l) - g2.g_tilde(i, k, l)), 0.0, 1e-12);
      }
}
