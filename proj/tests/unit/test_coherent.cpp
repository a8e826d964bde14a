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

#include "cfdstbc/coherent.hpp"
#include "cfdstbc/geometry.hpp"

using namespace cfdstbc;

namespace {

EffectiveChannels random_link(int K, int L, RandomStream& r) {
  EffectiveChannels g(K, L);
  for (int i = 0; i < K; ++i)
    for (int k = 0; k < K; ++k)
      for (int l = 0; l < L; ++l) g.g_tilde(i, k, l) = (i == k ? 1.0 : 0.3) * r.complex_normal();
  return g;
}

}  // namespace

TEST(Coherent, NuTilde) {
  EXPECT_DOUBLE_EQ(nu_tilde(0.0), 1.0);
  EXPECT_LT(nu_tilde(kPi), 1e-30);
  EXPECT_NEAR(nu_tilde(kPi / 8), 0.94964, 5e-6);
  const double x = 0.39270;
  EXPECT_NEAR(nu_tilde(x), std::pow(std::sin(x) / x, 2), 1e-12);
}

TEST(Coherent, TransmitSymbol) {
  EffectiveChannels one(1, 1);
  one.g_tilde(0, 0, 0) = 1.0;
  const cplx s = std::polar(1.0, 0.7);
  EXPECT_EQ(transmit_symbol(one, {s}, {})[0], s);
  EffectiveChannels cancel(1, 2);
  cancel.g_tilde(0, 0, 0) = cplx(0.4, 0.1);
  cancel.g_tilde(0, 0, 1) = -cplx(0.4, 0.1);
  EXPECT_EQ(transmit_symbol(cancel, {s}, {})[0], cplx(0.0));
  // K = 2, L = 2 by hand
  EffectiveChannels g(2, 2);
  g.g_tilde(0, 0, 0) = 1.0;
  g.g_tilde(0, 0, 1) = cplx(0, 1);
  g.g_tilde(1, 0, 0) = 0.5;
  g.g_tilde(1, 0, 1) = 0.0;
  g.g_tilde(0, 1, 0) = 0.0;
  g.g_tilde(0, 1, 1) = cplx(0.2, 0);
  g.g_tilde(1, 1, 0) = 2.0;
  g.g_tilde(1, 1, 1) = -1.0;
  const cplx s0 = 1.0, s1 = cplx(0, 1);
  const auto y = transmit_symbol(g, {s0, s1}, {cplx(0.01, 0), cplx(0, -0.01)});
  EXPECT_NEAR(std::abs(y[0] - (cplx(1, 1) * s0 + 0.5 * s1 + 0.01)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(y[1] - (0.2 * s0 + 1.0 * s1 + cplx(0, -0.01))), 0.0, 1e-15);
}

TEST(Coherent, PskDetection) {
  const PskConstellation c(8);
  EXPECT_EQ(detect_psk(std::polar(1.0, kPi / 4), c), 1);
  for (double r : {1e-6, 0.3, 1e6}) EXPECT_EQ(detect_psk(std::polar(r, kPi / 4), c), 1);
  EXPECT_EQ(detect_psk(std::polar(1.0, kPi / 8 + 1e-9), c), 1);
  EXPECT_EQ(detect_psk(std::polar(1.0, kPi / 8 - 1e-9), c), 0);
  EXPECT_EQ(detect_psk(std::polar(1.0, -1e-3), c), 0);
  EXPECT_EQ(detect_psk(std::polar(1.0, -kPi / 4), c), 7);
  EXPECT_EQ(detect_psk(cplx(0.0), c), 0);
}

TEST(Coherent, GrayLabelsAdjacentDifferInOneBit) {
  const PskConstellation c(8);
  EXPECT_EQ(c.bits_per_symbol(), 3);
  for (int m = 0; m < 8; ++m) {
    EXPECT_EQ(c.bit_errors(m, (m + 1) % 8), 1);
    EXPECT_EQ(c.bit_errors(m, m), 0);
  }
  EXPECT_EQ(c.bit_errors(0, 4), 2);  // 000 vs 110
  EXPECT_THROW(PskConstellation(6), Error);
}

TEST(Coherent, UpperBoundCollapses) {
  RandomStream r(1);
  const auto g = random_link(3, 5, r);
  const double s2 = 0.1;
  const RVec coh = sinr_upper(g, 0.0, s2);
  const RVec inst = sinr_instantaneous(g, s2);
  for (int k = 0; k < 3; ++k) EXPECT_DOUBLE_EQ(coh(k), inst(k));
  const RVec non = sinr_upper(g, kPi, s2);
  for (int k = 0; k < 3; ++k) {
    double num = 0, den = s2;
    for (int l = 0; l < 5; ++l) num += std::norm(g.g_tilde(k, k, l));
    for (int i = 0; i < 3; ++i)
      if (i != k)
        for (int l = 0; l < 5; ++l) den += std::norm(g.g_tilde(i, k, l));
    EXPECT_NEAR(non(k), num / den, 1e-12 * num / den);
  }
}

TEST(Coherent, UpperBoundEqualsPhaseAverage) {
  RandomStream r(2);
  const auto g = random_link(2, 4, r);
  const double alpha = kPi / 3, s2 = 0.2;
  const int n = 200000;
  RVec num = RVec::Zero(2), den = RVec::Zero(2);
  for (int d = 0; d < n; ++d) {
    const auto rot = g.rotated(sample_phases(alpha, 4, r));
    const auto t = upper_bound_terms(rot);
    num += t.own_coherent;
    den += t.int_coherent;
  }
  const RVec closed = sinr_upper(g, alpha, s2);
  for (int k = 0; k < 2; ++k) EXPECT_NEAR(closed(k), (num(k) / n) / (den(k) / n + s2), 0.01 * closed(k));
}

TEST(Coherent, HardeningEdgeCases) {
  HardeningMoments m{CMat::Constant(1, 2, cplx(0.5, 0)), RMat::Constant(1, 1, 1.2), RMat::Constant(1, 1, 0.7)};
  EXPECT_LT(sinr_hardening(m, kPi, 0.1).sinr(0), 1e-30);  // nu = sinc^2(pi) = 0 up to rounding
  // deterministic gains: coherent moment equals |sum mean|^2, variance terms vanish
  HardeningMoments det{CMat::Constant(1, 2, cplx(0.5, 0)), RMat::Constant(1, 1, 1.0), RMat::Constant(1, 1, 0.5)};
  const auto res = sinr_hardening(det, 0.0, 0.1);
  EXPECT_NEAR(res.sinr(0), 1.0 / 0.1, 1e-12);
  EXPECT_TRUE(res.clamped.empty());
  HardeningMoments bad{CMat::Constant(1, 2, cplx(0.5, 0)), RMat::Constant(1, 1, 0.5), RMat::Constant(1, 1, 0.5)};
  const auto clamped = sinr_hardening(bad, 0.0, 0.1);
  ASSERT_EQ(clamped.clamped.size(), 1u);
  EXPECT_NEAR(clamped.sinr(0), 1.0 / (0.1 * 1e-6), 1e-3);
}

TEST(Coherent, HardeningNonincreasingInAlpha) {
  RandomStream r(3);
  HardeningAccumulator acc(3, 4);
  for (int d = 0; d < 500; ++d) {
    auto g = random_link(3, 4, r);
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 4; ++l) g.g_tilde(k, k, l) += 1.0;  // nonzero mean gain
    acc.add(g);
  }
  const auto m = acc.moments();
  RVec prev = sinr_hardening(m, 0.0, 0.1).sinr;
  for (double a : {kPi / 8, kPi / 2, kPi}) {
    const RVec cur = sinr_hardening(m, a, 0.1).sinr;
    for (int k = 0; k < 3; ++k) EXPECT_LE(cur(k), prev(k) * (1 + 1e-12));
    prev = cur;
  }
}

TEST(Coherent, SeFromSinr) {
  EXPECT_DOUBLE_EQ(se_from_sinr(0.0, 190, 200), 0.0);
  EXPECT_DOUBLE_EQ(se_from_sinr(1.0, 190, 200), 0.95);
  EXPECT_DOUBLE_EQ(se_from_sinr(3.0, 190, 200), 1.9);
  EXPECT_THROW(se_from_sinr(-1.0, 190, 200), Error);
}

TEST(Coherent, MrClosedFormMatchesMonteCarlo) {
  SystemConfig cfg;
  cfg.K = 3;
  cfg.L = 2;
  cfg.N = 2;
  cfg.ap_layout = ApLayout::uniform;
  RandomStream g(4);
  const auto s = generate_snapshot(cfg, g);
  const PilotBook pilots{2, {0, 0, 1}};  // UEs 0 and 1 share a pilot
  const TrainingParams tp{100.0, cfg.sigma2(), false};
  auto st = std::make_shared<const EstimationStatistics>(estimation_statistics(s, pilots, tp));
  const auto c = clusters_from_lists(2, 2, {{0, 1}, {0, 1}, {0, 1}});
  const RMat rho = distributed_power(s.betas, c, 200.0);
  const auto closed = mr_closed_form_moments(*st, c, rho);
  const auto mom = mr_moments(*st, c);
  const PowerAllocation p{PowerMode::distributed, rho, {}};
  const ChannelSampler sampler(s);
  HardeningAccumulator acc(3, 2);
  RandomStream r(5);
  for (int d = 0; d < 40000; ++d) {
    const auto real = sampler.sample(r);
    const auto y = received_pilot(real, zero_phases(2), pilots, tp, 2, r);
    const auto w = normalize(mr_direction(mmse_estimate(y, st), c), p, mom, c);
    acc.add(effective_channels(real, zero_phases(2), w, c));
  }
  const auto emp = acc.moments();
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) {
      EXPECT_NEAR(emp.coherent(i, k) / closed.coherent(i, k), 1.0, 0.05) << i << "," << k;
      EXPECT_NEAR(emp.noncoherent(i, k) / closed.noncoherent(i, k), 1.0, 0.05) << i << "," << k;
    }
  for (int k = 0; k < 3; ++k)
    for (int l = 0; l < 2; ++l)
      EXPECT_NEAR(std::abs(emp.mean_gain(k, l) - closed.mean_gain(k, l)) / std::abs(closed.mean_gain(k, l)), 0.0,
                  0.02);
}
