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

#include "cfdstbc/analysis.hpp"
#include "cfdstbc/oracles.hpp"

using namespace cfdstbc;

TEST(Analysis, SnrExample) {
  DstbcSinrInputs in;
  in.own = RVec::Constant(1, 1.0);
  in.interference = RMat::Zero(0, 1);
  in.n_s = 2;
  in.sigma2 = 0.1;
  EXPECT_NEAR(snr_dstbc(in), 2.5, 1e-12);
  in.sigma2 = 1e300;
  EXPECT_LT(snr_dstbc(in), 1e-299);
  in.sigma2 = 0.1;
  in.own *= 2.0;
  EXPECT_NEAR(snr_dstbc(in), 5.0, 1e-12);
}

TEST(Analysis, NoInterfererClosedFormEqualsSnr) {
  // (sum|g|^2)^2 / n_s over 2 sigma2 sum|g|^2 simplifies to sum|g|^2 / (2 n_s sigma2).
  RandomStream r(1);
  for (int Lk : {2, 4}) {
    for (int t = 0; t < 50; ++t) {
      EffectiveChannels g(1, 6);
      for (int l = 0; l < 6; ++l) g.g_tilde(0, 0, l) = r.complex_normal();
      const auto in = dstbc_sinr_inputs(g, 0, Lk, 0.05 + r.uniform());
      const double own = in.own.sum();
      EXPECT_NEAR(sinr_dstbc_closed(in).value, (own * own / in.n_s) / (2 * in.sigma2 * own), 1e-12 * own);
      EXPECT_NEAR(sinr_dstbc_closed(in).value / snr_dstbc(in), 1.0, 1e-12);
    }
  }
}

TEST(Analysis, NoiselessNoInterferenceIsCapped) {
  EffectiveChannels g(1, 2);
  g.g_tilde(0, 0, 0) = 1.0;
  const auto v = sinr_dstbc_closed(dstbc_sinr_inputs(g, 0, 2, 0.0));
  EXPECT_TRUE(v.capped);
  EXPECT_EQ(v.value, kSinrCap);
}

TEST(Analysis, ClosedFormHandInstance) {
  // Two UEs, L_k = 2, explicit evaluation of the interference expression.
  DstbcSinrInputs in;
  in.own = (RVec(3) << 1.0, 0.5, 0.0).finished();
  in.interference = (RMat(1, 3) << 0.2, 0.0, 0.1).finished();
  in.n_s = 2;
  in.L_k = 2;
  in.sigma2 = 0.05;
  in.ltilde = 0.0;
  const double own = 1.5, a = 0.3, fourth = 0.04 + 0.01;
  const double num = own * own / 2;
  const double den = 2 * (0.05 * own + 0.05 * a + own * a / 2) + fourth / 2 + (a * a - fourth) * (0.5 + 0.0);
  EXPECT_NEAR(sinr_dstbc_closed(in).value, num / den, 1e-12);
}

TEST(Analysis, LtildeConstants) {
  EXPECT_EQ(ltilde(2), 0.0);
  EXPECT_EQ(ltilde(4), 0.112);
  EXPECT_EQ(ltilde(8), 0.125);
  EXPECT_THROW(ltilde(3), Error);
}

TEST(Analysis, RatePrefactors) {
  EXPECT_NEAR(se_from_ber(0.0, Scheme::conventional, 200, 190, 2, 8), 2.85, 1e-12);
  EXPECT_NEAR(se_prefactor(Scheme::dstbc, 200, 190, 2), 0.94, 1e-12);
  EXPECT_NEAR(se_from_ber(0.0, Scheme::dstbc, 200, 190, 2, 8), 2.82, 1e-12);
  EXPECT_NEAR(se_prefactor(Scheme::dstbc, 200, 190, 4), 0.69, 1e-12);
  EXPECT_NEAR(se_from_ber(0.0, Scheme::dstbc, 200, 190, 4, 8), 2.07, 1e-12);
  EXPECT_NEAR(2.07 / 2.85, 0.7263, 5e-5);
  EXPECT_NEAR(se_from_ber(0.5, Scheme::conventional, 200, 190, 2, 8), 1.425, 1e-12);
  EXPECT_THROW(se_from_ber(1.5, Scheme::conventional, 200, 190, 2, 8), Error);
}

TEST(Analysis, TraceExpectationsAlamouti) {
  RandomStream r(2);
  const auto t = trace_expectations(2, 20000, 95, 8, r);
  EXPECT_NEAR(t.same_row, 0.5, 0.015);
  EXPECT_NEAR(t.other_row, 0.5, 0.015);
  EXPECT_NEAR(t.cross, 0.0, 0.01);
}

TEST(Analysis, TraceExpectationsRateThreeQuarter) {
  RandomStream r(3);
  const auto t = trace_expectations(4, 20000, 47, 8, r);
  EXPECT_NEAR(t.same_row, 1.0 / 3.0, 0.01);
  EXPECT_NEAR(t.other_row, 2.0 / 9.0, 0.01);  // rows of a unitary W sum to one
  EXPECT_NEAR(t.cross, 1.0 / 9.0, 0.01);
}

TEST(Analysis, ClosedFormTracksEmpiricalRatio) {
  RandomStream r(4);
  const auto link = synthetic_link(2, 6, 2, 0.3, r);
  const double s2 = 0.02;
  const double closed = sinr_dstbc_closed(dstbc_sinr_inputs(link.g, 0, 2, s2)).value;
  const auto emp = empirical_dstbc_sinr(link.g, link.clusters, 0, 0, s2, 30000, 95, 8, r);
  EXPECT_NEAR(emp.ratio / closed, 1.0, 0.1);
}
