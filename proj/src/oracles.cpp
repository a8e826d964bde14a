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

#include "cfdstbc/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cfdstbc/analysis.hpp"
#include "cfdstbc/coherent.hpp"
#include "cfdstbc/dstbc.hpp"

namespace cfdstbc {

namespace {

CMat random_codeword(const OrthogonalCode& code, const PskConstellation& con, RandomStream& rng,
                     std::vector<int>* sym = nullptr) {
  std::vector<cplx> s(code.symbols());
  if (sym) sym->resize(code.symbols());
  for (int n = 0; n < code.symbols(); ++n) {
    const int m = rng.index(con.order());
    if (sym) (*sym)[n] = m;
    s[n] = con.point(m);
  }
  return code.build(s);
}

CMat random_unitary_state(const OrthogonalCode& code, const PskConstellation& con, RandomStream& rng) {
  CMat C = CMat::Identity(code.size(), code.size());
  const int steps = rng.index(20);
  for (int t = 0; t < steps; ++t) C = C * random_codeword(code, con, rng);
  return C;
}

OracleCheck make(const std::string& name, double value, double expected, double tol, bool relative,
                 const std::string& detail = {}) {
  OracleCheck c;
  c.name = name;
  c.value = value;
  c.expected = expected;
  c.tolerance = tol;
  const double err = relative ? std::abs(value / expected - 1.0) : std::abs(value - expected);
  c.passed = err <= tol;
  c.detail = detail;
  return c;
}

}  // namespace

SyntheticLink synthetic_link(int K, int L, int L_k, double scale, RandomStream& rng) {
  std::vector<std::vector<int>> serving(K);
  std::vector<int> aps(L);
  for (int k = 0; k < K; ++k) {
    std::iota(aps.begin(), aps.end(), 0);
    for (int n = 0; n < L_k; ++n) std::swap(aps[n], aps[n + rng.index(L - n)]);
    serving[k].assign(aps.begin(), aps.begin() + L_k);
  }
  SyntheticLink s{EffectiveChannels(K, L), clusters_from_lists(L, L_k, serving)};
  for (int i = 0; i < K; ++i)
    for (int l : serving[i])
      for (int k = 0; k < K; ++k) s.g.g_tilde(i, k, l) = (i == k ? 1.0 : scale) * rng.complex_normal();
  return s;
}

PhaseCancellation phase_cancellation_check(int L_k, int draws, RandomStream& rng) {
  const OrthogonalCode code(L_k);
  const AmicableDesignSet d = amicable_designs(L_k);
  const PskConstellation con(8);
  PhaseCancellation out;
  int correct = 0;
  for (int n = 0; n < draws; ++n) {
    SyntheticLink link = synthetic_link(1, L_k, L_k, 0.0, rng);
    PhaseState ph = sample_phases(kPi, L_k, rng);
    const EffectiveChannels rotated = link.g.rotated(ph);
    const CMat Cprev = random_unitary_state(code, con, rng);
    std::vector<int> sym;
    const CMat X = random_codeword(code, con, rng, &sym);
    const CMat Cnow = Cprev * X;
    auto blocks = [&](const EffectiveChannels& g) {
      auto prev = transmit_block(g, {Cprev}, link.clusters, {});
      auto now = transmit_block(g, {Cnow}, link.clusters, {});
      return std::make_pair(now[0], prev[0]);
    };
    const auto [y0, p0] = blocks(link.g);
    const auto [y1, p1] = blocks(rotated);
    const Detection det = differential_detect(y1, p1, d, con);
    if (det.symbols == sym) ++correct;
    const CMat Y0 = y0.adjoint() * p0;
    const CMat Y1 = y1.adjoint() * p1;
    for (const auto& A : d.A) {
      const double ref = (A.cast<cplx>() * Y0).trace().real();
      const double got = (A.cast<cplx>() * Y1).trace().real();
      const double scale = std::max(std::abs(ref), Y0.norm());
      out.max_relative_deviation = std::max(out.max_relative_deviation, std::abs(got - ref) / scale);
    }
  }
  out.draws = draws;
  out.detection_rate = static_cast<double>(correct) / draws;
  return out;
}

DecouplingAgreement decoupling_vs_joint_ml(int L_k, int instances, double sigma2, RandomStream& rng) {
  const OrthogonalCode code(L_k);
  const AmicableDesignSet d = amicable_designs(L_k);
  const PskConstellation con(8);
  DecouplingAgreement out;
  const double sd = std::sqrt(sigma2);
  int total = 1;
  for (int n = 0; n < code.symbols(); ++n) total *= con.order();
  std::vector<cplx> s(code.symbols());
  for (int n = 0; n < instances; ++n) {
    SyntheticLink link = synthetic_link(1, L_k, L_k, 0.0, rng);
    const EffectiveChannels g = link.g.rotated(sample_phases(kPi, L_k, rng));
    const CMat Cprev = random_unitary_state(code, con, rng);
    const CMat Cnow = Cprev * random_codeword(code, con, rng);
    std::vector<CRow> n0(1, CRow(L_k)), n1(1, CRow(L_k));
    for (int p = 0; p < L_k; ++p) {
      n0[0](p) = sd * rng.complex_normal();
      n1[0](p) = sd * rng.complex_normal();
    }
    const CRow yp = transmit_block(g, {Cprev}, link.clusters, n0)[0];
    const CRow yt = transmit_block(g, {Cnow}, link.clusters, n1)[0];
    // uniqueness of the joint maximizer
    const CMat Y = yt.adjoint() * yp;
    double best = -1e300, second = -1e300;
    for (int idx = 0; idx < total; ++idx) {
      const auto sym = codeword_symbols(idx, code.symbols(), con.order());
      for (int m = 0; m < code.symbols(); ++m) s[m] = con.point(sym[m]);
      const double metric = (code.build(s) * Y).trace().real();
      if (metric > best) {
        second = best;
        best = metric;
      } else if (metric > second) {
        second = metric;
      }
    }
    ++out.instances;
    if (best - second <= 1e-12 * std::max(1.0, std::abs(best))) continue;
    ++out.unique;
    const int joint = joint_ml_oracle(yt, yp, code, con);
    const Detection det = differential_detect(yt, yp, d, con);
    if (codeword_symbols(joint, code.symbols(), con.order()) == det.symbols) ++out.agree;
  }
  return out;
}

std::vector<OracleCheck> run_oracles(std::uint64_t seed) {
  std::vector<OracleCheck> out;
  RandomStream root(seed);

  for (int Lk : {2, 4}) {
    RandomStream r = root.substream(10 + Lk);
    const auto pc = phase_cancellation_check(Lk, 1000, r);
    out.push_back(make("phase cancellation, L_k=" + std::to_string(Lk) + ": detection rate", pc.detection_rate, 1.0,
                       0.0, false));
    out.push_back(make("phase cancellation, L_k=" + std::to_string(Lk) + ": max rel. deviation",
                       pc.max_relative_deviation, 0.0, 1e-10, false));
  }
  for (int Lk : {2, 4}) {
    RandomStream r = root.substream(20 + Lk);
    const auto dj = decoupling_vs_joint_ml(Lk, Lk == 2 ? 500 : 200, 0.3, r);
    out.push_back(make("decoupled == joint ML, L_k=" + std::to_string(Lk), dj.agree, dj.unique, 0.0, false,
                       std::to_string(dj.unique) + " unique of " + std::to_string(dj.instances)));
  }
  {
    RandomStream r = root.substream(30);
    const auto t2 = trace_expectations(2, 100000, 95, 8, r);
    out.push_back(make("trace expectation same row, L_k=2 (1/n_s)", t2.same_row, 0.5, 0.03, true));
    out.push_back(make("trace expectation other row, L_k=2 (1/L_k)", t2.other_row, 0.5, 0.03, true));
    out.push_back(make("cross-row constant, L_k=2", t2.cross, 0.0, 0.01, false));
    RandomStream r4 = root.substream(31);
    const auto t4 = trace_expectations(4, 100000, 47, 8, r4);
    out.push_back(make("trace expectation same row, L_k=4 (1/n_s)", t4.same_row, 1.0 / 3.0, 0.03, true));
    out.push_back(make("trace expectation other row, L_k=4 ((1-1/n_s)/(L_k-1))", t4.other_row, 2.0 / 9.0, 0.03, true,
                       "row sums of |W|^2 equal 1"));
    out.push_back(make("cross-row constant, L_k=4", t4.cross, ltilde(4), 0.01, false));
  }
  {
    RandomStream r = root.substream(40);
    int idx = 0;
    for (int K : {1, 2, 4}) {
      for (int rep = 0; rep < 2; ++rep, ++idx) {
        const SyntheticLink link = synthetic_link(K, 6, 2, 0.3, r);
        const double s2 = 0.02;
        const double closed = sinr_dstbc_closed(dstbc_sinr_inputs(link.g, 0, 2, s2)).value;
        const auto emp = empirical_dstbc_sinr(link.g, link.clusters, 0, 0, s2, 20000, 95, 8, r);
        out.push_back(make("closed-form vs empirical DSTBC SINR, K=" + std::to_string(K) + " #" + std::to_string(rep),
                           closed / emp.ratio, 1.0, 0.10, false));
      }
    }
  }
  return out;
}

}  // namespace cfdstbc
