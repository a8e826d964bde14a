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

#include "cfdstbc/analysis.hpp"

#include <cmath>
#include <string>

namespace cfdstbc {

double ltilde(int L_k) {
  switch (L_k) {
    case 2: return 0.0;
    case 4: return 0.112;
    case 8: return 1.0 / 8.0;
    default: throw Error("ltilde: no constant defined for L_k = " + std::to_string(L_k));
  }
}

DstbcSinrInputs dstbc_sinr_inputs(const EffectiveChannels& g, int k, int L_k, double sigma2) {
  DstbcSinrInputs in;
  const int K = g.K(), L = g.L();
  in.own = RVec::Zero(L);
  in.interference = RMat::Zero(K - 1, L);
  for (int l = 0; l < L; ++l) in.own(l) = std::norm(g.g_ef(k, l));
  int row = 0;
  for (int i = 0; i < K; ++i) {
    if (i == k) continue;
    for (int l = 0; l < L; ++l) in.interference(row, l) = std::norm(g.g_tilde(i, k, l));
    ++row;
  }
  in.L_k = L_k;
  in.n_s = OrthogonalCode(L_k).symbols();
  in.sigma2 = sigma2;
  in.ltilde = ltilde(L_k);
  return in;
}

double snr_dstbc(const DstbcSinrInputs& in) { return in.own.sum() / (2.0 * in.n_s * in.sigma2); }

SinrValue sinr_dstbc_closed(const DstbcSinrInputs& in) {
  const double lk = in.L_k;
  const double own = in.own.sum();
  const double num = own * own / in.n_s;
  double noise_terms = in.sigma2 * own;
  double cross = 0.0;
  double mli44 = 0.0;
  const int I = static_cast<int>(in.interference.rows());
  RVec sums(I);
  for (int i = 0; i < I; ++i) {
    const auto a = in.interference.row(i);
    sums(i) = a.sum();
    noise_terms += in.sigma2 * sums(i);
    cross += own * sums(i) / lk;
    const double fourth = a.array().square().sum();
    mli44 += fourth / in.n_s + (sums(i) * sums(i) - fourth) * (1.0 / lk + in.ltilde);
  }
  for (int i = 0; i < I; ++i)
    for (int v = 0; v < I; ++v)
      if (v != i) mli44 += sums(i) * sums(v) / lk;
  const double den = 2.0 * (noise_terms + cross) + mli44;
  if (!(den > 0)) return {num > 0 ? kSinrCap : 0.0, num > 0};
  const double s = num / den;
  if (s > kSinrCap) return {kSinrCap, true};
  return {s, false};
}

double se_prefactor(Scheme scheme, int tau_c, int tau_d, int L_k) {
  if (scheme == Scheme::conventional) return static_cast<double>(tau_d) / tau_c;
  const int G = tau_d / L_k;
  const int n_s = OrthogonalCode(L_k).symbols();
  return static_cast<double>((G - 1) * n_s) / tau_c;
}

double se_from_ber(double ber, Scheme scheme, int tau_c, int tau_d, int L_k, int M_o) {
  if (!(ber >= 0.0 && ber <= 1.0)) throw Error("se_from_ber: ber in [0, 1] required");
  return se_prefactor(scheme, tau_c, tau_d, L_k) * std::log2(static_cast<double>(M_o)) * (1.0 - ber);
}

namespace {

CMat random_codeword(const OrthogonalCode& code, const PskConstellation& con, RandomStream& rng) {
  std::vector<cplx> s(code.symbols());
  for (auto& x : s) x = con.point(rng.index(con.order()));
  return code.build(s);
}

}  // namespace

EmpiricalSinr empirical_dstbc_sinr(const EffectiveChannels& g, const ClusterMap& c, int k, int symbol_n,
                                   double sigma2, int block_pairs, int blocks, int M_o, RandomStream& rng) {
  const OrthogonalCode code(c.L_k);
  const AmicableDesignSet d = amicable_designs(c.L_k);
  const PskConstellation con(M_o);
  const CMat A = d.A.at(symbol_n).cast<cplx>();
  const auto q = row_combiners(g, c, k);
  const double ns = std::sqrt(sigma2);
  auto noise = [&]() {
    CRow n(c.L_k);
    for (int p = 0; p < c.L_k; ++p) n(p) = ns * rng.complex_normal();
    return n;
  };

  std::vector<CMat> C(c.K);
  CRow own_prev, y_prev;
  cplx sum1 = 0.0, sum2 = 0.0;
  double sq1 = 0.0, sq2 = 0.0;
  int pairs = 0;
  int t = 0;
  while (pairs < block_pairs) {
    if (t % blocks == 0) {
      for (auto& m : C) m = CMat::Identity(c.L_k, c.L_k);
      own_prev = q[k] * C[k];
      y_prev = own_prev + noise();
      for (int i = 0; i < c.K; ++i)
        if (i != k) y_prev += q[i] * C[i];
      ++t;
      continue;
    }
    for (int i = 0; i < c.K; ++i) C[i] = C[i] * random_codeword(code, con, rng);
    const CRow own = q[k] * C[k];
    CRow y = own + noise();
    for (int i = 0; i < c.K; ++i)
      if (i != k) y += q[i] * C[i];
    const cplx m1 = (A * (own.adjoint() * own_prev)).trace();
    const cplx m = (A * (y.adjoint() * y_prev)).trace();
    const cplx e = m - m1;
    sum1 += m1;
    sq1 += std::norm(m1);
    sum2 += e;
    sq2 += std::norm(e);
    ++pairs;
    own_prev = own;
    y_prev = y;
    ++t;
  }
  EmpiricalSinr r;
  const double n = pairs;
  r.signal = sq1 / n - std::norm(sum1 / n);
  r.impairment = sq2 / n - std::norm(sum2 / n);
  r.ratio = r.impairment > 0 ? r.signal / r.impairment : kSinrCap;
  return r;
}

TraceExpectations trace_expectations(int L_k, int pairs, int blocks, int M_o, RandomStream& rng) {
  const OrthogonalCode code(L_k);
  const AmicableDesignSet d = amicable_designs(L_k);
  const PskConstellation con(M_o);
  std::vector<CMat> A;
  for (const auto& a : d.A) A.push_back(a.cast<cplx>());
  const int ns = code.symbols();
  TraceExpectations out;
  double same = 0.0, other = 0.0, cross = 0.0;
  long long n_same = 0, n_other = 0, n_cross = 0;
  CMat C = CMat::Identity(L_k, L_k);
  int t = 0;
  int done = 0;
  while (done < pairs) {
    if (t % blocks == 0) {
      C = CMat::Identity(L_k, L_k);
      ++t;
      continue;
    }
    const CMat D = C * random_codeword(code, con, rng);
    for (int n = 0; n < ns; ++n) {
      const CMat W = C * A[n] * D.adjoint();  // W(mu, m) = c_mu A_n d_m^H
      for (int mu = 0; mu < L_k; ++mu)
        for (int m = 0; m < L_k; ++m) {
          if (mu == m) {
            same += std::norm(W(mu, m));
            ++n_same;
          } else {
            other += std::norm(W(mu, m));
            ++n_other;
            cross += (W(mu, mu) * std::conj(W(m, m))).real();
            ++n_cross;
          }
        }
    }
    C = D;
    ++done;
    ++t;
  }
  out.same_row = same / n_same;
  out.other_row = n_other ? other / n_other : 0.0;
  out.cross = n_cross ? cross / n_cross : 0.0;
  out.samples = done;
  return out;
}

}  // namespace cfdstbc
