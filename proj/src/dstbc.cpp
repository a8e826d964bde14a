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

#include "cfdstbc/dstbc.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace cfdstbc {

namespace {

IMat from_entries(int n, std::initializer_list<std::tuple<int, int, int>> entries) {
  IMat m = IMat::Zero(n, n);
  for (const auto& [r, c, v] : entries) m(r, c) = v;
  return m;
}

int n_symbols(int L_k) {
  if (L_k == 2) return 2;
  if (L_k == 4) return 3;
  throw Error("unsupported L_k = " + std::to_string(L_k) + " (supported: 2, 4)");
}

}  // namespace

OrthogonalCode::OrthogonalCode(int L_k) : L_k_(L_k), n_s_(n_symbols(L_k)) {}

CMat OrthogonalCode::build(const std::vector<cplx>& s) const {
  if (static_cast<int>(s.size()) != n_s_) throw Error("OrthogonalCode: expected " + std::to_string(n_s_) + " symbols");
  CMat X = CMat::Zero(L_k_, L_k_);
  if (L_k_ == 2) {
    X << s[0], std::conj(s[1]),
         s[1], -std::conj(s[0]);
    return X / std::sqrt(2.0);
  }
  const cplx s1 = s[0], s2 = s[1], s3 = s[2];
  X << s1, 0.0, s2, -s3,
       0.0, s1, std::conj(s3), std::conj(s2),
       -std::conj(s2), -s3, std::conj(s1), 0.0,
       std::conj(s3), -s2, 0.0, std::conj(s1);
  return X / std::sqrt(3.0);
}

CMat build_code_matrix(const std::vector<cplx>& symbols, int L_k) { return OrthogonalCode(L_k).build(symbols); }

AmicableDesignSet amicable_designs(int L_k) {
  AmicableDesignSet d;
  if (L_k == 2) {
    d.A = {from_entries(2, {{0, 0, 1}, {1, 1, -1}}), from_entries(2, {{0, 1, 1}, {1, 0, 1}})};
    d.B = {from_entries(2, {{0, 0, 1}, {1, 1, 1}}), from_entries(2, {{0, 1, -1}, {1, 0, 1}})};
    return d;
  }
  if (L_k == 4) {
    // Coefficients of Re(s_n) and j Im(s_n) in the rate-3/4 code.
    d.A = {from_entries(4, {{0, 0, 1}, {1, 1, 1}, {2, 2, 1}, {3, 3, 1}}),
           from_entries(4, {{0, 2, 1}, {1, 3, 1}, {2, 0, -1}, {3, 1, -1}}),
           from_entries(4, {{0, 3, -1}, {1, 2, 1}, {2, 1, -1}, {3, 0, 1}})};
    d.B = {from_entries(4, {{0, 0, 1}, {1, 1, 1}, {2, 2, -1}, {3, 3, -1}}),
           from_entries(4, {{0, 2, 1}, {1, 3, -1}, {2, 0, 1}, {3, 1, -1}}),
           from_entries(4, {{0, 3, -1}, {1, 2, -1}, {2, 1, -1}, {3, 0, -1}})};
    return d;
  }
  throw Error("amicable_designs: unsupported L_k = " + std::to_string(L_k) + " (supported: 2, 4)");
}

bool satisfies_amicable_conditions(const AmicableDesignSet& d) {
  const std::size_t n = d.A.size();
  if (n == 0 || d.B.size() != n) return false;
  const int L = static_cast<int>(d.A[0].rows());
  const IMat I = IMat::Identity(L, L);
  for (std::size_t a = 0; a < n; ++a) {
    if (d.A[a] * d.A[a].transpose() != I) return false;
    if (d.B[a] * d.B[a].transpose() != I) return false;
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b) {
        if (d.A[a] * d.A[b].transpose() != -(d.A[b] * d.A[a].transpose())) return false;
        if (d.B[a] * d.B[b].transpose() != -(d.B[b] * d.B[a].transpose())) return false;
      }
      if (d.A[a] * d.B[b].transpose() != d.B[b] * d.A[a].transpose()) return false;
    }
  }
  return true;
}

InfoMatrixState InfoMatrixState::initial(int L_k) { return {CMat::Identity(L_k, L_k), 0, 0}; }

void differential_encode(InfoMatrixState& s, const CMat& X, int reorth_period) {
  s.C = s.C * X;
  ++s.t;
  if (reorth_period > 0 && ++s.since_reorth >= reorth_period) {
    Eigen::JacobiSVD<CMat> svd(s.C, Eigen::ComputeFullU | Eigen::ComputeFullV);
    s.C = svd.matrixU() * svd.matrixV().adjoint();
    s.since_reorth = 0;
  }
}

std::vector<CRow> row_combiners(const EffectiveChannels& g, const ClusterMap& c, int k) {
  std::vector<CRow> q(c.K, CRow::Zero(c.L_k));
  for (int i = 0; i < c.K; ++i)
    for (int l : c.serving[i]) q[i](c.row_of(l, i)) += g.g_tilde(i, k, l);
  return q;
}

std::vector<CRow> transmit_block(const EffectiveChannels& g, const std::vector<CMat>& C, const ClusterMap& c,
                                 const std::vector<CRow>& noise) {
  std::vector<CRow> y(c.K);
  for (int k = 0; k < c.K; ++k) {
    y[k] = noise.empty() ? CRow::Zero(c.L_k) : noise[k];
    const auto q = row_combiners(g, c, k);
    for (int i = 0; i < c.K; ++i) y[k] += q[i] * C[i];
  }
  return y;
}

Detection differential_detect(const CRow& y_t, const CRow& y_prev, const AmicableDesignSet& d,
                              const PskConstellation& con) {
  const CMat Y = y_t.adjoint() * y_prev;
  Detection out;
  out.symbols.assign(d.A.size(), 0);
  if (Y.cwiseAbs().maxCoeff() == 0.0) {
    out.degenerate = true;
    return out;
  }
  for (std::size_t n = 0; n < d.A.size(); ++n) {
    const double u = (d.A[n].cast<cplx>() * Y).trace().real();
    const double v = -(d.B[n].cast<cplx>() * Y).trace().imag();
    int best = 0;
    double best_m = -std::numeric_limits<double>::infinity();
    for (int m = 0; m < con.order(); ++m) {
      const cplx s = con.point(m);
      const double metric = u * s.real() + v * s.imag();
      if (metric > best_m) {
        best_m = metric;
        best = m;
      }
    }
    out.symbols[n] = best;
  }
  return out;
}

std::vector<int> codeword_symbols(int index, int n_s, int M) {
  std::vector<int> s(n_s);
  for (int n = 0; n < n_s; ++n) {
    s[n] = index % M;
    index /= M;
  }
  return s;
}

int joint_ml_oracle(const CRow& y_t, const CRow& y_prev, const OrthogonalCode& code, const PskConstellation& con) {
  const CMat Y = y_t.adjoint() * y_prev;
  int total = 1;
  for (int n = 0; n < code.symbols(); ++n) total *= con.order();
  int best = 0;
  double best_m = -std::numeric_limits<double>::infinity();
  std::vector<cplx> s(code.symbols());
  for (int idx = 0; idx < total; ++idx) {
    const auto sym = codeword_symbols(idx, code.symbols(), con.order());
    for (int n = 0; n < code.symbols(); ++n) s[n] = con.point(sym[n]);
    const double metric = (code.build(s) * Y).trace().real();
    if (metric > best_m) {
      best_m = metric;
      best = idx;
    }
  }
  return best;
}

}  // namespace cfdstbc
