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

#include "cfdstbc/channel.hpp"

#include <cmath>

#include "cfdstbc/clustering.hpp"
#include "cfdstbc/precoding.hpp"

namespace cfdstbc {

CMat psd_sqrt(const CMat& R) {
  const int n = static_cast<int>(R.rows());
  if (n == 0) return R;
  const double tr = std::abs(R.trace().real());
  if (tr == 0.0 && R.cwiseAbs().maxCoeff() == 0.0) return CMat::Zero(n, n);
  Eigen::SelfAdjointEigenSolver<CMat> es(R);
  RVec ev = es.eigenvalues();
  if (ev.minCoeff() < -1e-10 * tr) throw Error("psd_sqrt: covariance is not positive semidefinite");
  ev = ev.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

ChannelSampler::ChannelSampler(const NetworkSnapshot& s) : roots_(s.K(), s.L()) {
  for (int k = 0; k < s.K(); ++k)
    for (int l = 0; l < s.L(); ++l) roots_(k, l) = psd_sqrt(s.covariances(k, l));
}

ChannelRealization ChannelSampler::sample(RandomStream& rng, int block_index) const {
  ChannelRealization r;
  r.block_index = block_index;
  r.h = Grid<CVec>(roots_.rows(), roots_.cols());
  for (int k = 0; k < roots_.rows(); ++k)
    for (int l = 0; l < roots_.cols(); ++l) {
      const CMat& root = roots_(k, l);
      r.h(k, l) = root * rng.complex_normal_vector(static_cast<int>(root.rows()));
    }
  return r;
}

ChannelRealization sample_channels(const NetworkSnapshot& snapshot, RandomStream& rng) {
  return ChannelSampler(snapshot).sample(rng);
}

PhaseState sample_phases(double alpha, int L, RandomStream& rng) {
  if (!(alpha >= 0.0 && alpha <= kPi + 1e-12)) throw Error("sample_phases: 0 <= alpha <= pi required");
  PhaseState p;
  p.theta.resize(L);
  for (auto& t : p.theta) t = alpha * rng.uniform(-1.0, 1.0);
  return p;
}

PhaseState zero_phases(int L) { return PhaseState{std::vector<double>(L, 0.0)}; }

EffectiveChannels EffectiveChannels::rotated(const PhaseState& phases) const {
  EffectiveChannels out(*this);
  std::vector<cplx> rot(L_);
  for (int l = 0; l < L_; ++l) rot[l] = std::polar(1.0, phases.theta[l]);
  for (std::size_t idx = 0; idx < out.data_.size(); ++idx) out.data_[idx] *= rot[idx % L_];
  return out;
}

EffectiveChannels effective_channels(const ChannelRealization& realization, const PhaseState& phases,
                                     const PrecoderSet& precoders, const ClusterMap& clusters) {
  const int K = realization.h.rows();
  const int L = realization.h.cols();
  EffectiveChannels g(K, L);
  for (int i = 0; i < K; ++i) {
    for (int l : clusters.serving[i]) {
      const cplx rot = std::polar(1.0, phases.theta[l]);
      const CVec& w = precoders.w(i, l);
      for (int k = 0; k < K; ++k) g.g_tilde(i, k, l) = rot * realization.h(k, l).dot(w);
    }
  }
  return g;
}

}  // namespace cfdstbc
