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

#include "cfdstbc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cfdstbc {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

double wrap_coord(double v, double side) {
  v = std::fmod(v, side);
  if (v < 0) v += side;
  if (v >= side) v = 0.0;
  return v;
}

double min_pair_distance(const std::vector<Point2>& p, const DeploymentArea& area) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      best = std::min(best, wrapped_distance(p[i], p[j], area));
  return best;
}

}  // namespace

Point2 wrapped_displacement(Point2 p, Point2 q, const DeploymentArea& area) {
  double dx = q.x - p.x;
  double dy = q.y - p.y;
  if (area.wrap) {
    const double s = area.side_length;
    dx -= s * std::round(dx / s);
    dy -= s * std::round(dy / s);
  }
  return {dx, dy};
}

double wrapped_distance(Point2 p, Point2 q, const DeploymentArea& area) {
  const Point2 d = wrapped_displacement(p, q, area);
  return std::hypot(d.x, d.y);
}

double hcpp_min_distance(const DeploymentArea& area, int L) {
  return std::sqrt(area.side_length * area.side_length / L);
}

std::vector<Point2> place_uniform(const DeploymentArea& area, int count, RandomStream& rng) {
  std::vector<Point2> out(count);
  for (auto& p : out) {
    p.x = rng.uniform(0.0, area.side_length);
    p.y = rng.uniform(0.0, area.side_length);
  }
  return out;
}

std::vector<Point2> place_aps_hcpp(const DeploymentArea& area, int L, RandomStream& rng,
                                   int max_rounds) {
  if (L < 1) throw Error("place_aps_hcpp: L >= 1 required");
  if (!(area.side_length > 0)) throw Error("place_aps_hcpp: side length must be positive");
  std::vector<Point2> p = place_uniform(area, L, rng);
  if (L == 1) return p;

  const double dmin = hcpp_min_distance(area, L);
  const double reach = 1.02 * dmin;
  const double jitter = 1e-3 * dmin;
  const int restart_period = std::max(1000, max_rounds / 10);
  const double s = area.side_length;
  std::vector<Point2> push(L);

  for (int round = 0; round < max_rounds; ++round) {
    if (round > 0 && round % restart_period == 0) p = place_uniform(area, L, rng);
    bool ok = true;
    std::fill(push.begin(), push.end(), Point2{});
    for (int i = 0; i < L; ++i) {
      for (int j = i + 1; j < L; ++j) {
        const Point2 d = wrapped_displacement(p[j], p[i], area);  // from j to i
        const double dist = std::hypot(d.x, d.y);
        if (dist < dmin) ok = false;
        if (dist >= reach) continue;
        double ux, uy;
        if (dist == 0.0) {
          const double phi = rng.uniform(0.0, 2.0 * kPi);
          ux = std::cos(phi);
          uy = std::sin(phi);
        } else {
          ux = d.x / dist;
          uy = d.y / dist;
        }
        const double half = 0.5 * (reach - dist);
        push[i].x += half * ux;
        push[i].y += half * uy;
        push[j].x -= half * ux;
        push[j].y -= half * uy;
      }
    }
    if (ok) return p;
    for (int i = 0; i < L; ++i) {
      double x = p[i].x + push[i].x + jitter * rng.normal();
      double y = p[i].y + push[i].y + jitter * rng.normal();
      if (area.wrap) {
        x = wrap_coord(x, s);
        y = wrap_coord(y, s);
      } else {
        x = std::clamp(x, 0.0, s);
        y = std::clamp(y, 0.0, s);
      }
      p[i] = {x, y};
    }
  }
  if (min_pair_distance(p, area) >= dmin) return p;
  throw Error("place_aps_hcpp: hard-core placement did not converge within " + std::to_string(max_rounds) +
              " rounds (L = " + std::to_string(L) + ", d_min = " + std::to_string(dmin) +
              " m); use ap_layout = uniform for this L");
}

double path_loss_umi_db(double d3d, double fc_hz, double h_bs, double h_ut) {
  if (!(d3d > 0)) throw Error("path_loss_umi_db: 3-D distance must be positive");
  const double fc_ghz = fc_hz / 1e9;
  const double dh = h_bs - h_ut;
  const double d2d = std::sqrt(std::max(0.0, d3d * d3d - dh * dh));
  // LOS with breakpoint at the effective antenna heights (1 m environment height).
  const double d_bp = 4.0 * (h_bs - 1.0) * (h_ut - 1.0) * fc_hz / kSpeedOfLight;
  double los;
  if (d2d <= d_bp)
    los = 32.4 + 21.0 * std::log10(d3d) + 20.0 * std::log10(fc_ghz);
  else
    los = 32.4 + 40.0 * std::log10(d3d) + 20.0 * std::log10(fc_ghz) -
          9.5 * std::log10(d_bp * d_bp + dh * dh);
  const double nlos = 35.3 * std::log10(d3d) + 22.4 + 21.3 * std::log10(fc_ghz) - 0.3 * (h_ut - 1.5);
  return std::max(los, nlos);
}

double large_scale_gain(double d3d, const SystemConfig& cfg, double shadow_db) {
  if (!(d3d > 0)) throw Error("large_scale_gain: 3-D distance must be positive");
  const double pl = path_loss_umi_db(d3d, cfg.fc_hz, cfg.ap_height_m, cfg.ue_height_m);
  return std::pow(10.0, (-pl + shadow_db) / 10.0);
}

RMat sample_correlated_shadowing(const std::vector<Point2>& ues, int L, double sigma_db,
                                 double decorrelation_m, const DeploymentArea& area,
                                 RandomStream& rng) {
  const int K = static_cast<int>(ues.size());
  RMat out = RMat::Zero(K, L);
  if (sigma_db == 0.0 || K == 0) return out;
  RMat corr(K, K);
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j)
      corr(i, j) = std::exp(-wrapped_distance(ues[i], ues[j], area) / decorrelation_m);
  // Symmetric square root; tolerant of co-located UEs (singular correlation).
  Eigen::SelfAdjointEigenSolver<RMat> es(corr);
  RVec ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  RMat root = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
  RVec z(K);
  for (int l = 0; l < L; ++l) {
    for (int i = 0; i < K; ++i) z(i) = rng.normal();
    out.col(l) = sigma_db * (root * z);
  }
  return out;
}

void gauss_hermite(int n, RVec& nodes, RVec& weights) {
  RMat J = RMat::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    J(i, i - 1) = std::sqrt(i / 2.0);
    J(i - 1, i) = J(i, i - 1);
  }
  Eigen::SelfAdjointEigenSolver<RMat> es(J);
  nodes = es.eigenvalues();
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    weights(i) = std::sqrt(kPi) * v0 * v0;
  }
}

CMat spatial_correlation_matrix(double azimuth, double asd_rad, double beta, int N,
                                double antenna_spacing) {
  if (N < 1) throw Error("spatial_correlation_matrix: N >= 1 required");
  if (!(beta >= 0)) throw Error("spatial_correlation_matrix: beta >= 0 required");
  static const int kNodes = 64;
  static RVec x, w;
  static const bool init = (gauss_hermite(kNodes, x, w), true);
  (void)init;

  std::vector<cplx> lag(N);
  lag[0] = 1.0;
  for (int d = 1; d < N; ++d) {
    const double k = 2.0 * kPi * antenna_spacing * d;
    if (asd_rad == 0.0) {
      lag[d] = std::polar(1.0, k * std::sin(azimuth));
      continue;
    }
    cplx acc = 0.0;
    for (int i = 0; i < kNodes; ++i)
      acc += w(i) * std::polar(1.0, k * std::sin(azimuth + std::sqrt(2.0) * asd_rad * x(i)));
    lag[d] = acc / std::sqrt(kPi);
  }
  CMat R(N, N);
  for (int m = 0; m < N; ++m) {
    R(m, m) = beta;
    for (int n = 0; n < m; ++n) {
      R(m, n) = beta * lag[m - n];
      R(n, m) = std::conj(R(m, n));
    }
  }
  return R;
}

NetworkSnapshot make_snapshot(const SystemConfig& cfg, std::vector<Point2> aps,
                              std::vector<Point2> ues, const RMat& shadow_db) {
  NetworkSnapshot s;
  s.area = {cfg.area_side_m, cfg.wrap};
  s.ap_positions = std::move(aps);
  s.ue_positions = std::move(ues);
  s.ap_height = cfg.ap_height_m;
  s.ue_height = cfg.ue_height_m;
  const int K = s.K(), L = s.L();
  s.covariances = Grid<CMat>(K, L);
  s.betas = RMat::Zero(K, L);
  const double dh = cfg.ap_height_m - cfg.ue_height_m;
  const double asd = cfg.asd_deg * kPi / 180.0;
  for (int k = 0; k < K; ++k) {
    for (int l = 0; l < L; ++l) {
      const Point2 d = wrapped_displacement(s.ap_positions[l], s.ue_positions[k], s.area);
      const double d3d = std::sqrt(d.x * d.x + d.y * d.y + dh * dh);
      const double beta = large_scale_gain(d3d, cfg, shadow_db(k, l));
      const double az = std::atan2(d.y, d.x);
      s.covariances(k, l) = spatial_correlation_matrix(az, asd, beta, cfg.N, cfg.antenna_spacing);
      s.betas(k, l) = beta;
    }
  }
  return s;
}

NetworkSnapshot generate_snapshot(const SystemConfig& cfg, RandomStream& rng) {
  const DeploymentArea area{cfg.area_side_m, cfg.wrap};
  RandomStream ap_rng = rng.substream(1);
  RandomStream ue_rng = rng.substream(2);
  RandomStream sh_rng = rng.substream(3);
  std::vector<Point2> aps = cfg.ap_layout == ApLayout::hcpp
                                ? place_aps_hcpp(area, cfg.L, ap_rng, cfg.hcpp_max_rounds)
                                : place_uniform(area, cfg.L, ap_rng);
  std::vector<Point2> ues = place_uniform(area, cfg.K, ue_rng);
  RMat shadow = sample_correlated_shadowing(ues, cfg.L, cfg.shadow_std_db, cfg.shadow_decorrelation_m,
                                            area, sh_rng);
  return make_snapshot(cfg, std::move(aps), std::move(ues), shadow);
}

}  // namespace cfdstbc
