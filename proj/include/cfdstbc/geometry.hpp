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

#pragma once

#include <vector>

#include "cfdstbc/config.hpp"
#include "cfdstbc/rng.hpp"
#include "cfdstbc/types.hpp"

namespace cfdstbc {

struct DeploymentArea {
  double side_length = 500.0;  // meters
  bool wrap = true;
};

// Displacement q - p, taken over the nearest periodic copy of q when wrapping.
Point2 wrapped_displacement(Point2 p, Point2 q, const DeploymentArea& area);
double wrapped_distance(Point2 p, Point2 q, const DeploymentArea& area);

double hcpp_min_distance(const DeploymentArea& area, int L);

// Hard-core placement with d_min = sqrt(area / L). Starts from a uniform
// (Poisson) draw; APs that violate the hard core are moved apart by
// soft-disk relaxation until every pair is at least d_min apart.
std::vector<Point2> place_aps_hcpp(const DeploymentArea& area, int L, RandomStream& rng,
                                   int max_rounds = 10000);
std::vector<Point2> place_uniform(const DeploymentArea& area, int count, RandomStream& rng);

// 3GPP UMi street canyon, NLOS (max with the LOS value), heights in meters.
double path_loss_umi_db(double d3d_m, double fc_hz, double h_bs_m, double h_ut_m);
double large_scale_gain(double d3d_m, const SystemConfig& cfg, double shadow_db);

// K x L shadowing in dB; correlated across UEs, independent across APs.
RMat sample_correlated_shadowing(const std::vector<Point2>& ues, int L, double sigma_db,
                                 double decorrelation_m, const DeploymentArea& area,
                                 RandomStream& rng);

// Gaussian local scattering around the nominal azimuth, ULA.
CMat spatial_correlation_matrix(double azimuth, double asd_rad, double beta, int N,
                                double antenna_spacing = 0.5);

// Gauss-Hermite nodes/weights for the weight exp(-x^2).
void gauss_hermite(int n, RVec& nodes, RVec& weights);

struct NetworkSnapshot {
  DeploymentArea area;
  std::vector<Point2> ap_positions;
  std::vector<Point2> ue_positions;
  double ap_height = 0.0;
  double ue_height = 0.0;
  Grid<CMat> covariances;  // K x L, N x N each
  RMat betas;              // K x L

  int K() const { return static_cast<int>(ue_positions.size()); }
  int L() const { return static_cast<int>(ap_positions.size()); }
  int N() const { return covariances.rows() ? static_cast<int>(covariances(0, 0).rows()) : 0; }
};

NetworkSnapshot generate_snapshot(const SystemConfig& cfg, RandomStream& rng);

// Builds the snapshot for given positions and shadowing (dB, K x L).
NetworkSnapshot make_snapshot(const SystemConfig& cfg, std::vector<Point2> aps,
                              std::vector<Point2> ues, const RMat& shadow_db);

}  // namespace cfdstbc
