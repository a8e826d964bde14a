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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cfdstbc/types.hpp"

namespace cfdstbc {

enum class Precoder { mr, lpmmse, pmmse };
enum class Scheme { conventional, dstbc };
enum class PilotPhaseMode { off, on };
enum class ApLayout { hcpp, uniform };
enum class MomentSource { empirical, closed_form };

std::string to_string(Precoder p);
std::string to_string(Scheme s);
Precoder parse_precoder(const std::string& s);
Scheme parse_scheme(const std::string& s);

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct SystemConfig {
  // network
  int L = 40;
  int N = 4;
  int K = 20;
  int L_k = 8;
  int K_max = 10;
  double area_side_m = 500.0;
  bool wrap = true;
  ApLayout ap_layout = ApLayout::hcpp;
  int hcpp_max_rounds = 10000;

  // propagation
  double fc_hz = 3.5e9;
  double ap_height_m = 11.65;
  double ue_height_m = 1.65;
  double shadow_std_db = 4.0;
  double shadow_decorrelation_m = 9.0;
  double asd_deg = 15.0;
  double antenna_spacing = 0.5;  // wavelengths

  // frame
  int tau_c = 200;
  int tau_d = 190;
  int tau_p = 10;

  // powers and noise
  double rho_max_mw = 200.0;
  double p_mw = 100.0;
  double bandwidth_hz = 20e6;
  double noise_figure_db = 8.0;
  std::optional<double> sigma2_mw;

  // fractional power allocation
  double frac_varsigma = 0.2;
  double frac_kappa = 0.5;
  double frac_zeta = -0.5;

  // transmission
  int M_o = 8;
  std::vector<double> alphas{0.0};
  Precoder precoder = Precoder::mr;
  std::vector<Scheme> schemes{Scheme::conventional};
  PilotPhaseMode pilot_phase = PilotPhaseMode::off;
  MomentSource mr_moments = MomentSource::empirical;
  int reorth_period = 64;

  // Monte Carlo
  std::uint64_t seed = 1;
  int setups = 200;
  int realizations = 100;
  int normalization_draws = 2000;
  int workers = 1;
  std::string run_id;

  // Noise power in mW: the override when present, otherwise thermal noise.
  double sigma2() const;
  bool has_scheme(Scheme s) const;
};

// Throws ConfigError naming the violated invariant.
void validate(const SystemConfig& cfg);

// Applies one key = value assignment; unknown keys and malformed values throw.
void apply_setting(SystemConfig& cfg, const std::string& key, const std::string& value);

// Parses "key = value" lines ('#' comments). The result is validated.
SystemConfig parse_config_text(const std::string& text, SystemConfig base = {});
SystemConfig parse_config_file(const std::string& path, SystemConfig base = {});

// Accepts plain radians or expressions like "pi", "pi/8", "3*pi/4", "0.25pi".
double parse_angle(const std::string& s);

// key -> value echo of every setting, used for manifests.
std::map<std::string, std::string> describe(const SystemConfig& cfg);

}  // namespace cfdstbc
