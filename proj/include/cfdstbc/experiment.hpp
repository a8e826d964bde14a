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
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "cfdstbc/config.hpp"

namespace cfdstbc {

struct MetricsRecord {
  std::string run_id;
  std::uint64_t setup_seed = 0;
  std::uint64_t realization_seed = 0;
  Scheme scheme = Scheme::conventional;
  Precoder precoder = Precoder::mr;
  double alpha = 0.0;
  int L = 0, K = 0, N = 0, L_k = 0;
  int ue_id = 0;
  std::string metric;
  double value = 0.0;
  int setup_index = 0;  // ordering key, not written
  int alpha_index = 0;  // ordering key, not written
};

// Metric names per scheme, in output order.
const std::vector<std::string>& metric_names(Scheme scheme);

struct SetupOutcome {
  std::vector<MetricsRecord> records;
  std::vector<int> degraded_ues;
  int clamped_hardening = 0;
};

SetupOutcome run_setup(const SystemConfig& cfg, int setup_index);

struct ExperimentResult {
  std::vector<MetricsRecord> records;
  int completed_setups = 0;
  int degraded_ues = 0;
  int clamped_hardening = 0;
  std::string error;  // empty on success; records then hold completed setups only
};

using ProgressFn = std::function<void(int setup_index, int completed, int total)>;

// Setups run on cfg.workers threads; output order is independent of scheduling.
ExperimentResult run_experiment(const SystemConfig& cfg, const ProgressFn& progress = {});

void canonical_sort(std::vector<MetricsRecord>& records);

// Fixed notation with 9 significant digits, never exponent form.
std::string format_value(double v);
std::string csv_header();
void write_csv(std::ostream& out, const std::vector<MetricsRecord>& records);

std::string default_run_id(const SystemConfig& cfg);

}  // namespace cfdstbc
