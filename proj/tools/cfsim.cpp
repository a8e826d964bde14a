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

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cfdstbc/config.hpp"
#include "cfdstbc/experiment.hpp"
#include "cfdstbc/oracles.hpp"

namespace fs = std::filesystem;
using namespace cfdstbc;

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string seed;
  int workers = 0;
  std::string scheme;
  std::string alpha;
  std::string lk;
  std::string precoder;
  int setups = 0;
  int realizations = 0;
  bool force = false;
  std::vector<std::string> set;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "key = value config file");
  cmd->add_option("--out", f.out, "output directory (default: $CFSIM_OUT or ./out)");
  cmd->add_option("--seed", f.seed, "master seed (unsigned 64-bit)");
  cmd->add_option("--workers", f.workers, "worker threads");
  cmd->add_option("--scheme", f.scheme, "comma list of {conventional, dstbc}");
  cmd->add_option("--alpha", f.alpha, "comma list of phase spreads, e.g. 0,pi/8,pi");
  cmd->add_option("--lk", f.lk, "comma list of serving-cluster sizes");
  cmd->add_option("--precoder", f.precoder, "comma list of {mr, lpmmse, pmmse}");
  cmd->add_option("--setups", f.setups, "number of network setups");
  cmd->add_option("--realizations", f.realizations, "channel realizations per setup");
  cmd->add_flag("--force", f.force, "overwrite existing output files");
  cmd->add_option("--set", f.set, "extra key=value overrides (repeatable)");
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

// Flags win over the file. List-valued --lk/--precoder keep their first entry
// here; sweep expands them.
SystemConfig resolve(const Flags& f) {
  SystemConfig cfg;
  if (!f.config.empty()) cfg = parse_config_file(f.config);
  for (const auto& kv : f.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!f.seed.empty()) apply_setting(cfg, "seed", f.seed);
  if (f.workers > 0) cfg.workers = f.workers;
  if (!f.scheme.empty()) apply_setting(cfg, "scheme", f.scheme);
  if (!f.alpha.empty()) apply_setting(cfg, "alpha", f.alpha);
  if (!f.lk.empty()) apply_setting(cfg, "L_k", split(f.lk).at(0));
  if (!f.precoder.empty()) apply_setting(cfg, "precoder", split(f.precoder).at(0));
  if (f.setups > 0) cfg.setups = f.setups;
  if (f.realizations > 0) cfg.realizations = f.realizations;
  return cfg;
}

fs::path output_dir(const Flags& f) {
  if (!f.out.empty()) return f.out;
  if (const char* env = std::getenv("CFSIM_OUT"); env && *env) return env;
  return "out";
}

std::string tag_angle(double a) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << a;
  return os.str();
}

int execute(const SystemConfig& cfg, const fs::path& dir, const std::string& stem, bool force) {
  fs::create_directories(dir);
  const fs::path csv = dir / (stem + ".csv");
  const fs::path manifest = dir / (stem + ".manifest.json");
  if (!force && (fs::exists(csv) || fs::exists(manifest))) {
    std::cerr << "error: " << csv.string() << " exists; pass --force to overwrite\n";
    return 1;
  }
  const auto t0 = std::chrono::steady_clock::now();
  auto progress = [&](int s, int done, int total) {
    const double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << "[" << stem << "] setup " << s << " done (" << done << "/" << total << ", " << std::fixed
              << std::setprecision(1) << el << " s)\n";
  };
  ExperimentResult res = run_experiment(cfg, progress);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  {
    std::ofstream out(csv);
    if (!out) throw Error("cannot write " + csv.string());
    write_csv(out, res.records);
    if (!out) throw Error("write failed: " + csv.string());
  }
  nlohmann::json m;
  m["status"] = res.error.empty() ? "ok" : "failed";
  if (!res.error.empty()) m["error"] = res.error;
  m["config"] = describe(cfg);
  m["seed"] = cfg.seed;
  m["setups_requested"] = cfg.setups;
  m["setups_completed"] = res.completed_setups;
  m["records"] = res.records.size();
  m["degraded_ues"] = res.degraded_ues;
  m["hardening_clamped"] = res.clamped_hardening;
  m["wall_time_s"] = wall;
  m["files"] = {csv.filename().string()};
  std::ofstream(manifest) << m.dump(2) << '\n';
  if (!res.error.empty()) {
    std::cerr << "error: " << res.error << " (partial results: " << res.completed_setups << " setups)\n";
    return 1;
  }
  std::cout << csv.string() << " (" << res.records.size() << " rows, " << std::fixed << std::setprecision(1) << wall
            << " s)\n";
  return 0;
}

std::string stem_for(const SystemConfig& cfg) {
  std::string s = "run_" + to_string(cfg.precoder) + "_lk" + std::to_string(cfg.L_k) + "_seed" + std::to_string(cfg.seed);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cell-free downlink simulator: conventional coherent baseline and DSTBC"};
  app.require_subcommand(1);
  Flags run_f, sweep_f, val_f;
  auto* run = app.add_subcommand("run", "run one experiment and write CSV + manifest");
  add_flags(run, run_f);
  auto* sweep = app.add_subcommand("sweep", "cartesian sweep over --alpha, --lk, --precoder lists");
  add_flags(sweep, sweep_f);
  auto* val = app.add_subcommand("validate", "parse and validate a configuration");
  add_flags(val, val_f);
  auto* orc = app.add_subcommand("oracle", "run the derived-value oracles and print a pass/fail table");
  std::uint64_t oracle_seed = 42;
  orc->add_option("--seed", oracle_seed, "oracle seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*val) {
      const SystemConfig cfg = resolve(val_f);
      validate(cfg);
      std::cout << "config OK\n";
      for (const auto& [k, v] : describe(cfg)) std::cout << "  " << k << " = " << v << '\n';
      return 0;
    }
    if (*run) {
      SystemConfig cfg = resolve(run_f);
      validate(cfg);
      return execute(cfg, output_dir(run_f), stem_for(cfg), run_f.force);
    }
    if (*sweep) {
      const SystemConfig base = resolve(sweep_f);
      std::vector<std::string> alphas = split(sweep_f.alpha);
      std::vector<std::string> lks = split(sweep_f.lk);
      std::vector<std::string> pres = split(sweep_f.precoder);
      if (alphas.empty()) alphas.push_back("");
      if (lks.empty()) lks.push_back(std::to_string(base.L_k));
      if (pres.empty()) pres.push_back(to_string(base.precoder));
      int status = 0;
      for (const auto& p : pres)
        for (const auto& lk : lks)
          for (const auto& a : alphas) {
            SystemConfig cfg = base;
            apply_setting(cfg, "precoder", p);
            apply_setting(cfg, "L_k", lk);
            if (!a.empty()) apply_setting(cfg, "alpha", a);
            validate(cfg);
            std::string stem = "sweep_" + p + "_lk" + lk + "_seed" + std::to_string(cfg.seed);
            if (!a.empty()) stem += "_alpha" + tag_angle(cfg.alphas.front());
            status |= execute(cfg, output_dir(sweep_f), stem, sweep_f.force);
          }
      return status;
    }
    if (*orc) {
      const auto checks = run_oracles(oracle_seed);
      bool ok = true;
      std::cout << std::left << std::setw(64) << "check" << std::setw(14) << "value" << std::setw(14) << "expected"
                << std::setw(10) << "tol" << "result\n";
      for (const auto& c : checks) {
        ok = ok && c.passed;
        std::cout << std::left << std::setw(64) << c.name << std::setw(14) << std::setprecision(6) << c.value
                  << std::setw(14) << c.expected << std::setw(10) << c.tolerance << (c.passed ? "PASS" : "FAIL");
        if (!c.detail.empty()) std::cout << "  (" << c.detail << ")";
        std::cout << '\n';
      }
      std::cout << (ok ? "all oracle checks passed\n" : "oracle checks FAILED\n");
      return ok ? 0 : 1;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
