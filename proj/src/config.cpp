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

#include "cfdstbc/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace cfdstbc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
  if (pos != v.size()) throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return static_cast<int>(x);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double x = 0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
  if (pos != v.size()) throw ConfigError(key + ": expected a number, got '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "off" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected a boolean, got '" + v + "'");
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

using Setter = std::function<void(SystemConfig&, const std::string&, const std::string&)>;

#define INT_KEY(name) {#name, [](SystemConfig& c, const std::string& k, const std::string& v) { c.name = to_int(k, v); }}
#define DBL_KEY(name) {#name, [](SystemConfig& c, const std::string& k, const std::string& v) { c.name = to_double(k, v); }}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      INT_KEY(L), INT_KEY(N), INT_KEY(K), INT_KEY(L_k), INT_KEY(K_max),
      INT_KEY(hcpp_max_rounds), INT_KEY(tau_c), INT_KEY(tau_d), INT_KEY(tau_p),
      INT_KEY(M_o), INT_KEY(reorth_period), INT_KEY(setups), INT_KEY(realizations),
      INT_KEY(normalization_draws), INT_KEY(workers),
      DBL_KEY(area_side_m), DBL_KEY(fc_hz), DBL_KEY(ap_height_m), DBL_KEY(ue_height_m),
      DBL_KEY(shadow_std_db), DBL_KEY(shadow_decorrelation_m), DBL_KEY(asd_deg),
      DBL_KEY(antenna_spacing), DBL_KEY(rho_max_mw), DBL_KEY(p_mw), DBL_KEY(bandwidth_hz),
      DBL_KEY(noise_figure_db), DBL_KEY(frac_varsigma), DBL_KEY(frac_kappa), DBL_KEY(frac_zeta),
      {"wrap", [](SystemConfig& c, const std::string& k, const std::string& v) { c.wrap = to_bool(k, v); }},
      {"sigma2_mw",
       [](SystemConfig& c, const std::string& k, const std::string& v) {
         if (v == "auto" || v.empty())
           c.sigma2_mw.reset();
         else
           c.sigma2_mw = to_double(k, v);
       }},
      {"ap_layout",
       [](SystemConfig& c, const std::string& k, const std::string& v) {
         if (v == "hcpp") c.ap_layout = ApLayout::hcpp;
         else if (v == "uniform") c.ap_layout = ApLayout::uniform;
         else throw ConfigError(k + ": expected one of {hcpp, uniform}, got '" + v + "'");
       }},
      {"alpha",
       [](SystemConfig& c, const std::string& k, const std::string& v) {
         auto items = split_list(v);
         if (items.empty()) throw ConfigError(k + ": empty list");
         c.alphas.clear();
         for (const auto& a : items) c.alphas.push_back(parse_angle(a));
       }},
      {"precoder", [](SystemConfig& c, const std::string&, const std::string& v) { c.precoder = parse_precoder(v); }},
      {"scheme",
       [](SystemConfig& c, const std::string& k, const std::string& v) {
         auto items = split_list(v);
         if (items.empty()) throw ConfigError(k + ": empty list");
         c.schemes.clear();
         for (const auto& s : items) {
           auto sc = parse_scheme(s);
           if (!c.has_scheme(sc)) c.schemes.push_back(sc);
         }
       }},
      {"pilot_phase_mode",
       [](SystemConfig& c, const std::string& k, const std::string& v) {
         if (v == "off") c.pilot_phase = PilotPhaseMode::off;
         else if (v == "on") c.pilot_phase = PilotPhaseMode::on;
         else throw ConfigError(k + ": expected one of {off, on}, got '" + v + "'");
       }},
      {"mr_moments",
       [](SystemConfig& c, const std::string& k, const std::string& v) {
         if (v == "empirical") c.mr_moments = MomentSource::empirical;
         else if (v == "closed_form") c.mr_moments = MomentSource::closed_form;
         else throw ConfigError(k + ": expected one of {empirical, closed_form}, got '" + v + "'");
       }},
      {"seed",
       [](SystemConfig& c, const std::string& k, const std::string& v) {
         std::size_t pos = 0;
         try {
           c.seed = std::stoull(v, &pos);
         } catch (const std::exception&) {
           pos = std::string::npos;
         }
         if (pos != v.size()) throw ConfigError(k + ": expected an unsigned 64-bit integer, got '" + v + "'");
       }},
      {"run_id", [](SystemConfig& c, const std::string&, const std::string& v) { c.run_id = v; }},
  };
  return table;
}

#undef INT_KEY
#undef DBL_KEY

}  // namespace

std::string to_string(Precoder p) {
  switch (p) {
    case Precoder::mr: return "mr";
    case Precoder::lpmmse: return "lpmmse";
    case Precoder::pmmse: return "pmmse";
  }
  return "?";
}

std::string to_string(Scheme s) {
  return s == Scheme::conventional ? "conventional" : "dstbc";
}

Precoder parse_precoder(const std::string& s) {
  if (s == "mr") return Precoder::mr;
  if (s == "lpmmse") return Precoder::lpmmse;
  if (s == "pmmse") return Precoder::pmmse;
  throw ConfigError("precoder: expected one of {mr, lpmmse, pmmse}, got '" + s + "'");
}

Scheme parse_scheme(const std::string& s) {
  if (s == "conventional") return Scheme::conventional;
  if (s == "dstbc") return Scheme::dstbc;
  throw ConfigError("scheme: expected one of {conventional, dstbc}, got '" + s + "'");
}

double SystemConfig::sigma2() const {
  if (sigma2_mw) return *sigma2_mw;
  const double dbm = -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
  return std::pow(10.0, dbm / 10.0);
}

bool SystemConfig::has_scheme(Scheme s) const {
  return std::find(schemes.begin(), schemes.end(), s) != schemes.end();
}

double parse_angle(const std::string& raw) {
  std::string s;
  for (char ch : raw)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw ConfigError("alpha: empty angle");
  const auto p = s.find("pi");
  if (p == std::string::npos) return to_double("alpha", s);
  // forms: [a][*]pi[/b]
  std::string pre = s.substr(0, p);
  std::string post = s.substr(p + 2);
  if (!pre.empty() && pre.back() == '*') pre.pop_back();
  double num = pre.empty() ? 1.0 : to_double("alpha", pre);
  double den = 1.0;
  if (!post.empty()) {
    if (post[0] != '/') throw ConfigError("alpha: cannot parse angle '" + raw + "'");
    den = to_double("alpha", post.substr(1));
  }
  if (den == 0.0) throw ConfigError("alpha: division by zero in '" + raw + "'");
  return num * kPi / den;
}

void validate(const SystemConfig& c) {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  if (c.L < 1) fail("L >= 1 violated");
  if (c.N < 1) fail("N >= 1 violated");
  if (c.K < 1) fail("K >= 1 violated");
  if (c.L_k < 1) fail("L_k >= 1 violated");
  if (c.L_k > c.L) fail("L_k <= L violated (L_k = " + std::to_string(c.L_k) + ", L = " + std::to_string(c.L) + ")");
  if (c.tau_p < 1) fail("tau_p >= 1 violated");
  if (c.tau_d < 1) fail("tau_d >= 1 violated");
  if (c.tau_p + c.tau_d > c.tau_c)
    fail("tau_p + tau_d <= tau_c violated (" + std::to_string(c.tau_p) + " + " + std::to_string(c.tau_d) +
         " > " + std::to_string(c.tau_c) + ")");
  if (c.K_max < 1 || c.K_max > c.tau_p) fail("1 <= K_max <= tau_p violated");
  if (c.has_scheme(Scheme::dstbc) && c.L_k != 2 && c.L_k != 4)
    fail("L_k must be in the supported DSTBC set {2, 4} when the dstbc scheme is enabled (got " +
         std::to_string(c.L_k) + ")");
  if (c.has_scheme(Scheme::dstbc) && c.tau_d / c.L_k < 2)
    fail("dstbc needs at least two blocks per coherence interval (floor(tau_d / L_k) >= 2)");
  for (double a : c.alphas)
    if (!(a >= 0.0 && a <= kPi + 1e-12)) fail("0 <= alpha <= pi violated (alpha = " + fmt(a) + ")");
  if (c.alphas.empty()) fail("at least one alpha required");
  if (c.schemes.empty()) fail("at least one scheme required");
  if (c.M_o < 2) fail("M_o >= 2 violated");
  if (c.M_o & (c.M_o - 1)) fail("M_o must be a power of two for Gray mapping");
  if (!(c.area_side_m > 0)) fail("area side length > 0 violated");
  if (!(c.rho_max_mw >= 0)) fail("rho_max >= 0 violated");
  if (!(c.p_mw > 0)) fail("pilot power p_k > 0 violated");
  if (!(c.sigma2() > 0)) fail("noise power sigma2 > 0 violated");
  if (!(c.shadow_std_db >= 0)) fail("shadow_std_db >= 0 violated");
  if (!(c.shadow_decorrelation_m > 0)) fail("shadow_decorrelation_m > 0 violated");
  if (!(c.asd_deg >= 0)) fail("asd_deg >= 0 violated");
  if (!(c.fc_hz > 0)) fail("fc_hz > 0 violated");
  if (c.ap_height_m == c.ue_height_m) fail("AP and UE heights must differ (3-D distance > 0)");
  if (c.setups < 1) fail("setups >= 1 violated");
  if (c.realizations < 1) fail("realizations >= 1 violated");
  if (c.normalization_draws < 1) fail("normalization_draws >= 1 violated");
  if (c.workers < 1) fail("workers >= 1 violated");
  if (c.reorth_period < 1) fail("reorth_period >= 1 violated");
  if (c.hcpp_max_rounds < 1) fail("hcpp_max_rounds >= 1 violated");
}

void apply_setting(SystemConfig& cfg, const std::string& key, const std::string& value) {
  const auto& t = setters();
  auto it = t.find(key);
  if (it == t.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(cfg, key, trim(value));
}

SystemConfig parse_config_text(const std::string& text, SystemConfig base) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    try {
      apply_setting(base, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  validate(base);
  return base;
}

SystemConfig parse_config_file(const std::string& path, SystemConfig base) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str(), std::move(base));
}

std::map<std::string, std::string> describe(const SystemConfig& c) {
  std::map<std::string, std::string> m;
  m["L"] = std::to_string(c.L);
  m["N"] = std::to_string(c.N);
  m["K"] = std::to_string(c.K);
  m["L_k"] = std::to_string(c.L_k);
  m["K_max"] = std::to_string(c.K_max);
  m["area_side_m"] = fmt(c.area_side_m);
  m["wrap"] = c.wrap ? "true" : "false";
  m["ap_layout"] = c.ap_layout == ApLayout::hcpp ? "hcpp" : "uniform";
  m["hcpp_max_rounds"] = std::to_string(c.hcpp_max_rounds);
  m["fc_hz"] = fmt(c.fc_hz);
  m["ap_height_m"] = fmt(c.ap_height_m);
  m["ue_height_m"] = fmt(c.ue_height_m);
  m["shadow_std_db"] = fmt(c.shadow_std_db);
  m["shadow_decorrelation_m"] = fmt(c.shadow_decorrelation_m);
  m["asd_deg"] = fmt(c.asd_deg);
  m["antenna_spacing"] = fmt(c.antenna_spacing);
  m["tau_c"] = std::to_string(c.tau_c);
  m["tau_d"] = std::to_string(c.tau_d);
  m["tau_p"] = std::to_string(c.tau_p);
  m["rho_max_mw"] = fmt(c.rho_max_mw);
  m["p_mw"] = fmt(c.p_mw);
  m["bandwidth_hz"] = fmt(c.bandwidth_hz);
  m["noise_figure_db"] = fmt(c.noise_figure_db);
  m["sigma2_mw"] = c.sigma2_mw ? fmt(*c.sigma2_mw) : "auto";
  m["frac_varsigma"] = fmt(c.frac_varsigma);
  m["frac_kappa"] = fmt(c.frac_kappa);
  m["frac_zeta"] = fmt(c.frac_zeta);
  m["M_o"] = std::to_string(c.M_o);
  std::string a;
  for (double x : c.alphas) a += (a.empty() ? "" : ",") + fmt(x);
  m["alpha"] = a;
  m["precoder"] = to_string(c.precoder);
  std::string s;
  for (auto x : c.schemes) s += (s.empty() ? "" : ",") + to_string(x);
  m["scheme"] = s;
  m["pilot_phase_mode"] = c.pilot_phase == PilotPhaseMode::on ? "on" : "off";
  m["mr_moments"] = c.mr_moments == MomentSource::closed_form ? "closed_form" : "empirical";
  m["reorth_period"] = std::to_string(c.reorth_period);
  m["seed"] = std::to_string(c.seed);
  m["setups"] = std::to_string(c.setups);
  m["realizations"] = std::to_string(c.realizations);
  m["normalization_draws"] = std::to_string(c.normalization_draws);
  m["workers"] = std::to_string(c.workers);
  m["run_id"] = c.run_id;
  return m;
}

}  // namespace cfdstbc
