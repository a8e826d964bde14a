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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cfdstbc/analysis.hpp"
#include "cfdstbc/coherent.hpp"
#include "cfdstbc/config.hpp"
#include "cfdstbc/dstbc.hpp"
#include "cfdstbc/experiment.hpp"
#include "cfdstbc/geometry.hpp"
#include "cfdstbc/oracles.hpp"

namespace py = pybind11;
using namespace cfdstbc;

namespace {

std::string as_setting(const py::handle& v) {
  if (py::isinstance<py::bool_>(v)) return v.cast<bool>() ? "true" : "false";
  if (py::isinstance<py::list>(v) || py::isinstance<py::tuple>(v)) {
    std::string out;
    for (const auto& x : v) out += (out.empty() ? "" : ",") + as_setting(x);
    return out;
  }
  if (py::isinstance<py::float_>(v)) return py::repr(v).cast<std::string>();
  return py::str(v).cast<std::string>();
}

SystemConfig config_from(const py::dict& settings) {
  SystemConfig cfg;
  for (const auto& [k, v] : settings) apply_setting(cfg, py::str(k).cast<std::string>(), as_setting(v));
  validate(cfg);
  return cfg;
}

// g[i, k, l] = g_tilde(i, k, l)
EffectiveChannels channels_from(const py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>& g) {
  if (g.ndim() != 3 || g.shape(0) != g.shape(1)) throw Error("expected an array of shape (K, K, L)");
  const int K = static_cast<int>(g.shape(0)), L = static_cast<int>(g.shape(2));
  EffectiveChannels out(K, L);
  auto a = g.unchecked<3>();
  for (int i = 0; i < K; ++i)
    for (int k = 0; k < K; ++k)
      for (int l = 0; l < L; ++l) out.g_tilde(i, k, l) = a(i, k, l);
  return out;
}

py::dict record_dict(const MetricsRecord& r) {
  py::dict d;
  d["run_id"] = r.run_id;
  d["setup_seed"] = r.setup_seed;
  d["realization_seed"] = r.realization_seed;
  d["scheme"] = to_string(r.scheme);
  d["precoder"] = to_string(r.precoder);
  d["alpha_rad"] = r.alpha;
  d["L"] = r.L;
  d["K"] = r.K;
  d["N"] = r.N;
  d["L_k"] = r.L_k;
  d["ue_id"] = r.ue_id;
  d["metric"] = r.metric;
  d["value"] = r.value;
  return d;
}

}  // namespace

PYBIND11_MODULE(_cfdstbc, m) {
  m.doc() = "Cell-free downlink simulator core";
  py::register_exception<Error>(m, "CfdstbcError", PyExc_ValueError);

  m.def("nu_tilde", &nu_tilde, py::arg("alpha"));
  m.def("path_loss_db", &path_loss_umi_db, py::arg("d3d_m"), py::arg("fc_hz") = 3.5e9, py::arg("h_ap_m") = 11.65,
        py::arg("h_ue_m") = 1.65);
  m.def("parse_angle", &parse_angle, py::arg("text"));

  m.def(
      "build_code_matrix",
      [](const std::vector<std::complex<double>>& s, int L_k) { return CMat(build_code_matrix(s, L_k)); },
      py::arg("symbols"), py::arg("L_k"));
  m.def(
      "amicable_designs",
      [](int L_k) {
        const auto d = amicable_designs(L_k);
        return py::make_tuple(d.A, d.B);
      },
      py::arg("L_k"));
  m.def(
      "differential_detect",
      [](const CRow& y_t, const CRow& y_prev, int M_o) {
        if (y_t.size() != y_prev.size()) throw Error("blocks must have equal length");
        return differential_detect(y_t, y_prev, amicable_designs(static_cast<int>(y_t.size())), PskConstellation(M_o))
            .symbols;
      },
      py::arg("y_t"), py::arg("y_prev"), py::arg("M_o") = 8);
  m.def(
      "detect_psk", [](std::complex<double> y, int M_o) { return detect_psk(y, PskConstellation(M_o)); },
      py::arg("y"), py::arg("M_o") = 8);

  m.def(
      "sinr_upper",
      [](const py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>& g, double alpha,
         double sigma2) { return RVec(sinr_upper(channels_from(g), alpha, sigma2)); },
      py::arg("g"), py::arg("alpha"), py::arg("sigma2"), "Phase-averaged SINR per UE; g has shape (K, K, L).");
  m.def(
      "dstbc_sinr",
      [](const py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>& g, int k, int L_k,
         double sigma2) {
        const auto in = dstbc_sinr_inputs(channels_from(g), k, L_k, sigma2);
        const auto v = sinr_dstbc_closed(in);
        return py::make_tuple(snr_dstbc(in), v.value, v.capped);
      },
      py::arg("g"), py::arg("k"), py::arg("L_k"), py::arg("sigma2"), "Returns (snr, sinr, capped).");

  m.def(
      "se_from_ber",
      [](double ber, const std::string& scheme, int tau_c, int tau_d, int L_k, int M_o) {
        return se_from_ber(ber, parse_scheme(scheme), tau_c, tau_d, L_k, M_o);
      },
      py::arg("ber"), py::arg("scheme") = "conventional", py::arg("tau_c") = 200, py::arg("tau_d") = 190,
      py::arg("L_k") = 2, py::arg("M_o") = 8);
  m.def("se_from_sinr", &se_from_sinr, py::arg("sinr"), py::arg("tau_d") = 190, py::arg("tau_c") = 200);

  m.def("csv_header", &csv_header);
  m.def("format_value", &format_value, py::arg("value"));

  m.def(
      "config",
      [](const py::dict& settings) { return describe(config_from(settings)); }, py::arg("settings") = py::dict(),
      "Validated configuration (defaults plus overrides) as a key -> value dict.");
  m.def(
      "parse_config",
      [](const std::string& text) { return describe(parse_config_text(text)); }, py::arg("text"));

  m.def(
      "run_experiment",
      [](const py::dict& settings) {
        const SystemConfig cfg = config_from(settings);
        ExperimentResult res;
        {
          py::gil_scoped_release release;
          res = run_experiment(cfg);
        }
        std::ostringstream os;
        write_csv(os, res.records);
        py::list recs;
        for (const auto& r : res.records) recs.append(record_dict(r));
        py::dict out;
        out["records"] = recs;
        out["csv"] = os.str();
        out["completed_setups"] = res.completed_setups;
        out["degraded_ues"] = res.degraded_ues;
        out["error"] = res.error;
        return out;
      },
      py::arg("settings") = py::dict(),
      "Runs an experiment; settings use the config-file keys. Returns records, canonical CSV text and status.");

  m.def(
      "run_oracles",
      [](std::uint64_t seed) {
        py::list out;
        for (const auto& c : run_oracles(seed)) {
          py::dict d;
          d["name"] = c.name;
          d["value"] = c.value;
          d["expected"] = c.expected;
          d["tolerance"] = c.tolerance;
          d["passed"] = c.passed;
          out.append(d);
        }
        return out;
      },
      py::arg("seed") = 42);
}
