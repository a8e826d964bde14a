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

#include "cfdstbc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <memory>
#include <mutex>
#include <ostream>
#include <thread>

#include "cfdstbc/analysis.hpp"
#include "cfdstbc/channel.hpp"
#include "cfdstbc/clustering.hpp"
#include "cfdstbc/coherent.hpp"
#include "cfdstbc/dstbc.hpp"
#include "cfdstbc/geometry.hpp"
#include "cfdstbc/precoding.hpp"
#include "cfdstbc/training.hpp"

namespace cfdstbc {

namespace {

enum Purpose : std::uint64_t {
  kGeometry = 1,
  kNormalization = 2,
  kRealizations = 3,
};

enum RealizationPurpose : std::uint64_t {
  kChannel = 1,
  kPhase = 2,
  kPilotNoise = 3,
  kConventional = 4,
  kDstbc = 5,
};

struct SchemeAccumulator {
  std::vector<long long> bit_errors, bits;
  RVec sinr_upper, se_upper, snr_cf, sinr_cf;

  explicit SchemeAccumulator(int K)
      : bit_errors(K, 0), bits(K, 0), sinr_upper(RVec::Zero(K)), se_upper(RVec::Zero(K)),
        snr_cf(RVec::Zero(K)), sinr_cf(RVec::Zero(K)) {}
};

void simulate_conventional(const EffectiveChannels& g, const SystemConfig& cfg, const PskConstellation& con,
                           double sigma2, RandomStream rng, SchemeAccumulator& acc) {
  const int K = g.K(), L = g.L();
  CMat c = CMat::Zero(K, K);  // c(i, k) = sum_l g_tilde(i, k, l)
  for (int i = 0; i < K; ++i)
    for (int k = 0; k < K; ++k)
      for (int l = 0; l < L; ++l) c(i, k) += g.g_tilde(i, k, l);
  const double sd = std::sqrt(sigma2);
  std::vector<int> sym(K);
  for (int p = 0; p < cfg.tau_d; ++p) {
    for (int i = 0; i < K; ++i) sym[i] = rng.index(con.order());
    for (int k = 0; k < K; ++k) {
      cplx y = sd * rng.complex_normal();
      for (int i = 0; i < K; ++i) y += c(i, k) * con.point(sym[i]);
      const int det = detect_psk(y, con);
      acc.bit_errors[k] += con.bit_errors(sym[k], det);
      acc.bits[k] += con.bits_per_symbol();
    }
  }
}

void simulate_dstbc(const EffectiveChannels& g, const ClusterMap& clusters, const SystemConfig& cfg,
                    const PskConstellation& con, const OrthogonalCode& code, const AmicableDesignSet& designs,
                    double sigma2, RandomStream rng, SchemeAccumulator& acc) {
  const int K = g.K();
  const int Lk = code.size();
  const int ns = code.symbols();
  const int G = cfg.tau_d / Lk;
  const double sd = std::sqrt(sigma2);
  std::vector<std::vector<CRow>> q(K);  // q[k][i]
  for (int k = 0; k < K; ++k) q[k] = row_combiners(g, clusters, k);
  std::vector<InfoMatrixState> state(K, InfoMatrixState::initial(Lk));
  auto receive = [&](int k) {
    CRow y(Lk);
    for (int p = 0; p < Lk; ++p) y(p) = sd * rng.complex_normal();
    for (int i = 0; i < K; ++i) y += q[k][i] * state[i].C;
    return y;
  };
  std::vector<CRow> y_prev(K);
  for (int k = 0; k < K; ++k) y_prev[k] = receive(k);  // reference block, C^0 = I
  std::vector<std::vector<int>> sym(K, std::vector<int>(ns));
  std::vector<cplx> s(ns);
  for (int t = 1; t < G; ++t) {
    for (int i = 0; i < K; ++i) {
      for (int n = 0; n < ns; ++n) {
        sym[i][n] = rng.index(con.order());
        s[n] = con.point(sym[i][n]);
      }
      differential_encode(state[i], code.build(s), cfg.reorth_period);
    }
    for (int k = 0; k < K; ++k) {
      CRow y = receive(k);
      const Detection det = differential_detect(y, y_prev[k], designs, con);
      for (int n = 0; n < ns; ++n) {
        acc.bit_errors[k] += con.bit_errors(sym[k][n], det.symbols[n]);
        acc.bits[k] += con.bits_per_symbol();
      }
      y_prev[k] = std::move(y);
    }
  }
}

MetricsRecord base_record(const SystemConfig& cfg, const std::string& run_id, std::uint64_t setup_seed,
                          std::uint64_t realization_seed, int setup_index) {
  MetricsRecord r;
  r.run_id = run_id;
  r.setup_seed = setup_seed;
  r.realization_seed = realization_seed;
  r.precoder = cfg.precoder;
  r.L = cfg.L;
  r.K = cfg.K;
  r.N = cfg.N;
  r.L_k = cfg.L_k;
  r.setup_index = setup_index;
  return r;
}

}  // namespace

const std::vector<std::string>& metric_names(Scheme scheme) {
  static const std::vector<std::string> conv = {"ber",        "se",           "sinr_upper",
                                                "se_upper",   "sinr_hardening", "se_hardening"};
  static const std::vector<std::string> dst = {"ber", "se", "snr_cf", "sinr_cf"};
  return scheme == Scheme::conventional ? conv : dst;
}

std::string default_run_id(const SystemConfig& cfg) {
  return cfg.run_id.empty() ? "run-" + std::to_string(cfg.seed) : cfg.run_id;
}

SetupOutcome run_setup(const SystemConfig& cfg, int setup_index) {
  validate(cfg);
  const int K = cfg.K;
  const double sigma2 = cfg.sigma2();
  const std::uint64_t setup_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(setup_index));
  const std::uint64_t realization_root = derive_seed(setup_seed, kRealizations);
  const std::string run_id = default_run_id(cfg);
  const bool pilot_phase = cfg.pilot_phase == PilotPhaseMode::on;
  const bool want_conv = cfg.has_scheme(Scheme::conventional);
  const bool want_dstbc = cfg.has_scheme(Scheme::dstbc);

  RandomStream geo(derive_seed(setup_seed, kGeometry));
  const NetworkSnapshot snapshot = generate_snapshot(cfg, geo);
  const PilotBook pilots = assign_pilots(snapshot.betas, cfg.tau_p);
  const ClusterMap clusters = build_clusters(snapshot.betas, cfg.L_k, cfg.K_max);
  const TrainingParams tp{cfg.p_mw, sigma2, pilot_phase};
  auto stats = std::make_shared<const EstimationStatistics>(estimation_statistics(snapshot, pilots, tp));

  DirectionMoments moments;
  if (cfg.precoder == Precoder::mr) {
    moments = mr_moments(*stats, clusters);
  } else {
    RandomStream nrng(derive_seed(setup_seed, kNormalization));
    moments = sample_direction_moments(cfg.precoder, stats, clusters, cfg.normalization_draws, nrng);
  }
  PowerAllocation power;
  if (cfg.precoder == Precoder::pmmse) {
    power.mode = PowerMode::centralized;
    power.per_ue = fractional_power(snapshot.betas, clusters, largest_ap_fraction(moments, clusters), cfg.rho_max_mw,
                                    cfg.frac_varsigma, cfg.frac_kappa, cfg.frac_zeta);
  } else {
    power.mode = PowerMode::distributed;
    power.per_ap = distributed_power(snapshot.betas, clusters, cfg.rho_max_mw);
  }

  const ChannelSampler sampler(snapshot);
  const PskConstellation con(cfg.M_o);
  std::unique_ptr<OrthogonalCode> code;
  AmicableDesignSet designs;
  if (want_dstbc) {
    code = std::make_unique<OrthogonalCode>(cfg.L_k);
    designs = amicable_designs(cfg.L_k);
  }

  const int A = static_cast<int>(cfg.alphas.size());
  std::vector<SchemeAccumulator> conv(A, SchemeAccumulator(K)), dst(A, SchemeAccumulator(K));
  std::vector<HardeningAccumulator> hard(pilot_phase ? A : 1, HardeningAccumulator(K, cfg.L));

  for (int r = 0; r < cfg.realizations; ++r) {
    const std::uint64_t rs = derive_seed(realization_root, static_cast<std::uint64_t>(r));
    RandomStream chan_rng(derive_seed(rs, kChannel));
    RandomStream phase_rng(derive_seed(rs, kPhase));
    const ChannelRealization real = sampler.sample(chan_rng, r);
    std::vector<double> u(cfg.L);
    for (auto& x : u) x = phase_rng.uniform(-1.0, 1.0);

    auto precode = [&](const PhaseState& ph) {
      RandomStream pil(derive_seed(rs, kPilotNoise));
      const auto y = received_pilot(real, ph, pilots, tp, cfg.tau_p, pil);
      const ChannelEstimate est = mmse_estimate(y, stats);
      return normalize(compute_directions(cfg.precoder, est, clusters, cfg.p_mw, sigma2), power, moments, clusters);
    };
    const PhaseState zero = zero_phases(cfg.L);
    EffectiveChannels eff0;
    UpperBoundTerms terms;
    std::vector<DstbcSinrInputs> cf_inputs;
    auto refresh = [&](const PrecoderSet& P, HardeningAccumulator& h) {
      eff0 = effective_channels(real, zero, P, clusters);
      h.add(eff0);
      terms = upper_bound_terms(eff0);
      cf_inputs.clear();
      if (want_dstbc)
        for (int k = 0; k < K; ++k) cf_inputs.push_back(dstbc_sinr_inputs(eff0, k, cfg.L_k, sigma2));
    };
    if (!pilot_phase) refresh(precode(zero), hard[0]);

    for (int a = 0; a < A; ++a) {
      const double alpha = cfg.alphas[a];
      PhaseState ph;
      ph.theta.resize(cfg.L);
      for (int l = 0; l < cfg.L; ++l) ph.theta[l] = alpha * u[l];
      if (pilot_phase) refresh(precode(ph), hard[a]);
      const EffectiveChannels eff = eff0.rotated(ph);
      if (want_conv) {
        const RVec s = sinr_upper(terms, alpha, sigma2);
        for (int k = 0; k < K; ++k) {
          conv[a].sinr_upper(k) += s(k);
          conv[a].se_upper(k) += se_from_sinr(s(k), cfg.tau_d, cfg.tau_c);
        }
        simulate_conventional(eff, cfg, con, sigma2, RandomStream(derive_seed(rs, kConventional)), conv[a]);
      }
      if (want_dstbc) {
        for (int k = 0; k < K; ++k) {
          dst[a].snr_cf(k) += snr_dstbc(cf_inputs[k]);
          dst[a].sinr_cf(k) += sinr_dstbc_closed(cf_inputs[k]).value;
        }
        simulate_dstbc(eff, clusters, cfg, con, *code, designs, sigma2, RandomStream(derive_seed(rs, kDstbc)), dst[a]);
      }
    }
  }

  SetupOutcome out;
  out.degraded_ues = clusters.degraded;
  const double inv_r = 1.0 / cfg.realizations;
  MetricsRecord base = base_record(cfg, run_id, setup_seed, realization_root, setup_index);
  for (int a = 0; a < A; ++a) {
    const double alpha = cfg.alphas[a];
    base.alpha = alpha;
    base.alpha_index = a;
    for (Scheme sc : cfg.schemes) {
      base.scheme = sc;
      const SchemeAccumulator& acc = sc == Scheme::conventional ? conv[a] : dst[a];
      RVec ber(K), hsinr;
      for (int k = 0; k < K; ++k) ber(k) = acc.bits[k] ? static_cast<double>(acc.bit_errors[k]) / acc.bits[k] : 0.0;
      if (sc == Scheme::conventional) {
        HardeningMoments hm;
        if (cfg.precoder == Precoder::mr && cfg.mr_moments == MomentSource::closed_form && !pilot_phase)
          hm = mr_closed_form_moments(*stats, clusters, power.per_ap);
        else
          hm = hard[pilot_phase ? a : 0].moments();
        HardeningResult hr = sinr_hardening(hm, alpha, sigma2);
        out.clamped_hardening += static_cast<int>(hr.clamped.size());
        hsinr = hr.sinr;
      }
      for (const std::string& metric : metric_names(sc)) {
        base.metric = metric;
        for (int k = 0; k < K; ++k) {
          double v = 0.0;
          if (metric == "ber") v = ber(k);
          else if (metric == "se") v = se_from_ber(ber(k), sc, cfg.tau_c, cfg.tau_d, cfg.L_k, cfg.M_o);
          else if (metric == "sinr_upper") v = acc.sinr_upper(k) * inv_r;
          else if (metric == "se_upper") v = acc.se_upper(k) * inv_r;
          else if (metric == "sinr_hardening") v = hsinr(k);
          else if (metric == "se_hardening") v = se_from_sinr(hsinr(k), cfg.tau_d, cfg.tau_c);
          else if (metric == "snr_cf") v = acc.snr_cf(k) * inv_r;
          else if (metric == "sinr_cf") v = acc.sinr_cf(k) * inv_r;
          base.ue_id = k;
          base.value = v;
          out.records.push_back(base);
        }
      }
    }
  }
  return out;
}

ExperimentResult run_experiment(const SystemConfig& cfg, const ProgressFn& progress) {
  validate(cfg);
  const int S = cfg.setups;
  std::vector<SetupOutcome> outcomes(S);
  std::vector<char> done(S, 0);
  std::atomic<int> next{0};
  std::atomic<bool> stop{false};
  std::mutex mu;
  std::string error;
  int completed = 0;

  auto worker = [&]() {
    while (!stop.load()) {
      const int s = next.fetch_add(1);
      if (s >= S) return;
      try {
        SetupOutcome o = run_setup(cfg, s);
        std::lock_guard<std::mutex> lock(mu);
        outcomes[s] = std::move(o);
        done[s] = 1;
        ++completed;
        if (progress) progress(s, completed, S);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(mu);
        if (error.empty()) error = "setup " + std::to_string(s) + ": " + e.what();
        stop = true;
      }
    }
  };
  const int W = std::max(1, std::min(cfg.workers, S));
  if (W == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < W; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  ExperimentResult res;
  res.error = error;
  for (int s = 0; s < S; ++s) {
    if (!done[s]) continue;
    ++res.completed_setups;
    res.degraded_ues += static_cast<int>(outcomes[s].degraded_ues.size());
    res.clamped_hardening += outcomes[s].clamped_hardening;
    for (auto& r : outcomes[s].records) res.records.push_back(std::move(r));
  }
  canonical_sort(res.records);
  return res;
}

void canonical_sort(std::vector<MetricsRecord>& records) {
  auto metric_rank = [](const MetricsRecord& r) {
    const auto& names = metric_names(r.scheme);
    return static_cast<int>(std::find(names.begin(), names.end(), r.metric) - names.begin());
  };
  std::stable_sort(records.begin(), records.end(), [&](const MetricsRecord& a, const MetricsRecord& b) {
    if (a.setup_index != b.setup_index) return a.setup_index < b.setup_index;
    if (a.alpha_index != b.alpha_index) return a.alpha_index < b.alpha_index;
    if (a.scheme != b.scheme) return a.scheme < b.scheme;
    const int ma = metric_rank(a), mb = metric_rank(b);
    if (ma != mb) return ma < mb;
    return a.ue_id < b.ue_id;
  });
}

std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  const int exp10 = static_cast<int>(std::floor(std::log10(std::abs(v))));
  const int decimals = std::clamp(8 - exp10, 0, 40);
  char buf[512];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string csv_header() {
  return "run_id,setup_seed,realization_seed,scheme,precoder,alpha_rad,L,K,N,L_k,ue_id,metric,value";
}

void write_csv(std::ostream& out, const std::vector<MetricsRecord>& records) {
  out << csv_header() << '\n';
  for (const auto& r : records) {
    out << r.run_id << ',' << r.setup_seed << ',' << r.realization_seed << ',' << to_string(r.scheme) << ','
        << to_string(r.precoder) << ',' << format_value(r.alpha) << ',' << r.L << ',' << r.K << ',' << r.N << ','
        << r.L_k << ',' << r.ue_id << ',' << r.metric << ',' << format_value(r.value) << '\n';
  }
}

}  // namespace cfdstbc
