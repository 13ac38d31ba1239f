// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstddef>
#include <vector>

#include "hslnr/channel.hpp"
#include "hslnr/config.hpp"
#include "hslnr/ga.hpp"
#include "hslnr/metrics.hpp"
#include "hslnr/random.hpp"

namespace hslnr {

struct RunOptions {
  // Worker threads for Monte Carlo realizations; results do not depend on it.
  std::size_t threads = 1;
};

struct SweepRow {
  Scheme scheme = Scheme::digital_slnr;
  double snr_db = 0.0;
  double mean_sum_rate = 0.0;
  double std_err = 0.0;
  std::size_t n_realizations = 0;
};

struct SweepDiagnostics {
  // max over every produced precoder of | ||A D_l|| - 1 |
  double max_norm_deviation = 0.0;
  std::size_t degenerate_nodes = 0;
  // realizations where a zero-forcing inverse was singular (scored as rate 0)
  std::size_t zf_singular = 0;
};

struct SweepTable {
  std::vector<SweepRow> rows;  // sorted by (scheme, snr_db)
  SweepDiagnostics diagnostics;

  [[nodiscard]] const SweepRow& row(Scheme scheme, double snr_db) const;
};

struct ConvergenceResult {
  Scheme scheme = Scheme::hybrid_slnr;
  double snr_db = 0.0;
  GaResult ga;
};

struct SchemeBeamPattern {
  Scheme scheme = Scheme::digital_slnr;
  BeamPattern pattern;
  double max_sidelobe = 0.0;  // over all nodes, linear
};

struct BeamPatternResult {
  double snr_db = 0.0;
  std::vector<double> node_angles_rad;
  std::vector<SchemeBeamPattern> patterns;  // in config scheme order
  double max_norm_deviation = 0.0;

  [[nodiscard]] const SchemeBeamPattern* find(Scheme scheme) const noexcept;
};

struct OracleCheckResult {
  std::size_t runs = 0;
  std::size_t hits = 0;      // GA matched the exhaustive maximum
  std::size_t exceeded = 0;  // GA above the maximum (must stay 0)
  std::vector<double> ga_fitness;
  std::vector<double> oracle_fitness;

  [[nodiscard]] double hit_rate() const noexcept { return runs ? static_cast<double>(hits) / runs : 0.0; }
};

// sigma^2 = 10^(-snr_db / 10)
double noise_power_from_snr_db(double snr_db);

ChannelSet draw_channels(const ExperimentConfig& config, RandomStream& rng);

// GA fitness callbacks. These are the only place true channels meet the
// search: the callback measures H_k A and hands just that to the cost.
Evaluator make_slnr_evaluator(const ChannelSet& channels, double noise_power);
Evaluator make_zf_evaluator(const ChannelSet& channels, double noise_power);

struct SchemeOutcome {
  double sum_rate = 0.0;
  double max_norm_deviation = 0.0;
  std::size_t degenerate_nodes = 0;
  bool zf_singular = false;
};

// One scheme on one channel realization, scored with the true channels.
SchemeOutcome evaluate_scheme(Scheme scheme, const ChannelSet& channels, const ExperimentConfig& config,
                              double noise_power, RandomStream& ga_rng);

SweepTable run_sum_rate_sweep(const ExperimentConfig& config, const RunOptions& options = {});

// GA trace on one seeded realization; the config must carry exactly one SNR
// point and select a hybrid scheme.
ConvergenceResult run_convergence_trace(const ExperimentConfig& config);

BeamPatternResult run_beam_pattern(const ExperimentConfig& config);

OracleCheckResult run_oracle_check(const ExperimentConfig& config, std::size_t runs, const RunOptions& options = {});

}  // namespace hslnr
