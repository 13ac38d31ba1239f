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

#include "hslnr/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <numbers>
#include <thread>

#include "hslnr/errors.hpp"
#include "hslnr/precoding.hpp"

namespace hslnr {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

// Realization r uses root.split(r); inside it, split(0) draws the channel and
// split(1 + slot) seeds each GA run.
constexpr std::uint64_t kChannelSlot = 0;

std::uint64_t ga_slot(std::size_t snr_index, Scheme scheme) {
  return 1 + snr_index * 4 + static_cast<std::uint64_t>(scheme);
}

template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

double norm_deviation(const CMatrix* front, const DigitalPrecoderSet& d) {
  double worst = 0.0;
  for (const auto& v : d.vectors) {
    const double n = front ? (*front * v).norm() : v.norm();
    worst = std::max(worst, std::abs(n - 1.0));
  }
  return worst;
}

std::size_t count_degenerate(const DigitalPrecoderSet& d) {
  return static_cast<std::size_t>(std::count(d.degenerate.begin(), d.degenerate.end(), true));
}

Scheme trace_scheme(const ExperimentConfig& config) {
  if (config.has(Scheme::hybrid_slnr)) return Scheme::hybrid_slnr;
  if (config.has(Scheme::hybrid_zf)) return Scheme::hybrid_zf;
  throw ConfigError("config: convergence trace needs a hybrid scheme");
}

Evaluator evaluator_for(Scheme scheme, const ChannelSet& channels, double noise_power) {
  return scheme == Scheme::hybrid_zf ? make_zf_evaluator(channels, noise_power)
                                     : make_slnr_evaluator(channels, noise_power);
}

struct PrecodedLink {
  std::optional<AnalogPrecoder> analog;  // empty for fully digital schemes
  DigitalPrecoderSet digitals;
};

// Precoders for one scheme; for ZF a singular inverse yields std::nullopt.
std::optional<PrecodedLink> precode(Scheme scheme, const ChannelSet& channels, const ExperimentConfig& config,
                                    double noise_power, RandomStream& ga_rng) {
  switch (scheme) {
    case Scheme::digital_slnr:
      return PrecodedLink{std::nullopt, slnr_fully_digital_precoder(channels, noise_power).precoders};
    case Scheme::digital_zf:
      try {
        return PrecodedLink{std::nullopt, zf_fully_digital_precoder(channels, noise_power)};
      } catch (const SingularityError&) {
        return std::nullopt;
      }
    case Scheme::hybrid_slnr:
    case Scheme::hybrid_zf: {
      const GaDimensions dims{config.n_tx, config.n_rf, config.n_users};
      GaResult ga = evolve(evaluator_for(scheme, channels, noise_power), config.ga_config(), dims, ga_rng);
      const auto effective = effective_channels(channels, ga.best);
      if (scheme == Scheme::hybrid_slnr) {
        const auto rx = channels.rx_antennas();
        auto d = slnr_digital_precoder(effective, noise_power, rx, ga.best).precoders;
        return PrecodedLink{std::move(ga.best), std::move(d)};
      }
      try {
        auto d = zf_digital_precoder(effective, noise_power, ga.best);
        return PrecodedLink{std::move(ga.best), std::move(d)};
      } catch (const SingularityError&) {
        return std::nullopt;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

const SweepRow& SweepTable::row(Scheme scheme, double snr_db) const {
  for (const auto& r : rows) {
    if (r.scheme == scheme && r.snr_db == snr_db) return r;
  }
  throw ContractViolation("sweep table: no row for " + std::string(to_string(scheme)) + " at " +
                          std::to_string(snr_db) + " dB");
}

const SchemeBeamPattern* BeamPatternResult::find(Scheme scheme) const noexcept {
  for (const auto& p : patterns) {
    if (p.scheme == scheme) return &p;
  }
  return nullptr;
}

double noise_power_from_snr_db(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

ChannelSet draw_channels(const ExperimentConfig& config, RandomStream& rng) {
  if (config.channel_model == ChannelModel::iid_rayleigh) {
    return draw_iid_rayleigh_set(config.rx_antennas, config.n_tx, rng);
  }
  if (!config.los_angles_deg) throw ConfigError("config: los_ula requires los_angles_deg");
  const UlaGeometry geometry = config.array();
  std::vector<ChannelMatrix> users;
  for (double deg : *config.los_angles_deg) users.push_back(los_channel(geometry, deg * kDeg));
  return ChannelSet(std::move(users));
}

Evaluator make_slnr_evaluator(const ChannelSet& channels, double noise_power) {
  return [&channels, noise_power, rx = channels.rx_antennas()](const AnalogPrecoder& a) {
    const auto observed = effective_channels(channels, a);
    return fitness(observed, noise_power, rx, a);
  };
}

Evaluator make_zf_evaluator(const ChannelSet& channels, double noise_power) {
  return [&channels, noise_power](const AnalogPrecoder& a) {
    const auto observed = effective_channels(channels, a);
    return zf_fitness(observed, noise_power, a);
  };
}

SchemeOutcome evaluate_scheme(Scheme scheme, const ChannelSet& channels, const ExperimentConfig& config,
                              double noise_power, RandomStream& ga_rng) {
  SchemeOutcome out;
  const auto link = precode(scheme, channels, config, noise_power, ga_rng);
  if (!link) {
    out.zf_singular = true;
    return out;
  }
  const CMatrix* front = link->analog ? &link->analog->matrix() : nullptr;
  const auto s = link->analog ? sinr(channels, *link->analog, link->digitals, noise_power)
                              : sinr_fully_digital(channels, link->digitals, noise_power);
  out.sum_rate = sum_rate(s);
  out.max_norm_deviation = norm_deviation(front, link->digitals);
  out.degenerate_nodes = count_degenerate(link->digitals);
  return out;
}

SweepTable run_sum_rate_sweep(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  const std::size_t n_real = config.n_channel_realizations;
  const std::size_t n_snr = config.snr_grid_db.size();
  const std::size_t n_scheme = config.schemes.size();
  // outcomes[(r * n_snr + s) * n_scheme + j]
  std::vector<SchemeOutcome> outcomes(n_real * n_snr * n_scheme);
  const RandomStream root(config.seed);

  parallel_for(n_real, options.threads, [&](std::size_t r) {
    const RandomStream realization = root.split(r);
    RandomStream channel_rng = realization.split(kChannelSlot);
    const ChannelSet channels = draw_channels(config, channel_rng);
    for (std::size_t s = 0; s < n_snr; ++s) {
      const double noise = noise_power_from_snr_db(config.snr_grid_db[s]);
      for (std::size_t j = 0; j < n_scheme; ++j) {
        RandomStream ga_rng = realization.split(ga_slot(s, config.schemes[j]));
        outcomes[(r * n_snr + s) * n_scheme + j] = evaluate_scheme(config.schemes[j], channels, config, noise, ga_rng);
      }
    }
  });

  SweepTable table;
  for (std::size_t s = 0; s < n_snr; ++s) {
    for (std::size_t j = 0; j < n_scheme; ++j) {
      double sum = 0.0;
      for (std::size_t r = 0; r < n_real; ++r) sum += outcomes[(r * n_snr + s) * n_scheme + j].sum_rate;
      const double mean = sum / static_cast<double>(n_real);
      double ss = 0.0;
      for (std::size_t r = 0; r < n_real; ++r) {
        const auto& o = outcomes[(r * n_snr + s) * n_scheme + j];
        ss += (o.sum_rate - mean) * (o.sum_rate - mean);
        table.diagnostics.max_norm_deviation = std::max(table.diagnostics.max_norm_deviation, o.max_norm_deviation);
        table.diagnostics.degenerate_nodes += o.degenerate_nodes;
        table.diagnostics.zf_singular += o.zf_singular ? 1 : 0;
      }
      const double std_err =
          n_real > 1 ? std::sqrt(ss / static_cast<double>(n_real - 1)) / std::sqrt(static_cast<double>(n_real)) : 0.0;
      table.rows.push_back({config.schemes[j], config.snr_grid_db[s], mean, std_err, n_real});
    }
  }
  std::stable_sort(table.rows.begin(), table.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.scheme != b.scheme) return a.scheme < b.scheme;
    return a.snr_db < b.snr_db;
  });
  return table;
}

ConvergenceResult run_convergence_trace(const ExperimentConfig& config) {
  config.validate();
  if (config.snr_grid_db.size() != 1) throw ConfigError("config: convergence trace needs exactly one SNR point");
  const Scheme scheme = trace_scheme(config);
  const double snr_db = config.snr_grid_db.front();
  const RandomStream realization = RandomStream(config.seed).split(0);
  RandomStream channel_rng = realization.split(kChannelSlot);
  const ChannelSet channels = draw_channels(config, channel_rng);
  RandomStream ga_rng = realization.split(ga_slot(0, scheme));
  const GaDimensions dims{config.n_tx, config.n_rf, config.n_users};
  GaResult ga = evolve(evaluator_for(scheme, channels, noise_power_from_snr_db(snr_db)), config.ga_config(), dims,
                       ga_rng);
  return {scheme, snr_db, std::move(ga)};
}

BeamPatternResult run_beam_pattern(const ExperimentConfig& config) {
  config.validate();
  if (config.channel_model != ChannelModel::los_ula) {
    throw ConfigError("config: beam patterns need channel_model los_ula with los_angles_deg");
  }
  BeamPatternResult out;
  out.snr_db = config.snr_grid_db.front();
  for (double deg : *config.los_angles_deg) out.node_angles_rad.push_back(deg * kDeg);
  const double noise = noise_power_from_snr_db(out.snr_db);
  const RandomStream realization = RandomStream(config.seed).split(0);
  RandomStream channel_rng = realization.split(kChannelSlot);
  const ChannelSet channels = draw_channels(config, channel_rng);
  const UlaGeometry geometry = config.array();
  const auto grid = default_angle_grid(config.beam_grid_points);

  for (Scheme scheme : config.schemes) {
    RandomStream ga_rng = realization.split(ga_slot(0, scheme));
    const auto link = precode(scheme, channels, config, noise, ga_rng);
    if (!link) throw SingularityError("beam pattern: zero-forcing inverse is singular for " + std::string(to_string(scheme)));
    SchemeBeamPattern entry;
    entry.scheme = scheme;
    entry.pattern = link->analog ? beam_pattern(geometry, *link->analog, link->digitals, grid)
                                 : beam_pattern_fully_digital(geometry, link->digitals, grid);
    for (const auto& g : entry.pattern.gain_per_node) entry.max_sidelobe = std::max(entry.max_sidelobe, max_sidelobe(g));
    out.max_norm_deviation =
        std::max(out.max_norm_deviation, norm_deviation(link->analog ? &link->analog->matrix() : nullptr, link->digitals));
    out.patterns.push_back(std::move(entry));
  }
  return out;
}

OracleCheckResult run_oracle_check(const ExperimentConfig& config, std::size_t runs, const RunOptions& options) {
  config.validate();
  if (genome_length(config.n_tx, config.n_rf, config.resolution_bits) > kOracleMaxGenomeBits) {
    throw ConfigError("config: oracle check needs n_tx * n_rf * resolution_bits <= " +
                      std::to_string(kOracleMaxGenomeBits));
  }
  const double noise = noise_power_from_snr_db(config.snr_grid_db.front());
  const RandomStream root(config.seed);
  const GaDimensions dims{config.n_tx, config.n_rf, config.n_users};
  OracleCheckResult out;
  out.runs = runs;
  out.ga_fitness.assign(runs, 0.0);
  out.oracle_fitness.assign(runs, 0.0);

  parallel_for(runs, options.threads, [&](std::size_t r) {
    const RandomStream realization = root.split(r);
    RandomStream channel_rng = realization.split(kChannelSlot);
    const ChannelSet channels = draw_channels(config, channel_rng);
    const Evaluator eval = make_slnr_evaluator(channels, noise);
    RandomStream ga_rng = realization.split(ga_slot(0, Scheme::hybrid_slnr));
    out.ga_fitness[r] = evolve(eval, config.ga_config(), dims, ga_rng).best_fitness;
    out.oracle_fitness[r] = exhaustive_oracle(eval, config.n_tx, config.n_rf, config.resolution_bits).best_fitness;
  });

  for (std::size_t r = 0; r < runs; ++r) {
    const double tol = 1e-12 * std::max(1.0, std::abs(out.oracle_fitness[r]));
    if (out.ga_fitness[r] > out.oracle_fitness[r] + tol) {
      ++out.exceeded;
    } else if (out.ga_fitness[r] >= out.oracle_fitness[r] - tol) {
      ++out.hits;
    }
  }
  return out;
}

}  // namespace hslnr
