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

#include "hslnr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hslnr/errors.hpp"

namespace hslnr {
namespace {

void check_noise(double noise_power, const char* who) {
  if (!(noise_power > 0.0) || !std::isfinite(noise_power)) {
    throw DomainError(std::string(who) + ": noise power must be positive and finite");
  }
}

void check_digitals(const DigitalPrecoderSet& d, std::size_t k, Eigen::Index n_rf, const char* who) {
  if (d.size() != k) throw ContractViolation(std::string(who) + ": precoder count differs from node count");
  for (const auto& v : d.vectors) {
    if (v.size() != n_rf) throw ContractViolation(std::string(who) + ": digital precoder length mismatch");
  }
}

// Transmit vectors A D_l (or D_l when fully digital).
std::vector<CVector> transmit_vectors(const CMatrix* front, const DigitalPrecoderSet& d) {
  std::vector<CVector> out;
  out.reserve(d.size());
  for (const auto& v : d.vectors) out.push_back(front ? CVector(*front * v) : v);
  return out;
}

// Shared SINR evaluation over arbitrary channel views: rows of `channels[l]`
// applied to the transmit vectors.
template <typename ChannelView>
std::vector<double> sinr_core(std::span<const ChannelView> channels, const std::vector<CVector>& tx,
                              std::span<const int> rx, double noise_power) {
  std::vector<double> out(channels.size());
  for (std::size_t l = 0; l < channels.size(); ++l) {
    const CMatrix& h = channels[l].entries();
    const double signal = (h * tx[l]).squaredNorm();
    double interference = 0.0;
    for (std::size_t k = 0; k < channels.size(); ++k) {
      if (k != l) interference += (h * tx[k]).squaredNorm();
    }
    out[l] = signal / (static_cast<double>(rx[l]) * noise_power + interference);
  }
  return out;
}

std::vector<double> sinr_true(const ChannelSet& channels, const CMatrix* front, const DigitalPrecoderSet& d,
                              double noise_power, const char* who) {
  check_noise(noise_power, who);
  const Eigen::Index n_rf = front ? front->cols() : channels.n_tx();
  if (front && front->rows() != channels.n_tx()) {
    throw ContractViolation(std::string(who) + ": analog precoder rows differ from transmit antennas");
  }
  check_digitals(d, channels.size(), n_rf, who);
  const auto tx = transmit_vectors(front, d);
  const auto rx = channels.rx_antennas();
  return sinr_core<ChannelMatrix>(channels.users(), tx, rx, noise_power);
}

double slnr_true(const ChannelSet& channels, const CMatrix* front, const CVector& digital, std::size_t node,
                 double noise_power, const char* who) {
  check_noise(noise_power, who);
  if (node >= channels.size()) throw ContractViolation(std::string(who) + ": node index out of range");
  const Eigen::Index n_rf = front ? front->cols() : channels.n_tx();
  if (digital.size() != n_rf) throw ContractViolation(std::string(who) + ": digital precoder length mismatch");
  if (front && front->rows() != channels.n_tx()) {
    throw ContractViolation(std::string(who) + ": analog precoder rows differ from transmit antennas");
  }
  const CVector tx = front ? CVector(*front * digital) : digital;
  const double signal = (channels[node].entries() * tx).squaredNorm();
  double leakage = 0.0;
  for (std::size_t k = 0; k < channels.size(); ++k) {
    if (k != node) leakage += (channels[k].entries() * tx).squaredNorm();
  }
  return signal / (static_cast<double>(channels[node].n_rx()) * noise_power + leakage);
}

BeamPattern pattern_core(const UlaGeometry& geometry, const CMatrix* front, const DigitalPrecoderSet& d,
                         std::span<const double> grid) {
  if (grid.empty()) throw ContractViolation("beam_pattern: empty angle grid");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw ContractViolation("beam_pattern: angle grid must be strictly increasing");
  }
  const Eigen::Index n_tx = front ? front->rows() : (d.size() ? d.vectors.front().size() : 0);
  if (geometry.n_elements() != n_tx) {
    throw ContractViolation("beam_pattern: array has " + std::to_string(geometry.n_elements()) +
                            " elements but precoder drives " + std::to_string(n_tx));
  }
  check_digitals(d, d.size(), front ? front->cols() : n_tx, "beam_pattern");
  const auto tx = transmit_vectors(front, d);

  BeamPattern out;
  out.angles.assign(grid.begin(), grid.end());
  out.gain_per_node.assign(tx.size(), std::vector<double>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const CVector a = steering_vector(geometry, grid[i]);
    for (std::size_t l = 0; l < tx.size(); ++l) out.gain_per_node[l][i] = std::norm(a.dot(tx[l]));
  }
  return out;
}

}  // namespace

std::vector<double> sinr(const ChannelSet& channels, const AnalogPrecoder& analog,
                         const DigitalPrecoderSet& digitals, double noise_power) {
  return sinr_true(channels, &analog.matrix(), digitals, noise_power, "sinr");
}

std::vector<double> sinr_fully_digital(const ChannelSet& channels, const DigitalPrecoderSet& digitals,
                                       double noise_power) {
  return sinr_true(channels, nullptr, digitals, noise_power, "sinr_fully_digital");
}

std::vector<double> sinr_effective(std::span<const EffectiveChannel> effective, const DigitalPrecoderSet& digitals,
                                   double noise_power) {
  check_noise(noise_power, "sinr_effective");
  if (effective.empty()) throw ContractViolation("sinr_effective: at least one node required");
  check_digitals(digitals, effective.size(), effective.front().n_rf(), "sinr_effective");
  std::vector<int> rx;
  rx.reserve(effective.size());
  for (const auto& he : effective) rx.push_back(static_cast<int>(he.n_rx()));
  return sinr_core<EffectiveChannel>(effective, digitals.vectors, rx, noise_power);
}

double sum_rate(std::span<const double> sinrs) {
  double total = 0.0;
  for (double s : sinrs) {
    if (!(s >= 0.0)) throw ContractViolation("sum_rate: SINR values must be nonnegative");
    total += std::log2(1.0 + s);
  }
  return total;
}

double slnr(const ChannelSet& channels, const AnalogPrecoder& analog, const CVector& digital, std::size_t node,
            double noise_power) {
  return slnr_true(channels, &analog.matrix(), digital, node, noise_power, "slnr");
}

double slnr_fully_digital(const ChannelSet& channels, const CVector& digital, std::size_t node, double noise_power) {
  return slnr_true(channels, nullptr, digital, node, noise_power, "slnr_fully_digital");
}

LinkMetrics link_metrics(const ChannelSet& channels, const AnalogPrecoder& analog,
                         const DigitalPrecoderSet& digitals, double noise_power) {
  LinkMetrics m;
  m.sinr_per_node = sinr(channels, analog, digitals, noise_power);
  m.sum_rate = sum_rate(m.sinr_per_node);
  for (std::size_t l = 0; l < channels.size(); ++l) {
    m.slnr_per_node.push_back(slnr(channels, analog, digitals.vectors[l], l, noise_power));
  }
  return m;
}

LinkMetrics link_metrics_fully_digital(const ChannelSet& channels, const DigitalPrecoderSet& digitals,
                                       double noise_power) {
  LinkMetrics m;
  m.sinr_per_node = sinr_fully_digital(channels, digitals, noise_power);
  m.sum_rate = sum_rate(m.sinr_per_node);
  for (std::size_t l = 0; l < channels.size(); ++l) {
    m.slnr_per_node.push_back(slnr_fully_digital(channels, digitals.vectors[l], l, noise_power));
  }
  return m;
}

double fitness(std::span<const EffectiveChannel> effective, double noise_power, std::span<const int> rx_antennas,
               const AnalogPrecoder& analog) {
  return sum_rate(slnr_eigenvalues(effective, noise_power, rx_antennas, analog));
}

double fitness(std::span<const EffectiveChannel> effective, double noise_power, std::span<const int> rx_antennas) {
  return sum_rate(slnr_eigenvalues(effective, noise_power, rx_antennas));
}

double zf_fitness(std::span<const EffectiveChannel> effective, double noise_power, const AnalogPrecoder& analog) {
  try {
    const DigitalPrecoderSet d = zf_digital_precoder(effective, noise_power, analog);
    return sum_rate(sinr_effective(effective, d, noise_power));
  } catch (const SingularityError&) {
    return 0.0;
  }
}

BeamPattern beam_pattern(const UlaGeometry& geometry, const AnalogPrecoder& analog,
                         const DigitalPrecoderSet& digitals, std::span<const double> angle_grid) {
  return pattern_core(geometry, &analog.matrix(), digitals, angle_grid);
}

BeamPattern beam_pattern_fully_digital(const UlaGeometry& geometry, const DigitalPrecoderSet& digitals,
                                       std::span<const double> angle_grid) {
  return pattern_core(geometry, nullptr, digitals, angle_grid);
}

std::vector<double> default_angle_grid(std::size_t points) {
  if (points < 2) throw ContractViolation("default_angle_grid: need at least two points");
  std::vector<double> grid(points);
  const double lo = -std::numbers::pi / 2.0;
  const double step = std::numbers::pi / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) grid[i] = lo + step * static_cast<double>(i);
  grid.back() = std::numbers::pi / 2.0;
  return grid;
}

double max_sidelobe(std::span<const double> gains) {
  if (gains.size() < 3) return 0.0;
  const auto peak = static_cast<std::size_t>(std::max_element(gains.begin(), gains.end()) - gains.begin());
  // Walk down the main lobe on both sides to its first nulls/minima.
  std::size_t left = peak;
  while (left > 0 && gains[left - 1] <= gains[left]) --left;
  std::size_t right = peak;
  while (right + 1 < gains.size() && gains[right + 1] <= gains[right]) ++right;
  double best = 0.0;
  for (std::size_t i = 0; i < gains.size(); ++i) {
    if (i >= left && i <= right) continue;
    const bool rises = i == 0 || gains[i] >= gains[i - 1];
    const bool falls = i + 1 == gains.size() || gains[i] >= gains[i + 1];
    if (rises && falls) best = std::max(best, gains[i]);
  }
  return best;
}

double to_db(double linear) {
  return linear > 0.0 ? 10.0 * std::log10(linear) : -std::numeric_limits<double>::infinity();
}

}  // namespace hslnr
