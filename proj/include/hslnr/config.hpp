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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hslnr/channel.hpp"
#include "hslnr/ga.hpp"

namespace hslnr {

enum class Scheme { digital_slnr, hybrid_slnr, digital_zf, hybrid_zf };
enum class ChannelModel { iid_rayleigh, los_ula };

std::string_view to_string(Scheme s) noexcept;
std::string_view to_string(ChannelModel m) noexcept;
Scheme parse_scheme(std::string_view name);
ChannelModel parse_channel_model(std::string_view name);
bool is_hybrid(Scheme s) noexcept;
bool is_zero_forcing(Scheme s) noexcept;

struct ExperimentConfig {
  int n_tx = 8;
  int n_rf = 3;
  int n_users = 3;
  std::vector<int> rx_antennas{1, 1, 1};
  int resolution_bits = 1;
  std::vector<double> snr_grid_db{-12, -9, -6, -3, 0, 3, 6, 9, 12};
  std::size_t n_channel_realizations = 500;
  // ga.resolution_bits and ga.seed are ignored; ga_config() fills them in.
  GaConfig ga;
  ChannelModel channel_model = ChannelModel::iid_rayleigh;
  std::optional<std::vector<double>> los_angles_deg;
  double array_spacing_wavelengths = 0.5;
  std::size_t beam_grid_points = 721;
  std::vector<Scheme> schemes{Scheme::digital_slnr, Scheme::hybrid_slnr, Scheme::digital_zf, Scheme::hybrid_zf};
  std::uint64_t seed = 1;
  std::string output_dir = "results";

  // Throws ConfigError describing the first violated constraint.
  void validate() const;

  [[nodiscard]] GaConfig ga_config() const;
  [[nodiscard]] UlaGeometry array() const;
  [[nodiscard]] bool has(Scheme s) const noexcept;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// Sum-rate sweep defaults: N_T=8, N_RF=K=3, single-antenna nodes, one-bit
// shifters, 500 realizations, SNR -12..12 dB in 3 dB steps.
ExperimentConfig sum_rate_config();
// Single-point GA run at 10 dB.
ExperimentConfig convergence_config();
// Line-of-sight nodes at -40, 0 and +40 degrees, digital and one-bit hybrid SLNR.
ExperimentConfig beam_pattern_config();
// N_T=4, N_RF=2, K=2, B=1, 100 generations: a 256-point space.
ExperimentConfig oracle_config();

// JSON document with every field; unknown keys are rejected on input and
// missing keys take the sum_rate_config() defaults.
std::string config_to_json(const ExperimentConfig& config, int indent = 2);
ExperimentConfig config_from_json(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

// FNV-1a over the compact JSON form.
std::uint64_t config_hash(const ExperimentConfig& config);

}  // namespace hslnr
