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
#include <span>
#include <vector>

#include "hslnr/analog.hpp"
#include "hslnr/channel.hpp"
#include "hslnr/precoding.hpp"

namespace hslnr {

struct LinkMetrics {
  std::vector<double> sinr_per_node;
  double sum_rate = 0.0;
  std::vector<double> slnr_per_node;
};

struct BeamPattern {
  std::vector<double> angles;                   // radians, strictly increasing
  std::vector<std::vector<double>> gain_per_node;  // linear |a(theta)^H A D_l|^2
};

// SINR_l = ||H_l A D_l||^2 / (M_l sigma^2 + sum_{k != l} ||H_l A D_k||^2),
// evaluated on the TRUE channels.
std::vector<double> sinr(const ChannelSet& channels, const AnalogPrecoder& analog,
                         const DigitalPrecoderSet& digitals, double noise_power);
std::vector<double> sinr_fully_digital(const ChannelSet& channels, const DigitalPrecoderSet& digitals,
                                       double noise_power);
// Same quotient evaluated on observed effective channels H_l A.
std::vector<double> sinr_effective(std::span<const EffectiveChannel> effective, const DigitalPrecoderSet& digitals,
                                   double noise_power);

double sum_rate(std::span<const double> sinrs);

// SLNR_l = ||H_l A d||^2 / (M_l sigma^2 + sum_{k != l} ||H_k A d||^2).
double slnr(const ChannelSet& channels, const AnalogPrecoder& analog, const CVector& digital, std::size_t node,
            double noise_power);
double slnr_fully_digital(const ChannelSet& channels, const CVector& digital, std::size_t node, double noise_power);

LinkMetrics link_metrics(const ChannelSet& channels, const AnalogPrecoder& analog,
                         const DigitalPrecoderSet& digitals, double noise_power);
LinkMetrics link_metrics_fully_digital(const ChannelSet& channels, const DigitalPrecoderSet& digitals,
                                       double noise_power);

// Low-SNR sum-rate approximation sum_k log2(1 + lambda_max^(k)) used as the
// analog-search cost. Takes only observed effective channels plus the analog
// setting the transmitter applied; the three-argument form assumes an
// orthonormal front (A^H A = I).
double fitness(std::span<const EffectiveChannel> effective, double noise_power, std::span<const int> rx_antennas,
               const AnalogPrecoder& analog);
double fitness(std::span<const EffectiveChannel> effective, double noise_power, std::span<const int> rx_antennas);

// Exact sum rate of zero-forcing precoding on the observed effective
// channels. Returns 0 when the stacked channel is singular.
double zf_fitness(std::span<const EffectiveChannel> effective, double noise_power, const AnalogPrecoder& analog);

BeamPattern beam_pattern(const UlaGeometry& geometry, const AnalogPrecoder& analog,
                         const DigitalPrecoderSet& digitals, std::span<const double> angle_grid);
BeamPattern beam_pattern_fully_digital(const UlaGeometry& geometry, const DigitalPrecoderSet& digitals,
                                       std::span<const double> angle_grid);

inline constexpr std::size_t kDefaultBeamGridPoints = 721;
// Evenly spaced grid over [-pi/2, pi/2] inclusive.
std::vector<double> default_angle_grid(std::size_t points = kDefaultBeamGridPoints);

// Largest local maximum of a gain curve outside its main lobe (the global
// peak together with the monotone flanks around it). Returns 0 if the curve
// has no sidelobe.
double max_sidelobe(std::span<const double> gains);

double to_db(double linear);

}  // namespace hslnr
