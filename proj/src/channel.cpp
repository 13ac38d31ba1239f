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

#include "hslnr/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hslnr/errors.hpp"

namespace hslnr {

ChannelMatrix::ChannelMatrix(CMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.cols() == 0) {
    throw ContractViolation("channel matrix: dimensions must be positive");
  }
  if (!entries_.allFinite()) throw ContractViolation("channel matrix: non-finite entry");
}

ChannelSet::ChannelSet(std::vector<ChannelMatrix> users) : users_(std::move(users)) {
  if (users_.empty()) throw ContractViolation("channel set: at least one user required");
  for (const auto& h : users_) {
    if (h.n_tx() != users_.front().n_tx()) {
      throw ContractViolation("channel set: users disagree on transmit antenna count");
    }
  }
}

std::vector<int> ChannelSet::rx_antennas() const {
  std::vector<int> rx;
  rx.reserve(users_.size());
  for (const auto& h : users_) rx.push_back(static_cast<int>(h.n_rx()));
  return rx;
}

EffectiveChannel::EffectiveChannel(CMatrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.cols() == 0) {
    throw ContractViolation("effective channel: dimensions must be positive");
  }
}

UlaGeometry::UlaGeometry(int n_elements, double spacing_wavelengths)
    : n_elements_(n_elements), spacing_(spacing_wavelengths) {
  if (n_elements_ < 1) throw ContractViolation("ULA: n_elements must be positive");
  if (!(spacing_ > 0.0) || !std::isfinite(spacing_)) {
    throw ContractViolation("ULA: spacing_wavelengths must be positive");
  }
}

ChannelMatrix draw_iid_rayleigh(int n_rx, int n_tx, RandomStream& rng) {
  if (n_rx < 1 || n_tx < 1) throw ContractViolation("draw_iid_rayleigh: dimensions must be positive");
  const double scale = std::sqrt(0.5);
  CMatrix h(n_rx, n_tx);
  for (int r = 0; r < n_rx; ++r) {
    for (int c = 0; c < n_tx; ++c) {
      const double re = rng.normal();
      const double im = rng.normal();
      h(r, c) = Complex(scale * re, scale * im);
    }
  }
  return ChannelMatrix(std::move(h));
}

ChannelSet draw_iid_rayleigh_set(std::span<const int> rx_antennas, int n_tx, RandomStream& rng) {
  std::vector<ChannelMatrix> users;
  users.reserve(rx_antennas.size());
  for (int m : rx_antennas) users.push_back(draw_iid_rayleigh(m, n_tx, rng));
  return ChannelSet(std::move(users));
}

CVector steering_vector(const UlaGeometry& geometry, double angle) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  if (!(angle >= -half_pi && angle <= half_pi)) {
    throw DomainError("steering_vector: angle " + std::to_string(angle) + " rad outside [-pi/2, pi/2]");
  }
  const double phase_step = 2.0 * std::numbers::pi * geometry.spacing_wavelengths() * std::sin(angle);
  CVector a(geometry.n_elements());
  for (int m = 0; m < geometry.n_elements(); ++m) a(m) = std::polar(1.0, phase_step * m);
  return a;
}

ChannelMatrix los_channel(const UlaGeometry& geometry, double angle) {
  return ChannelMatrix(steering_vector(geometry, angle).adjoint());
}

EffectiveChannel effective_channel(const ChannelMatrix& h, const AnalogPrecoder& a) {
  if (h.n_tx() != a.n_tx()) {
    throw ContractViolation("effective_channel: channel has " + std::to_string(h.n_tx()) +
                            " transmit columns but analog precoder has " + std::to_string(a.n_tx()) +
                            " rows");
  }
  return EffectiveChannel(h.entries() * a.matrix());
}

std::vector<EffectiveChannel> effective_channels(const ChannelSet& channels, const AnalogPrecoder& a) {
  std::vector<EffectiveChannel> out;
  out.reserve(channels.size());
  for (const auto& h : channels) out.push_back(effective_channel(h, a));
  return out;
}

std::vector<EffectiveChannel> pass_through_channels(const ChannelSet& channels) {
  std::vector<EffectiveChannel> out;
  out.reserve(channels.size());
  for (const auto& h : channels) out.emplace_back(h.entries());
  return out;
}

}  // namespace hslnr
