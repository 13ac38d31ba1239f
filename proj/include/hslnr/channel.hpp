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
#include "hslnr/random.hpp"

namespace hslnr {

// True N_R x N_T channel between the transmitter and one remote node.
class ChannelMatrix {
 public:
  explicit ChannelMatrix(CMatrix entries);

  [[nodiscard]] const CMatrix& entries() const noexcept { return entries_; }
  [[nodiscard]] Eigen::Index n_rx() const noexcept { return entries_.rows(); }
  [[nodiscard]] Eigen::Index n_tx() const noexcept { return entries_.cols(); }

 private:
  CMatrix entries_;
};

// The K true channels. Only the channel simulator and the evaluation side of
// the harness hold one of these; the analog search sees EffectiveChannel only.
class ChannelSet {
 public:
  explicit ChannelSet(std::vector<ChannelMatrix> users);

  [[nodiscard]] std::size_t size() const noexcept { return users_.size(); }
  [[nodiscard]] const ChannelMatrix& operator[](std::size_t l) const { return users_[l]; }
  [[nodiscard]] Eigen::Index n_tx() const noexcept { return users_.front().n_tx(); }
  [[nodiscard]] std::vector<int> rx_antennas() const;
  [[nodiscard]] std::span<const ChannelMatrix> users() const noexcept { return users_; }
  [[nodiscard]] auto begin() const noexcept { return users_.begin(); }
  [[nodiscard]] auto end() const noexcept { return users_.end(); }

 private:
  std::vector<ChannelMatrix> users_;
};

// H_l * A: the channel as observed behind the analog network.
class EffectiveChannel {
 public:
  explicit EffectiveChannel(CMatrix entries);

  [[nodiscard]] const CMatrix& entries() const noexcept { return entries_; }
  [[nodiscard]] Eigen::Index n_rx() const noexcept { return entries_.rows(); }
  [[nodiscard]] Eigen::Index n_rf() const noexcept { return entries_.cols(); }

 private:
  CMatrix entries_;
};

class UlaGeometry {
 public:
  explicit UlaGeometry(int n_elements, double spacing_wavelengths = 0.5);

  [[nodiscard]] int n_elements() const noexcept { return n_elements_; }
  [[nodiscard]] double spacing_wavelengths() const noexcept { return spacing_; }

 private:
  int n_elements_;
  double spacing_;
};

// Circularly-symmetric unit-variance complex Gaussian entries, drawn row by
// row (real part then imaginary part).
ChannelMatrix draw_iid_rayleigh(int n_rx, int n_tx, RandomStream& rng);
ChannelSet draw_iid_rayleigh_set(std::span<const int> rx_antennas, int n_tx, RandomStream& rng);

// Element m is exp(j 2pi d m sin(angle)); angle in [-pi/2, pi/2].
CVector steering_vector(const UlaGeometry& geometry, double angle);
// 1 x N row equal to steering_vector(...)^H.
ChannelMatrix los_channel(const UlaGeometry& geometry, double angle);

EffectiveChannel effective_channel(const ChannelMatrix& h, const AnalogPrecoder& a);
std::vector<EffectiveChannel> effective_channels(const ChannelSet& channels, const AnalogPrecoder& a);
// The fully digital view: effective channel equal to the true channel.
std::vector<EffectiveChannel> pass_through_channels(const ChannelSet& channels);

}  // namespace hslnr
