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

#include "hslnr/analog.hpp"

#include <numbers>
#include <string>

#include "hslnr/errors.hpp"

namespace hslnr {

Complex phase_shifter_entry(int index, int resolution_bits) {
  const long levels = 1L << resolution_bits;
  const long step = index + 1;  // b in 1..2^B
  // Quarter turns are exact: 4*step/levels is an integer.
  if ((4 * step) % levels == 0) {
    switch ((4 * step / levels) % 4) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double phi = 2.0 * std::numbers::pi * static_cast<double>(step) / static_cast<double>(levels);
  return std::polar(1.0, phi);
}

AnalogPrecoder::AnalogPrecoder(IndexMatrix phase_indices, int resolution_bits)
    : indices_(std::move(phase_indices)), bits_(resolution_bits) {
  if (bits_ < 1 || bits_ > kMaxResolutionBits) {
    throw ContractViolation("analog precoder: resolution_bits must be in [1, " +
                            std::to_string(kMaxResolutionBits) + "], got " + std::to_string(bits_));
  }
  if (indices_.rows() == 0 || indices_.cols() == 0) {
    throw ContractViolation("analog precoder: empty phase-index matrix");
  }
  const int max_index = (1 << bits_) - 1;
  matrix_.resize(indices_.rows(), indices_.cols());
  for (Eigen::Index r = 0; r < indices_.rows(); ++r) {
    for (Eigen::Index c = 0; c < indices_.cols(); ++c) {
      const int v = indices_(r, c);
      if (v < 0 || v > max_index) {
        throw ContractViolation("analog precoder: phase index " + std::to_string(v) + " at (" +
                                std::to_string(r) + "," + std::to_string(c) + ") outside [0, " +
                                std::to_string(max_index) + "]");
      }
      matrix_(r, c) = phase_shifter_entry(v, bits_);
    }
  }
}

double AnalogPrecoder::phase(Eigen::Index row, Eigen::Index col) const {
  return 2.0 * std::numbers::pi * static_cast<double>(indices_(row, col) + 1) /
         static_cast<double>(1L << bits_);
}

AnalogPrecoder analog_from_indices(IndexMatrix phase_indices, int resolution_bits) {
  return AnalogPrecoder(std::move(phase_indices), resolution_bits);
}

}  // namespace hslnr
