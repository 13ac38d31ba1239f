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

#include <complex>

#include <Eigen/Dense>

namespace hslnr {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using IndexMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;

// N_T x N_RF network of B-bit phase shifters.
//
// Phase index v selects the phase 2(v+1)pi / 2^B, so v = 2^B - 1 is the zero
// phase (entry +1) and, for B = 1, v = 0 is entry -1. Entries at multiples of
// pi/2 are stored exactly, which makes one-bit precoders real +-1 matrices.
class AnalogPrecoder {
 public:
  AnalogPrecoder(IndexMatrix phase_indices, int resolution_bits);

  [[nodiscard]] const IndexMatrix& phase_indices() const noexcept { return indices_; }
  [[nodiscard]] const CMatrix& matrix() const noexcept { return matrix_; }
  [[nodiscard]] int resolution_bits() const noexcept { return bits_; }
  [[nodiscard]] Eigen::Index n_tx() const noexcept { return matrix_.rows(); }
  [[nodiscard]] Eigen::Index n_rf() const noexcept { return matrix_.cols(); }
  // Phase of entry (row, col) in (0, 2pi].
  [[nodiscard]] double phase(Eigen::Index row, Eigen::Index col) const;

  static constexpr int kMaxResolutionBits = 16;

 private:
  IndexMatrix indices_;
  int bits_;
  CMatrix matrix_;
};

AnalogPrecoder analog_from_indices(IndexMatrix phase_indices, int resolution_bits);

// Unit-modulus entry for phase index v at B bits.
Complex phase_shifter_entry(int index, int resolution_bits);

}  // namespace hslnr
