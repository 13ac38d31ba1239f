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

namespace hslnr {

// Per-node digital weights D_l, each scaled so the aggregate transmit vector
// A * D_l has unit norm.
struct DigitalPrecoderSet {
  std::vector<CVector> vectors;
  double noise_power = 1.0;
  std::vector<int> rx_antennas;
  // Set for nodes whose effective channel was identically zero; their weight
  // vector is an arbitrary unit-aggregate-norm direction.
  std::vector<bool> degenerate;

  [[nodiscard]] std::size_t size() const noexcept { return vectors.size(); }
  [[nodiscard]] bool any_degenerate() const noexcept;
};

struct SlnrSolution {
  DigitalPrecoderSet precoders;
  std::vector<double> lambda_max;
};

// Hermitian pencil (C_l, B_l) whose generalized Rayleigh quotient is SLNR_l
// under the aggregate-norm constraint ||A D_l|| = 1:
//   C_l = (H^E_l)^H H^E_l,
//   B_l = M_l sigma^2 A^H A + sum_{k != l} (H^E_k)^H H^E_k.
// The transmitter knows A, so this uses no channel knowledge beyond H^E. For
// the fully digital front (A = I) the noise term reduces to M_l sigma^2 I.
struct SlnrPencil {
  CMatrix signal;
  CMatrix leakage_plus_noise;
};

SlnrPencil slnr_pencil(std::span<const EffectiveChannel> effective, std::size_t node, double noise_power,
                       int rx_antennas);
SlnrPencil slnr_pencil(std::span<const EffectiveChannel> effective, std::size_t node, double noise_power,
                       int rx_antennas, const AnalogPrecoder& analog);

struct GeneralizedEigenpair {
  double value = 0.0;
  CVector vector;     // unit norm, largest-modulus entry real positive
  double residual = 0.0;  // ||C v - value B v|| with the unit-norm v
};

// Principal eigenpair of C v = lambda B v for Hermitian C and Hermitian
// positive definite B, by Cholesky reduction B = L L^H followed by a
// Hermitian eigendecomposition of L^-1 C L^-H. Throws NumericalError if B is
// not positive definite or the eigensolver fails to converge.
GeneralizedEigenpair principal_generalized_eigenpair(const CMatrix& signal, const CMatrix& leakage_plus_noise);
double principal_generalized_eigenvalue(const CMatrix& signal, const CMatrix& leakage_plus_noise);

/// Closed-form hybrid SLNR digital precoder over the observed effective
/// channels. D_l is the principal generalized eigenvector of the node's pencil,
/// rescaled so that ||A D_l|| = 1; lambda_max[l] is the attained SLNR.
/// The eigenproblem is posed on range(A): when one-bit columns of A are
/// collinear the pencil is compressed to an orthonormal basis of A's column
/// space first, so B stays positive definite.
///
/// Throws DomainError for noise_power <= 0 and ContractViolation for
/// inconsistent dimensions. A node with an all-zero effective channel gets
/// lambda 0 and is flagged in DigitalPrecoderSet::degenerate.
SlnrSolution slnr_digital_precoder(std::span<const EffectiveChannel> effective, double noise_power,
                                   std::span<const int> rx_antennas, const AnalogPrecoder& analog);

// Principal SLNR eigenvalue of every node (no eigenvectors), for search loops.
std::vector<double> slnr_eigenvalues(std::span<const EffectiveChannel> effective, double noise_power,
                                     std::span<const int> rx_antennas, const AnalogPrecoder& analog);
std::vector<double> slnr_eigenvalues(std::span<const EffectiveChannel> effective, double noise_power,
                                     std::span<const int> rx_antennas);

/// Fully digital SLNR reference: precoders applied directly to the true
/// channels (N_RF = N_T, A = I), normalized to ||D_l|| = 1.
SlnrSolution slnr_fully_digital_precoder(const ChannelSet& channels, double noise_power);

// Condition-number ceiling on G G^H for the zero-forcing inverse.
inline constexpr double kZfMaxCondition = 1e12;

/// Zero-forcing (channel-inversion) precoder for single-antenna nodes:
/// columns of G^H (G G^H)^-1 for the stacked K x N_RF effective channel G,
/// each rescaled so ||A D_l|| = 1.
///
/// Throws UnsupportedConfiguration for multi-antenna nodes or K > N_RF, and
/// SingularityError when cond(G G^H) exceeds kZfMaxCondition.
DigitalPrecoderSet zf_digital_precoder(std::span<const EffectiveChannel> effective, double noise_power,
                                       const AnalogPrecoder& analog);
DigitalPrecoderSet zf_fully_digital_precoder(const ChannelSet& channels, double noise_power);

}  // namespace hslnr
