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

#include "hslnr/precoding.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "hslnr/errors.hpp"

namespace hslnr {
namespace {

void check_noise_power(double noise_power, const char* who) {
  if (!(noise_power > 0.0) || !std::isfinite(noise_power)) {
    std::ostringstream os;
    os << who << ": noise power must be positive and finite, got " << noise_power;
    throw DomainError(os.str());
  }
}

Eigen::Index common_rf_count(std::span<const EffectiveChannel> effective, const char* who) {
  if (effective.empty()) throw ContractViolation(std::string(who) + ": at least one node required");
  const Eigen::Index n_rf = effective.front().n_rf();
  for (const auto& he : effective) {
    if (he.n_rf() != n_rf) throw ContractViolation(std::string(who) + ": effective channels differ in column count");
  }
  return n_rf;
}

// Aggregate transmit norm ||F d||, with F = nullptr standing for the identity.
double aggregate_norm(const CMatrix* front, const CVector& d) {
  return front ? (*front * d).norm() : d.norm();
}

void rotate_largest_entry_real(CVector& v) {
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double m = std::abs(v(i));
    if (m > best_abs) {
      best_abs = m;
      best = i;
    }
  }
  if (best_abs > 0.0) v *= std::conj(v(best)) / best_abs;
}

// Fallback for a node without usable signal: first RF chain, unit aggregate norm.
CVector fallback_direction(Eigen::Index n_rf, const CMatrix* front) {
  CVector d = CVector::Zero(n_rf);
  d(0) = 1.0;
  return d / aggregate_norm(front, d);
}

// Cholesky factor of B plus the reduced Hermitian matrix L^-1 C L^-H.
struct ReducedPencil {
  Eigen::LLT<CMatrix> chol;
  CMatrix reduced;
};

ReducedPencil reduce(const CMatrix& c, const CMatrix& b) {
  if (c.rows() != c.cols() || b.rows() != b.cols() || c.rows() != b.rows()) {
    throw ContractViolation("generalized eigenproblem: pencil matrices must be square and equal-sized");
  }
  ReducedPencil out{Eigen::LLT<CMatrix>(b), {}};
  if (out.chol.info() != Eigen::Success) {
    std::ostringstream os;
    os << "generalized eigenproblem: Cholesky factorization failed (B not positive definite), n="
       << b.rows() << ", ||B||=" << b.norm();
    throw NumericalError(os.str());
  }
  const auto lower = out.chol.matrixL();
  const CMatrix half = lower.solve(c);                  // L^-1 C
  CMatrix reduced = lower.solve(half.adjoint());        // L^-1 C^H L^-H = L^-1 C L^-H
  out.reduced = 0.5 * (reduced + reduced.adjoint());
  return out;
}

[[noreturn]] void throw_no_convergence(const CMatrix& c, const CMatrix& b) {
  std::ostringstream os;
  os << "generalized eigenproblem: Hermitian eigensolver did not converge, n=" << c.rows()
     << ", ||C||=" << c.norm() << ", ||B||=" << b.norm();
  throw NumericalError(os.str());
}

// Orthonormal coordinates for range(A): the columns of A W are orthonormal
// and span A's column space. Empty whitener means no analog stage (A = I).
struct FrontBasis {
  const CMatrix* front = nullptr;
  CMatrix whitener;
};

FrontBasis front_basis(const CMatrix* front) {
  FrontBasis basis{front, {}};
  if (!front) return basis;
  const CMatrix gram = front->adjoint() * *front;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram);
  if (eig.info() != Eigen::Success) throw NumericalError("analog front: eigensolver failed on A^H A");
  const auto& values = eig.eigenvalues();
  const double cutoff = 1e-10 * values.maxCoeff();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < values.size(); ++i) rank += values(i) > cutoff ? 1 : 0;
  basis.whitener.resize(gram.rows(), rank);
  for (Eigen::Index i = values.size() - rank, j = 0; i < values.size(); ++i, ++j) {
    basis.whitener.col(j) = eig.eigenvectors().col(i) / std::sqrt(values(i));
  }
  return basis;
}

SlnrPencil pencil_core(std::span<const EffectiveChannel> effective, std::size_t node, double noise_power,
                       int rx_antennas, const CMatrix* front) {
  if (node >= effective.size()) throw ContractViolation("slnr_pencil: node index out of range");
  const Eigen::Index n_rf = effective[node].n_rf();
  if (front && front->cols() != n_rf) {
    throw ContractViolation("slnr_pencil: analog precoder column count differs from effective channels");
  }
  const double noise = static_cast<double>(rx_antennas) * noise_power;
  SlnrPencil p;
  const CMatrix& own = effective[node].entries();
  p.signal = own.adjoint() * own;
  p.leakage_plus_noise = front ? CMatrix(noise * (front->adjoint() * *front)) : CMatrix(CMatrix::Identity(n_rf, n_rf) * noise);
  for (std::size_t k = 0; k < effective.size(); ++k) {
    if (k == node) continue;
    const CMatrix& other = effective[k].entries();
    if (other.cols() != n_rf) throw ContractViolation("slnr_pencil: effective channels differ in column count");
    p.leakage_plus_noise.noalias() += other.adjoint() * other;
  }
  return p;
}

GeneralizedEigenpair principal_pair_on_range(const SlnrPencil& p, const FrontBasis& basis) {
  if (!basis.front) return principal_generalized_eigenpair(p.signal, p.leakage_plus_noise);
  const CMatrix& w = basis.whitener;
  const GeneralizedEigenpair reduced =
      principal_generalized_eigenpair(w.adjoint() * p.signal * w, w.adjoint() * p.leakage_plus_noise * w);
  GeneralizedEigenpair out;
  out.value = reduced.value;
  CVector v = w * reduced.vector;
  v.normalize();
  rotate_largest_entry_real(v);
  out.residual = (p.signal * v - out.value * (p.leakage_plus_noise * v)).norm();
  out.vector = std::move(v);
  return out;
}

double principal_value_on_range(const SlnrPencil& p, const FrontBasis& basis) {
  if (!basis.front) return principal_generalized_eigenvalue(p.signal, p.leakage_plus_noise);
  const CMatrix& w = basis.whitener;
  return principal_generalized_eigenvalue(w.adjoint() * p.signal * w, w.adjoint() * p.leakage_plus_noise * w);
}

void check_slnr_inputs(std::span<const EffectiveChannel> effective, double noise_power,
                       std::span<const int> rx_antennas, const CMatrix* front, const char* who) {
  check_noise_power(noise_power, who);
  const Eigen::Index n_rf = common_rf_count(effective, who);
  if (rx_antennas.size() != effective.size()) {
    throw ContractViolation(std::string(who) + ": rx_antennas length differs from node count");
  }
  if (front && front->cols() != n_rf) {
    throw ContractViolation(std::string(who) + ": analog precoder column count differs from effective channels");
  }
  for (std::size_t l = 0; l < effective.size(); ++l) {
    if (rx_antennas[l] < 1) throw ContractViolation(std::string(who) + ": rx_antennas must be positive");
    if (effective[l].n_rx() != rx_antennas[l]) {
      throw ContractViolation(std::string(who) + ": effective channel row count differs from rx_antennas");
    }
  }
}

std::vector<double> eigenvalues_core(std::span<const EffectiveChannel> effective, double noise_power,
                                     std::span<const int> rx_antennas, const CMatrix* front, const char* who) {
  check_slnr_inputs(effective, noise_power, rx_antennas, front, who);
  const FrontBasis basis = front_basis(front);
  std::vector<double> out(effective.size(), 0.0);
  for (std::size_t l = 0; l < effective.size(); ++l) {
    if (effective[l].entries().squaredNorm() == 0.0) continue;
    out[l] = principal_value_on_range(pencil_core(effective, l, noise_power, rx_antennas[l], front), basis);
  }
  return out;
}

SlnrSolution solve_slnr(std::span<const EffectiveChannel> effective, double noise_power,
                        std::span<const int> rx_antennas, const CMatrix* front, const char* who) {
  check_slnr_inputs(effective, noise_power, rx_antennas, front, who);
  const Eigen::Index n_rf = effective.front().n_rf();
  const FrontBasis basis = front_basis(front);

  SlnrSolution sol;
  auto& set = sol.precoders;
  set.noise_power = noise_power;
  set.rx_antennas.assign(rx_antennas.begin(), rx_antennas.end());
  set.vectors.reserve(effective.size());
  set.degenerate.reserve(effective.size());
  sol.lambda_max.reserve(effective.size());

  for (std::size_t l = 0; l < effective.size(); ++l) {
    if (effective[l].entries().squaredNorm() == 0.0) {
      set.vectors.push_back(fallback_direction(n_rf, front));
      set.degenerate.push_back(true);
      sol.lambda_max.push_back(0.0);
      continue;
    }
    const SlnrPencil pencil = pencil_core(effective, l, noise_power, rx_antennas[l], front);
    const GeneralizedEigenpair pair = principal_pair_on_range(pencil, basis);
    const double scale = aggregate_norm(front, pair.vector);
    if (!(scale > 0.0)) {
      set.vectors.push_back(fallback_direction(n_rf, front));
      set.degenerate.push_back(true);
      sol.lambda_max.push_back(0.0);
      continue;
    }
    set.vectors.push_back(pair.vector / scale);
    set.degenerate.push_back(false);
    sol.lambda_max.push_back(pair.value);
  }
  return sol;
}

DigitalPrecoderSet solve_zf(std::span<const EffectiveChannel> effective, double noise_power, const CMatrix* front,
                            const char* who) {
  check_noise_power(noise_power, who);
  const Eigen::Index n_rf = common_rf_count(effective, who);
  if (front && front->cols() != n_rf) {
    throw ContractViolation(std::string(who) + ": analog precoder column count differs from effective channels");
  }
  const auto k = static_cast<Eigen::Index>(effective.size());
  for (const auto& he : effective) {
    if (he.n_rx() != 1) {
      throw UnsupportedConfiguration(std::string(who) +
                                     ": zero forcing is implemented for single-antenna nodes only");
    }
  }
  if (k > n_rf) {
    throw UnsupportedConfiguration(std::string(who) + ": dimension condition violated, " + std::to_string(k) +
                                   " nodes but only " + std::to_string(n_rf) + " transmit dimensions");
  }

  CMatrix g(k, n_rf);
  for (Eigen::Index l = 0; l < k; ++l) g.row(l) = effective[static_cast<std::size_t>(l)].entries().row(0);
  const CMatrix gram = g * g.adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError(std::string(who) + ": eigensolver failed on G G^H");
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > kZfMaxCondition) {
    std::ostringstream os;
    os << who << ": stacked effective channel is rank deficient (cond(G G^H) = "
       << (lo > 0.0 ? hi / lo : INFINITY) << ")";
    throw SingularityError(os.str());
  }
  const CMatrix inverse = g.adjoint() * gram.ldlt().solve(CMatrix::Identity(k, k));

  DigitalPrecoderSet set;
  set.noise_power = noise_power;
  set.rx_antennas.assign(effective.size(), 1);
  set.degenerate.assign(effective.size(), false);
  set.vectors.reserve(effective.size());
  for (Eigen::Index l = 0; l < k; ++l) {
    const CVector column = inverse.col(l);
    set.vectors.push_back(column / aggregate_norm(front, column));
  }
  return set;
}

}  // namespace

bool DigitalPrecoderSet::any_degenerate() const noexcept {
  return std::any_of(degenerate.begin(), degenerate.end(), [](bool b) { return b; });
}

SlnrPencil slnr_pencil(std::span<const EffectiveChannel> effective, std::size_t node, double noise_power,
                       int rx_antennas) {
  return pencil_core(effective, node, noise_power, rx_antennas, nullptr);
}

SlnrPencil slnr_pencil(std::span<const EffectiveChannel> effective, std::size_t node, double noise_power,
                       int rx_antennas, const AnalogPrecoder& analog) {
  return pencil_core(effective, node, noise_power, rx_antennas, &analog.matrix());
}

GeneralizedEigenpair principal_generalized_eigenpair(const CMatrix& signal, const CMatrix& leakage_plus_noise) {
  const ReducedPencil rp = reduce(signal, leakage_plus_noise);
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(rp.reduced);
  if (eig.info() != Eigen::Success) throw_no_convergence(signal, leakage_plus_noise);

  const Eigen::Index top = rp.reduced.rows() - 1;
  GeneralizedEigenpair out;
  out.value = std::max(0.0, eig.eigenvalues()(top));
  CVector v = rp.chol.matrixU().solve(eig.eigenvectors().col(top));  // L^-H w
  v.normalize();
  rotate_largest_entry_real(v);
  out.residual = (signal * v - out.value * (leakage_plus_noise * v)).norm();
  out.vector = std::move(v);
  return out;
}

double principal_generalized_eigenvalue(const CMatrix& signal, const CMatrix& leakage_plus_noise) {
  const ReducedPencil rp = reduce(signal, leakage_plus_noise);
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(rp.reduced, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw_no_convergence(signal, leakage_plus_noise);
  return std::max(0.0, eig.eigenvalues().maxCoeff());
}

SlnrSolution slnr_digital_precoder(std::span<const EffectiveChannel> effective, double noise_power,
                                   std::span<const int> rx_antennas, const AnalogPrecoder& analog) {
  return solve_slnr(effective, noise_power, rx_antennas, &analog.matrix(), "slnr_digital_precoder");
}

std::vector<double> slnr_eigenvalues(std::span<const EffectiveChannel> effective, double noise_power,
                                     std::span<const int> rx_antennas, const AnalogPrecoder& analog) {
  return eigenvalues_core(effective, noise_power, rx_antennas, &analog.matrix(), "slnr_eigenvalues");
}

std::vector<double> slnr_eigenvalues(std::span<const EffectiveChannel> effective, double noise_power,
                                     std::span<const int> rx_antennas) {
  return eigenvalues_core(effective, noise_power, rx_antennas, nullptr, "slnr_eigenvalues");
}

SlnrSolution slnr_fully_digital_precoder(const ChannelSet& channels, double noise_power) {
  const auto effective = pass_through_channels(channels);
  const auto rx = channels.rx_antennas();
  return solve_slnr(effective, noise_power, rx, nullptr, "slnr_fully_digital_precoder");
}

DigitalPrecoderSet zf_digital_precoder(std::span<const EffectiveChannel> effective, double noise_power,
                                       const AnalogPrecoder& analog) {
  return solve_zf(effective, noise_power, &analog.matrix(), "zf_digital_precoder");
}

DigitalPrecoderSet zf_fully_digital_precoder(const ChannelSet& channels, double noise_power) {
  const auto effective = pass_through_channels(channels);
  return solve_zf(effective, noise_power, nullptr, "zf_fully_digital_precoder");
}

}  // namespace hslnr
