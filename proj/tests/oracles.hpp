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

// Test-only reference computations. Everything here is written from the
// defining formulas with plain loops and std::complex so that it shares no
// code path with the library routines it checks.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "hslnr/analog.hpp"
#include "hslnr/channel.hpp"
#include "hslnr/random.hpp"

namespace hslnr::oracle {

using cd = std::complex<double>;

inline CMatrix naive_product(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      cd acc = 0.0;
      for (Eigen::Index k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  }
  return out;
}

// ||H x||^2 by explicit row sums.
inline double gain(const CMatrix& h, const std::vector<cd>& x) {
  double total = 0.0;
  for (Eigen::Index r = 0; r < h.rows(); ++r) {
    cd acc = 0.0;
    for (Eigen::Index c = 0; c < h.cols(); ++c) acc += h(r, c) * x[static_cast<std::size_t>(c)];
    total += std::norm(acc);
  }
  return total;
}

inline std::vector<cd> apply(const CMatrix& a, const CVector& d) {
  std::vector<cd> out(static_cast<std::size_t>(a.rows()), 0.0);
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) out[static_cast<std::size_t>(r)] += a(r, c) * d(c);
  }
  return out;
}

inline double norm(const std::vector<cd>& x) {
  double s = 0.0;
  for (const auto& v : x) s += std::norm(v);
  return std::sqrt(s);
}

// Signal over noise-plus-leakage for transmit vector x = A d, straight from
// the definition, with x rescaled to unit norm first.
inline double slnr_direct(const std::vector<CMatrix>& channels, const CMatrix& a, const CVector& d, std::size_t l,
                          double noise_power) {
  auto x = apply(a, d);
  const double n = norm(x);
  for (auto& v : x) v /= n;
  double leak = 0.0;
  for (std::size_t k = 0; k < channels.size(); ++k) {
    if (k != l) leak += gain(channels[k], x);
  }
  return gain(channels[l], x) / (static_cast<double>(channels[l].rows()) * noise_power + leak);
}

inline CMatrix random_complex(Eigen::Index rows, Eigen::Index cols, RandomStream& rng) {
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = cd(rng.normal(), rng.normal());
  }
  return m;
}

inline CVector random_vector(Eigen::Index n, RandomStream& rng) {
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = cd(rng.normal(), rng.normal());
  return v;
}

inline AnalogPrecoder random_analog(int n_tx, int n_rf, int bits, RandomStream& rng) {
  IndexMatrix idx(n_tx, n_rf);
  for (int r = 0; r < n_tx; ++r) {
    for (int c = 0; c < n_rf; ++c) idx(r, c) = static_cast<int>(rng.uniform_index(std::size_t{1} << bits));
  }
  return AnalogPrecoder(idx, bits);
}

inline std::vector<CMatrix> entries(const ChannelSet& set) {
  std::vector<CMatrix> out;
  for (const auto& h : set) out.push_back(h.entries());
  return out;
}

// Upper 1% point of chi-square for small degrees of freedom.
inline double chi2_critical_01(int dof) {
  static constexpr double table[] = {0.0,    6.635,  9.210,  11.345, 13.277, 15.086, 16.812,
                                     18.475, 20.090, 21.666, 23.209, 24.725, 26.217};
  return table[dof];
}

}  // namespace hslnr::oracle
