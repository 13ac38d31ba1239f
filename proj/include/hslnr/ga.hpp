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
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hslnr/analog.hpp"
#include "hslnr/random.hpp"

namespace hslnr {

using Genome = std::vector<std::uint8_t>;

// Binary genome of an analog precoder: B bits per phase shifter, shifters in
// row-major order over the N_T x N_RF matrix, each group read MSB first.
class Chromosome {
 public:
  Chromosome() = default;
  explicit Chromosome(Genome bits);
  static Chromosome from_string(std::string_view bits);

  [[nodiscard]] const Genome& bits() const noexcept { return bits_; }
  [[nodiscard]] std::size_t size() const noexcept { return bits_.size(); }
  [[nodiscard]] std::string to_string() const;

  [[nodiscard]] const std::optional<double>& cached_fitness() const noexcept { return fitness_; }
  void set_fitness(double f) noexcept { fitness_ = f; }
  void clear_fitness() noexcept { fitness_.reset(); }

  void flip(std::size_t i);

  friend bool operator==(const Chromosome& a, const Chromosome& b) noexcept { return a.bits_ == b.bits_; }

 private:
  Genome bits_;
  std::optional<double> fitness_;
};

struct Population {
  std::vector<Chromosome> members;
  std::size_t generation = 0;
};

struct GaConfig {
  std::size_t population_size = 50;
  std::size_t max_generations = 200;
  double crossover_prob = 0.7;
  double mutation_prob = 0.001;
  std::size_t elitism_count = 1;
  int resolution_bits = 1;
  std::uint64_t seed = 0;

  // Throws ContractViolation on an invalid combination.
  void validate() const;

  friend bool operator==(const GaConfig&, const GaConfig&) = default;
};

struct GenerationRecord {
  std::size_t generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  Chromosome best;
};

struct GaTrace {
  std::vector<GenerationRecord> records;

  [[nodiscard]] bool best_nondecreasing() const noexcept;
};

struct GaDimensions {
  int n_tx = 0;
  int n_rf = 0;
  int n_users = 1;
};

// Maps a candidate analog precoder to its fitness. This is the only channel
// access the search has; implementations measure H_k A internally.
using Evaluator = std::function<double(const AnalogPrecoder&)>;

struct GaResult {
  AnalogPrecoder best;
  double best_fitness = 0.0;
  Chromosome best_chromosome;
  GaTrace trace;
  std::size_t evaluations = 0;  // distinct evaluator calls
};

// Raised when the evaluator throws or returns an invalid fitness; carries
// the records of all generations completed so far.
class GaAborted : public std::runtime_error {
 public:
  GaAborted(const std::string& what, GaTrace partial) : std::runtime_error(what), partial_trace(std::move(partial)) {}
  GaTrace partial_trace;
};

std::size_t genome_length(int n_tx, int n_rf, int resolution_bits);

AnalogPrecoder decode(const Chromosome& c, int n_tx, int n_rf, int resolution_bits);
Chromosome encode(const AnalogPrecoder& analog);

Population init_population(const GaConfig& config, std::size_t genome_length, RandomStream& rng);

// Two independent fitness-proportional draws with replacement; returns member
// indices. All-zero fitness falls back to uniform selection.
std::pair<std::size_t, std::size_t> roulette_select(const Population& pop, RandomStream& rng);

// Single-point crossover with probability p_c, cut drawn from {1, ..., L-1}.
std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b, double p_c, RandomStream& rng);
// Deterministic core: swap the tails starting at bit `cut`.
std::pair<Chromosome, Chromosome> crossover_at(const Chromosome& a, const Chromosome& b, std::size_t cut);

Chromosome mutate(const Chromosome& c, double p_m, RandomStream& rng);

/// Generational GA over the quantized analog-precoder set.
///
/// Each generation is evaluated, then N_P/2 rounds of roulette selection,
/// crossover and mutation breed the next one; the top `elitism_count`
/// members carry over unchanged and displace the last children. Fitness is
/// cached per distinct genome for the run (the channel is quasi-static), so
/// the evaluator is never called twice on the same precoder.
///
/// The trace holds max_generations + 1 records (initial population included).
/// The result is the highest-fitness chromosome seen, earliest on ties.
GaResult evolve(const Evaluator& evaluate, const GaConfig& config, const GaDimensions& dims, RandomStream& rng);

inline constexpr std::size_t kOracleMaxGenomeBits = 24;

struct OracleResult {
  AnalogPrecoder best;
  double best_fitness = 0.0;
  Chromosome best_chromosome;
  std::uint64_t candidates = 0;
};

// Enumerates all 2^(N_T N_RF B) precoders; ties go to the lowest genome value.
// Refuses genomes longer than kOracleMaxGenomeBits.
OracleResult exhaustive_oracle(const Evaluator& evaluate, int n_tx, int n_rf, int resolution_bits);

}  // namespace hslnr
