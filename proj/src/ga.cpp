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

#include "hslnr/ga.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "hslnr/errors.hpp"

namespace hslnr {

Chromosome::Chromosome(Genome bits) : bits_(std::move(bits)) {
  for (auto b : bits_) {
    if (b > 1) throw ContractViolation("chromosome: bits must be 0 or 1");
  }
}

Chromosome Chromosome::from_string(std::string_view bits) {
  Genome g;
  g.reserve(bits.size());
  for (char ch : bits) {
    if (ch != '0' && ch != '1') throw ContractViolation("chromosome: expected '0'/'1' characters");
    g.push_back(static_cast<std::uint8_t>(ch - '0'));
  }
  return Chromosome(std::move(g));
}

std::string Chromosome::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t i = 0; i < bits_.size(); ++i) s[i] = static_cast<char>('0' + bits_[i]);
  return s;
}

void Chromosome::flip(std::size_t i) {
  bits_.at(i) ^= 1U;
  fitness_.reset();
}

void GaConfig::validate() const {
  if (population_size < 2 || population_size % 2 != 0) {
    throw ContractViolation("GA config: population_size must be even and at least 2");
  }
  if (!(crossover_prob >= 0.0 && crossover_prob <= 1.0)) {
    throw ContractViolation("GA config: crossover_prob must lie in [0, 1]");
  }
  if (!(mutation_prob >= 0.0 && mutation_prob <= 1.0)) {
    throw ContractViolation("GA config: mutation_prob must lie in [0, 1]");
  }
  if (elitism_count >= population_size) {
    throw ContractViolation("GA config: elitism_count must be smaller than population_size");
  }
  if (resolution_bits < 1 || resolution_bits > AnalogPrecoder::kMaxResolutionBits) {
    throw ContractViolation("GA config: resolution_bits out of range");
  }
}

bool GaTrace::best_nondecreasing() const noexcept {
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].best_fitness < records[i - 1].best_fitness) return false;
  }
  return true;
}

std::size_t genome_length(int n_tx, int n_rf, int resolution_bits) {
  if (n_tx < 1 || n_rf < 1 || resolution_bits < 1) {
    throw ContractViolation("genome_length: dimensions and resolution must be positive");
  }
  return static_cast<std::size_t>(n_tx) * static_cast<std::size_t>(n_rf) * static_cast<std::size_t>(resolution_bits);
}

AnalogPrecoder decode(const Chromosome& c, int n_tx, int n_rf, int resolution_bits) {
  const std::size_t expected = genome_length(n_tx, n_rf, resolution_bits);
  if (c.size() != expected) {
    throw ContractViolation("decode: chromosome has " + std::to_string(c.size()) + " bits, expected " +
                            std::to_string(expected));
  }
  IndexMatrix idx(n_tx, n_rf);
  std::size_t pos = 0;
  for (int r = 0; r < n_tx; ++r) {
    for (int col = 0; col < n_rf; ++col) {
      int v = 0;
      for (int b = 0; b < resolution_bits; ++b) v = (v << 1) | c.bits()[pos++];
      idx(r, col) = v;
    }
  }
  return AnalogPrecoder(std::move(idx), resolution_bits);
}

Chromosome encode(const AnalogPrecoder& analog) {
  const int bits = analog.resolution_bits();
  Genome g;
  g.reserve(static_cast<std::size_t>(analog.n_tx() * analog.n_rf() * bits));
  for (Eigen::Index r = 0; r < analog.n_tx(); ++r) {
    for (Eigen::Index c = 0; c < analog.n_rf(); ++c) {
      const int v = analog.phase_indices()(r, c);
      for (int b = bits - 1; b >= 0; --b) g.push_back(static_cast<std::uint8_t>((v >> b) & 1));
    }
  }
  return Chromosome(std::move(g));
}

Population init_population(const GaConfig& config, std::size_t genome_length, RandomStream& rng) {
  if (genome_length == 0) throw ContractViolation("init_population: genome length must be positive");
  Population pop;
  pop.members.reserve(config.population_size);
  for (std::size_t i = 0; i < config.population_size; ++i) {
    Genome g(genome_length);
    for (auto& bit : g) bit = static_cast<std::uint8_t>(rng.next_u64() >> 63);
    pop.members.emplace_back(std::move(g));
  }
  return pop;
}

namespace {

std::size_t spin_wheel(const std::vector<Chromosome>& members, double total, RandomStream& rng) {
  if (total <= 0.0) return rng.uniform_index(members.size());
  const double target = rng.uniform() * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const double f = *members[i].cached_fitness();
    if (f <= 0.0) continue;
    acc += f;
    last_positive = i;
    if (target < acc) return i;
  }
  return last_positive;  // rounding at the top of the wheel
}

}  // namespace

std::pair<std::size_t, std::size_t> roulette_select(const Population& pop, RandomStream& rng) {
  if (pop.members.empty()) throw ContractViolation("roulette_select: empty population");
  double total = 0.0;
  for (const auto& m : pop.members) {
    if (!m.cached_fitness()) throw ContractViolation("roulette_select: member without evaluated fitness");
    const double f = *m.cached_fitness();
    if (!(f >= 0.0) || !std::isfinite(f)) throw ContractViolation("roulette_select: fitness must be finite and >= 0");
    total += f;
  }
  const std::size_t first = spin_wheel(pop.members, total, rng);
  const std::size_t second = spin_wheel(pop.members, total, rng);
  return {first, second};
}

std::pair<Chromosome, Chromosome> crossover_at(const Chromosome& a, const Chromosome& b, std::size_t cut) {
  if (a.size() != b.size()) throw ContractViolation("crossover: parents differ in genome length");
  if (cut < 1 || cut >= a.size()) throw ContractViolation("crossover: cut point must lie in [1, L-1]");
  Genome x = a.bits();
  Genome y = b.bits();
  std::swap_ranges(x.begin() + static_cast<std::ptrdiff_t>(cut), x.end(), y.begin() + static_cast<std::ptrdiff_t>(cut));
  return {Chromosome(std::move(x)), Chromosome(std::move(y))};
}

std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b, double p_c, RandomStream& rng) {
  if (a.size() != b.size()) throw ContractViolation("crossover: parents differ in genome length");
  if (a.size() >= 2 && rng.bernoulli(p_c)) {
    const std::size_t cut = 1 + rng.uniform_index(a.size() - 1);
    return crossover_at(a, b, cut);
  }
  return {Chromosome(a.bits()), Chromosome(b.bits())};
}

Chromosome mutate(const Chromosome& c, double p_m, RandomStream& rng) {
  Chromosome out = c;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (rng.bernoulli(p_m)) out.flip(i);
  }
  return out;
}

GaResult evolve(const Evaluator& evaluate, const GaConfig& config, const GaDimensions& dims, RandomStream& rng) {
  config.validate();
  if (!evaluate) throw ContractViolation("evolve: evaluator is empty");
  if (dims.n_users < 1) throw ContractViolation("evolve: n_users must be positive");
  const std::size_t length = genome_length(dims.n_tx, dims.n_rf, config.resolution_bits);

  GaTrace trace;
  std::unordered_map<std::string, double> memo;
  std::size_t calls = 0;

  auto evaluate_population = [&](Population& pop) {
    for (auto& m : pop.members) {
      if (m.cached_fitness()) continue;
      const std::string key(m.bits().begin(), m.bits().end());
      if (auto it = memo.find(key); it != memo.end()) {
        m.set_fitness(it->second);
        continue;
      }
      double f = 0.0;
      try {
        f = evaluate(decode(m, dims.n_tx, dims.n_rf, config.resolution_bits));
      } catch (const std::exception& e) {
        throw GaAborted("evolve: evaluator failed in generation " + std::to_string(pop.generation) + ": " + e.what(),
                        trace);
      }
      ++calls;
      if (!(f >= 0.0) || !std::isfinite(f)) {
        throw GaAborted("evolve: evaluator returned invalid fitness in generation " + std::to_string(pop.generation),
                        trace);
      }
      memo.emplace(key, f);
      m.set_fitness(f);
    }
  };

  Chromosome best_ever;
  double best_ever_fitness = -1.0;

  auto record = [&](const Population& pop) {
    std::size_t best = 0;
    double sum = 0.0;
    for (std::size_t i = 0; i < pop.members.size(); ++i) {
      const double f = *pop.members[i].cached_fitness();
      sum += f;
      if (f > *pop.members[best].cached_fitness()) best = i;
    }
    const Chromosome& champion = pop.members[best];
    trace.records.push_back({pop.generation, *champion.cached_fitness(),
                             sum / static_cast<double>(pop.members.size()), champion});
    if (*champion.cached_fitness() > best_ever_fitness) {
      best_ever_fitness = *champion.cached_fitness();
      best_ever = champion;
    }
  };

  Population pop = init_population(config, length, rng);
  evaluate_population(pop);
  record(pop);

  std::vector<std::size_t> order(config.population_size);
  for (std::size_t g = 1; g <= config.max_generations; ++g) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
      return *pop.members[i].cached_fitness() > *pop.members[j].cached_fitness();
    });

    Population next;
    next.generation = g;
    next.members.reserve(config.population_size);
    for (std::size_t e = 0; e < config.elitism_count; ++e) next.members.push_back(pop.members[order[e]]);

    std::vector<Chromosome> children;
    children.reserve(config.population_size);
    for (std::size_t pair = 0; pair < config.population_size / 2; ++pair) {
      const auto [ia, ib] = roulette_select(pop, rng);
      auto [ca, cb] = crossover(pop.members[ia], pop.members[ib], config.crossover_prob, rng);
      children.push_back(mutate(ca, config.mutation_prob, rng));
      children.push_back(mutate(cb, config.mutation_prob, rng));
    }
    for (std::size_t i = 0; next.members.size() < config.population_size; ++i) {
      next.members.push_back(std::move(children[i]));
    }

    pop = std::move(next);
    evaluate_population(pop);
    record(pop);
  }

  GaResult result{decode(best_ever, dims.n_tx, dims.n_rf, config.resolution_bits), best_ever_fitness, best_ever,
                  std::move(trace), calls};
  return result;
}

OracleResult exhaustive_oracle(const Evaluator& evaluate, int n_tx, int n_rf, int resolution_bits) {
  const std::size_t length = genome_length(n_tx, n_rf, resolution_bits);
  if (length > kOracleMaxGenomeBits) {
    throw ContractViolation("exhaustive_oracle: genome of " + std::to_string(length) + " bits exceeds the cap of " +
                            std::to_string(kOracleMaxGenomeBits) + " bits");
  }
  if (!evaluate) throw ContractViolation("exhaustive_oracle: evaluator is empty");
  const std::uint64_t count = std::uint64_t{1} << length;
  Genome g(length);
  std::uint64_t best_value = 0;
  double best_fitness = -INFINITY;
  for (std::uint64_t v = 0; v < count; ++v) {
    for (std::size_t i = 0; i < length; ++i) g[i] = static_cast<std::uint8_t>((v >> (length - 1 - i)) & 1U);
    const double f = evaluate(decode(Chromosome(g), n_tx, n_rf, resolution_bits));
    if (f > best_fitness) {
      best_fitness = f;
      best_value = v;
    }
  }
  for (std::size_t i = 0; i < length; ++i) g[i] = static_cast<std::uint8_t>((best_value >> (length - 1 - i)) & 1U);
  Chromosome best(g);
  best.set_fitness(best_fitness);
  return {decode(best, n_tx, n_rf, resolution_bits), best_fitness, best, count};
}

}  // namespace hslnr
