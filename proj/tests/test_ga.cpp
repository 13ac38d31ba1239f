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

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

#include "doctest.h"
#include "hslnr/errors.hpp"
#include "hslnr/ga.hpp"
#include "hslnr/metrics.hpp"
#include "oracles.hpp"

using namespace hslnr;

namespace {

Population with_fitness(std::initializer_list<double> values) {
  Population pop;
  for (double f : values) {
    Chromosome c(Genome{0, 1});
    c.set_fitness(f);
    pop.members.push_back(c);
  }
  return pop;
}

std::vector<std::size_t> selection_counts(const Population& pop, int draws, std::uint64_t seed) {
  RandomStream rng(seed);
  std::vector<std::size_t> counts(pop.members.size(), 0);
  for (int i = 0; i < draws / 2; ++i) {
    const auto [a, b] = roulette_select(pop, rng);
    ++counts[a];
    ++counts[b];
  }
  return counts;
}

Chromosome random_chromosome(std::size_t length, RandomStream& rng) {
  Genome g(length);
  for (auto& bit : g) bit = rng.bernoulli(0.5) ? 1 : 0;
  return Chromosome(g);
}

// SLNR fitness of a fixed channel set as seen through the analog front.
Evaluator channel_evaluator(const ChannelSet& channels, double noise_power) {
  return [&channels, noise_power](const AnalogPrecoder& a) {
    return fitness(effective_channels(channels, a), noise_power, channels.rx_antennas(), a);
  };
}

}  // namespace

TEST_CASE("chromosome basics") {
  const auto c = Chromosome::from_string("0110");
  CHECK(c.size() == 4);
  CHECK(c.to_string() == "0110");
  CHECK_FALSE(c.cached_fitness().has_value());
  auto d = c;
  d.flip(0);
  CHECK(d.to_string() == "1110");
  CHECK_THROWS_AS(Chromosome::from_string("01x"), ContractViolation);
  CHECK_THROWS_AS(Chromosome(Genome{0, 2}), ContractViolation);
}

TEST_CASE("GaConfig validation") {
  GaConfig ok;
  CHECK_NOTHROW(ok.validate());
  auto bad = ok;
  bad.population_size = 7;
  CHECK_THROWS_AS(bad.validate(), ContractViolation);
  bad = ok;
  bad.population_size = 0;
  CHECK_THROWS_AS(bad.validate(), ContractViolation);
  bad = ok;
  bad.crossover_prob = 1.5;
  CHECK_THROWS_AS(bad.validate(), ContractViolation);
  bad = ok;
  bad.mutation_prob = -0.1;
  CHECK_THROWS_AS(bad.validate(), ContractViolation);
  bad = ok;
  bad.elitism_count = 50;
  CHECK_THROWS_AS(bad.validate(), ContractViolation);
  bad = ok;
  bad.resolution_bits = 0;
  CHECK_THROWS_AS(bad.validate(), ContractViolation);
}

TEST_CASE("decode and encode") {
  SUBCASE("one bit column") {
    const auto a = decode(Chromosome::from_string("01"), 2, 1, 1);
    CHECK(a.matrix()(0, 0) == Complex(-1.0, 0.0));
    CHECK(a.matrix()(1, 0) == Complex(1.0, 0.0));
  }
  SUBCASE("two-bit single entry") {
    const auto a = decode(Chromosome::from_string("11"), 1, 1, 2);
    CHECK(a.matrix()(0, 0) == Complex(1.0, 0.0));
    CHECK(a.phase_indices()(0, 0) == 3);
  }
  SUBCASE("row-major, MSB-first grouping") {
    const auto a = decode(Chromosome::from_string("10" "01" "00" "11"), 2, 2, 2);
    CHECK(a.phase_indices()(0, 0) == 2);
    CHECK(a.phase_indices()(0, 1) == 1);
    CHECK(a.phase_indices()(1, 0) == 0);
    CHECK(a.phase_indices()(1, 1) == 3);
  }
  SUBCASE("round trip over random chromosomes") {
    RandomStream rng(55);
    for (int trial = 0; trial < 1000; ++trial) {
      const int bits = 1 + trial % 3;
      const int n_tx = 1 + static_cast<int>(rng.uniform_index(8));
      const int n_rf = 1 + static_cast<int>(rng.uniform_index(4));
      const auto c = random_chromosome(genome_length(n_tx, n_rf, bits), rng);
      CHECK(encode(decode(c, n_tx, n_rf, bits)) == c);
    }
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS_AS(decode(Chromosome::from_string("011"), 2, 1, 1), ContractViolation);
    CHECK(genome_length(8, 3, 2) == 48);
  }
}

TEST_CASE("init_population") {
  GaConfig cfg;
  RandomStream r1(9), r2(9);
  const auto p1 = init_population(cfg, 16, r1);
  const auto p2 = init_population(cfg, 16, r2);
  REQUIRE(p1.members.size() == 50);
  CHECK(p1.generation == 0);
  for (std::size_t i = 0; i < p1.members.size(); ++i) {
    CHECK(p1.members[i].size() == 16);
    CHECK(p1.members[i] == p2.members[i]);
    CHECK_FALSE(p1.members[i].cached_fitness().has_value());
  }

  cfg.population_size = 10000;
  RandomStream r3(10);
  const auto big = init_population(cfg, 16, r3);
  for (std::size_t bit = 0; bit < 16; ++bit) {
    double ones = 0.0;
    for (const auto& m : big.members) ones += m.bits()[bit];
    CHECK(std::abs(ones / 10000.0 - 0.5) <= 0.02);
  }
  CHECK_THROWS_AS(init_population(GaConfig{}, 0, r3), ContractViolation);
}

TEST_CASE("roulette_select") {
  SUBCASE("fitness-proportional frequencies") {
    const auto counts = selection_counts(with_fitness({1.0, 3.0}), 100000, 1);
    CHECK(std::abs(counts[0] / 1e5 - 0.25) <= 0.01);
    CHECK(std::abs(counts[1] / 1e5 - 0.75) <= 0.01);
  }
  SUBCASE("zero-fitness member is never chosen") {
    const auto counts = selection_counts(with_fitness({5.0, 0.0}), 100000, 2);
    CHECK(counts[1] == 0);
  }
  SUBCASE("equal fitness is uniform") {
    const auto counts = selection_counts(with_fitness({2.0, 2.0, 2.0, 2.0}), 100000, 3);
    for (auto c : counts) CHECK(std::abs(c / 1e5 - 0.25) <= 0.01);
  }
  SUBCASE("all-zero fitness falls back to uniform") {
    const auto counts = selection_counts(with_fitness({0.0, 0.0}), 100000, 4);
    for (auto c : counts) CHECK(std::abs(c / 1e5 - 0.5) <= 0.01);
  }
  SUBCASE("chi-square goodness of fit at the 0.01 level") {
    const std::vector<double> f{0.5, 1.0, 2.0, 3.5, 0.25, 4.0};
    Population pop;
    for (double v : f) {
      Chromosome c(Genome{1});
      c.set_fitness(v);
      pop.members.push_back(c);
    }
    const double total = 11.25;
    const auto counts = selection_counts(pop, 100000, 5);
    double chi2 = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double expected = 1e5 * f[i] / total;
      chi2 += (counts[i] - expected) * (counts[i] - expected) / expected;
    }
    CHECK(chi2 < oracle::chi2_critical_01(static_cast<int>(f.size()) - 1));
  }
  SUBCASE("missing or negative fitness is rejected") {
    Population pop;
    pop.members.emplace_back(Genome{0});
    RandomStream rng(1);
    CHECK_THROWS_AS(roulette_select(pop, rng), ContractViolation);
    CHECK_THROWS_AS(roulette_select(with_fitness({1.0, -1.0}), rng), ContractViolation);
    CHECK_THROWS_AS(roulette_select(Population{}, rng), ContractViolation);
  }
}

TEST_CASE("crossover") {
  const auto a = Chromosome::from_string("0000");
  const auto b = Chromosome::from_string("1111");
  SUBCASE("fixed cut") {
    const auto [x, y] = crossover_at(a, b, 2);
    CHECK(x.to_string() == "0011");
    CHECK(y.to_string() == "1100");
  }
  SUBCASE("p_c = 0 copies the parents") {
    RandomStream rng(1);
    for (int i = 0; i < 100; ++i) {
      const auto [x, y] = crossover(a, b, 0.0, rng);
      CHECK(x == a);
      CHECK(y == b);
    }
  }
  SUBCASE("p_c = 1 always cuts inside the genome") {
    RandomStream rng(2);
    std::map<std::string, int> seen;
    for (int i = 0; i < 3000; ++i) {
      const auto [x, y] = crossover(a, b, 1.0, rng);
      CHECK(x.to_string() != "0000");
      CHECK(x.to_string() != "1111");
      ++seen[x.to_string()];
    }
    CHECK(seen.size() == 3);
    for (const auto& [k, n] : seen) CHECK(std::abs(n / 3000.0 - 1.0 / 3.0) < 0.04);
  }
  SUBCASE("alleles are conserved per locus and caches cleared") {
    RandomStream rng(3);
    for (int trial = 0; trial < 1000; ++trial) {
      auto p = random_chromosome(12, rng);
      auto q = random_chromosome(12, rng);
      p.set_fitness(1.0);
      q.set_fitness(2.0);
      const auto [x, y] = crossover(p, q, 0.7, rng);
      for (std::size_t i = 0; i < 12; ++i) CHECK(x.bits()[i] + y.bits()[i] == p.bits()[i] + q.bits()[i]);
      CHECK_FALSE(x.cached_fitness().has_value());
      CHECK_FALSE(y.cached_fitness().has_value());
    }
  }
  SUBCASE("length mismatch") {
    RandomStream rng(4);
    CHECK_THROWS_AS(crossover(a, Chromosome::from_string("11"), 0.5, rng), ContractViolation);
    CHECK_THROWS_AS(crossover_at(a, b, 0), ContractViolation);
    CHECK_THROWS_AS(crossover_at(a, b, 4), ContractViolation);
  }
}

TEST_CASE("mutate") {
  RandomStream rng(8);
  auto c = Chromosome::from_string("0110100111");
  c.set_fitness(3.0);
  const auto same = mutate(c, 0.0, rng);
  CHECK(same == c);
  CHECK(same.cached_fitness().has_value());
  const auto comp = mutate(c, 1.0, rng);
  CHECK(comp.to_string() == "1001011000");
  CHECK_FALSE(comp.cached_fitness().has_value());

  const auto zero = Chromosome(Genome(16, 0));
  constexpr int kTrials = 1000000;
  std::size_t flips = 0;
  for (int i = 0; i < kTrials; ++i) {
    const auto m = mutate(zero, 0.001, rng);
    flips += static_cast<std::size_t>(std::count(m.bits().begin(), m.bits().end(), 1));
  }
  const double mean = static_cast<double>(flips) / kTrials;
  CHECK(std::abs(mean - 0.016) <= 0.05 * 0.016);
}

TEST_CASE("exhaustive_oracle") {
  SUBCASE("two-antenna one-bit enumeration") {
    const ChannelSet channels({ChannelMatrix(CMatrix::Ones(1, 2))});
    const auto result = exhaustive_oracle(channel_evaluator(channels, 1.0), 2, 1, 1);
    CHECK(result.candidates == 4);
    // Co-phased columns win; with ||A D|| = 1 the SNR is ||H||^2 / sigma^2 = 2.
    CHECK(result.best_fitness == doctest::Approx(std::log2(3.0)).epsilon(1e-12));
    CHECK(result.best_chromosome.to_string() == "00");
    // Scoring the raw effective channel as if A^H A = I gives |HA|^2 = 4.
    const Evaluator raw = [&channels](const AnalogPrecoder& a) {
      return fitness(effective_channels(channels, a), 1.0, channels.rx_antennas());
    };
    CHECK(exhaustive_oracle(raw, 2, 1, 1).best_fitness == doctest::Approx(std::log2(5.0)).epsilon(1e-12));
  }
  SUBCASE("constant landscape returns the all-zero genome") {
    const auto result = exhaustive_oracle([](const AnalogPrecoder&) { return 1.0; }, 3, 2, 1);
    CHECK(result.best_chromosome.to_string() == "000000");
    CHECK(result.candidates == 64);
  }
  SUBCASE("cap") {
    CHECK_NOTHROW(exhaustive_oracle([](const AnalogPrecoder&) { return 0.0; }, 1, 1, 12));
    try {
      exhaustive_oracle([](const AnalogPrecoder&) { return 0.0; }, 5, 5, 1);
      FAIL("expected refusal");
    } catch (const ContractViolation& e) {
      CHECK(std::string(e.what()).find("24") != std::string::npos);
    }
  }
}

TEST_CASE("evolve") {
  SUBCASE("unique optimum on a four-point space") {
    const Evaluator f = [](const AnalogPrecoder& a) {
      const auto v = encode(a).to_string();
      return v == "11" ? 5.0 : (v == "00" ? 1.0 : 2.0);
    };
    const double best = exhaustive_oracle(f, 2, 1, 1).best_fitness;
    CHECK(best == 5.0);
    GaConfig cfg;
    cfg.population_size = 8;
    cfg.max_generations = 50;
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      RandomStream rng(seed);
      const auto r = evolve(f, cfg, {2, 1, 1}, rng);
      CHECK(r.trace.records.size() == 51);
      CHECK(r.evaluations <= 4);
      CHECK(r.best_fitness <= best);
      if (r.best_fitness == best) {
        ++hits;
        CHECK(r.best_chromosome.to_string() == "11");
      }
    }
    // A population with no 1 at some locus can only reach the optimum by
    // mutation, so a small miss rate is inherent.
    CHECK(hits >= 95);
  }
  SUBCASE("trace invariants, determinism and oracle dominance on channel landscapes") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      RandomStream chan_rng(100 + seed);
      const auto channels = draw_iid_rayleigh_set(std::vector<int>{1, 1}, 3, chan_rng);
      const auto f = channel_evaluator(channels, 1.0);
      GaConfig cfg;
      cfg.population_size = 10;
      cfg.max_generations = 20;
      RandomStream r1(seed), r2(seed);
      const auto a = evolve(f, cfg, {3, 2, 2}, r1);
      const auto b = evolve(f, cfg, {3, 2, 2}, r2);
      CHECK(a.trace.best_nondecreasing());
      CHECK(a.best_chromosome == b.best_chromosome);
      CHECK(a.best_fitness == b.best_fitness);
      REQUIRE(a.trace.records.size() == b.trace.records.size());
      for (std::size_t g = 0; g < a.trace.records.size(); ++g) {
        CHECK(a.trace.records[g].generation == g);
        CHECK(a.trace.records[g].best_fitness == b.trace.records[g].best_fitness);
        CHECK(a.trace.records[g].mean_fitness == b.trace.records[g].mean_fitness);
        CHECK(a.trace.records[g].mean_fitness <= a.trace.records[g].best_fitness + 1e-12);
      }
      CHECK(a.best_fitness == doctest::Approx(f(a.best)).epsilon(1e-12));
      CHECK(a.best_fitness <= exhaustive_oracle(f, 3, 2, 1).best_fitness + 1e-12);
    }
  }
  SUBCASE("evaluator is called once per distinct genome") {
    std::map<std::string, int> calls;
    const Evaluator f = [&calls](const AnalogPrecoder& a) {
      ++calls[encode(a).to_string()];
      return 1.0 + static_cast<double>(a.phase_indices().sum());
    };
    GaConfig cfg;
    cfg.population_size = 20;
    cfg.max_generations = 30;
    cfg.mutation_prob = 0.05;
    RandomStream rng(5);
    const auto r = evolve(f, cfg, {3, 2, 1}, rng);
    for (const auto& [k, n] : calls) CHECK(n == 1);
    CHECK(r.evaluations == calls.size());
  }
  SUBCASE("callback failure aborts with a partial trace") {
    int count = 0;
    const Evaluator f = [&count](const AnalogPrecoder& a) {
      if (++count > 30) throw std::runtime_error("measurement lost");
      return 1.0 + static_cast<double>(a.phase_indices().sum());
    };
    GaConfig cfg;
    cfg.population_size = 10;
    cfg.max_generations = 50;
    cfg.mutation_prob = 0.2;
    RandomStream rng(6);
    try {
      evolve(f, cfg, {4, 2, 1}, rng);
      FAIL("expected abort");
    } catch (const GaAborted& e) {
      CHECK(std::string(e.what()).find("measurement lost") != std::string::npos);
      CHECK_FALSE(e.partial_trace.records.empty());
      CHECK(e.partial_trace.records.size() < 51);
    }
  }
  SUBCASE("invalid fitness values abort") {
    GaConfig cfg;
    cfg.population_size = 4;
    cfg.max_generations = 3;
    RandomStream rng(7);
    CHECK_THROWS_AS(evolve([](const AnalogPrecoder&) { return -1.0; }, cfg, {2, 1, 1}, rng), GaAborted);
    CHECK_THROWS_AS(evolve([](const AnalogPrecoder&) { return std::nan(""); }, cfg, {2, 1, 1}, rng), GaAborted);
  }
  SUBCASE("invalid config is rejected before any evaluation") {
    GaConfig cfg;
    cfg.population_size = 3;
    RandomStream rng(8);
    int calls = 0;
    CHECK_THROWS_AS(evolve([&calls](const AnalogPrecoder&) { return ++calls, 1.0; }, cfg, {2, 1, 1}, rng),
                    ContractViolation);
    CHECK(calls == 0);
  }
}
