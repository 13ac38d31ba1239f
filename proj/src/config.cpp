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

#include "hslnr/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "hslnr/errors.hpp"
#include "json.hpp"

namespace hslnr {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("config: " + msg); }

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
T get_as(const json& obj, const char* key, const T& fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(std::string("bad value for '") + key + "': " + e.what());
  }
}

// Non-negative integers must not silently wrap when read as unsigned.
std::size_t get_count(const json& obj, const char* key, std::size_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) fail(std::string("'") + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

}  // namespace

std::string_view to_string(Scheme s) noexcept {
  switch (s) {
    case Scheme::digital_slnr: return "digital_slnr";
    case Scheme::hybrid_slnr: return "hybrid_slnr";
    case Scheme::digital_zf: return "digital_zf";
    case Scheme::hybrid_zf: return "hybrid_zf";
  }
  return "?";
}

std::string_view to_string(ChannelModel m) noexcept {
  return m == ChannelModel::iid_rayleigh ? "iid_rayleigh" : "los_ula";
}

Scheme parse_scheme(std::string_view name) {
  for (Scheme s : {Scheme::digital_slnr, Scheme::hybrid_slnr, Scheme::digital_zf, Scheme::hybrid_zf}) {
    if (to_string(s) == name) return s;
  }
  fail("unknown scheme '" + std::string(name) + "'");
}

ChannelModel parse_channel_model(std::string_view name) {
  if (name == "iid_rayleigh") return ChannelModel::iid_rayleigh;
  if (name == "los_ula") return ChannelModel::los_ula;
  fail("unknown channel_model '" + std::string(name) + "'");
}

bool is_hybrid(Scheme s) noexcept { return s == Scheme::hybrid_slnr || s == Scheme::hybrid_zf; }
bool is_zero_forcing(Scheme s) noexcept { return s == Scheme::digital_zf || s == Scheme::hybrid_zf; }

void ExperimentConfig::validate() const {
  if (n_tx < 1) fail("n_tx must be positive");
  if (n_users < 1) fail("n_users must be positive");
  if (n_rf < n_users) fail("n_rf must be at least n_users");
  if (static_cast<int>(rx_antennas.size()) != n_users) fail("rx_antennas must list one entry per user");
  if (std::any_of(rx_antennas.begin(), rx_antennas.end(), [](int m) { return m < 1; })) {
    fail("rx_antennas entries must be positive");
  }
  if (resolution_bits < 1 || resolution_bits > AnalogPrecoder::kMaxResolutionBits) {
    fail("resolution_bits must lie in [1, " + std::to_string(AnalogPrecoder::kMaxResolutionBits) + "]");
  }
  if (snr_grid_db.empty()) fail("snr_grid_db must not be empty");
  if (std::any_of(snr_grid_db.begin(), snr_grid_db.end(), [](double x) { return !std::isfinite(x); })) {
    fail("snr_grid_db entries must be finite");
  }
  if (n_channel_realizations < 1) fail("n_channel_realizations must be positive");
  try {
    ga_config().validate();
  } catch (const ContractViolation& e) {
    fail(e.what());
  }
  if (schemes.empty()) fail("schemes must not be empty");
  if (std::set<Scheme>(schemes.begin(), schemes.end()).size() != schemes.size()) fail("schemes contains duplicates");
  const bool single_antenna = std::all_of(rx_antennas.begin(), rx_antennas.end(), [](int m) { return m == 1; });
  for (Scheme s : schemes) {
    if (!is_zero_forcing(s)) continue;
    if (!single_antenna) fail(std::string(to_string(s)) + " requires rx_antennas = 1 for every user");
    if (n_users > n_rf) fail(std::string(to_string(s)) + " requires n_users <= n_rf");
    if (s == Scheme::digital_zf && n_users > n_tx) fail("digital_zf requires n_users <= n_tx");
  }
  if (!(array_spacing_wavelengths > 0.0) || !std::isfinite(array_spacing_wavelengths)) {
    fail("array spacing_wavelengths must be positive");
  }
  if (beam_grid_points < 2) fail("beam_grid_points must be at least 2");
  if (channel_model == ChannelModel::los_ula) {
    if (!los_angles_deg || static_cast<int>(los_angles_deg->size()) != n_users) {
      fail("los_ula requires los_angles_deg with one angle per user");
    }
    for (double a : *los_angles_deg) {
      if (!(a >= -90.0 && a <= 90.0)) fail("los_angles_deg entries must lie in [-90, 90]");
    }
    if (!single_antenna) fail("los_ula channels are single-antenna rows; rx_antennas must be 1");
  }
}

GaConfig ExperimentConfig::ga_config() const {
  GaConfig g = ga;
  g.resolution_bits = resolution_bits;
  g.seed = seed;
  return g;
}

UlaGeometry ExperimentConfig::array() const { return UlaGeometry(n_tx, array_spacing_wavelengths); }

bool ExperimentConfig::has(Scheme s) const noexcept {
  return std::find(schemes.begin(), schemes.end(), s) != schemes.end();
}

ExperimentConfig sum_rate_config() { return ExperimentConfig{}; }

ExperimentConfig convergence_config() {
  ExperimentConfig c;
  c.snr_grid_db = {10.0};
  c.schemes = {Scheme::hybrid_slnr};
  c.n_channel_realizations = 1;
  return c;
}

ExperimentConfig beam_pattern_config() {
  ExperimentConfig c;
  c.channel_model = ChannelModel::los_ula;
  c.los_angles_deg = std::vector<double>{-40.0, 0.0, 40.0};
  c.snr_grid_db = {10.0};
  c.schemes = {Scheme::digital_slnr, Scheme::hybrid_slnr};
  c.n_channel_realizations = 1;
  return c;
}

ExperimentConfig oracle_config() {
  ExperimentConfig c;
  c.n_tx = 4;
  c.n_rf = 2;
  c.n_users = 2;
  c.rx_antennas = {1, 1};
  c.snr_grid_db = {0.0};
  c.n_channel_realizations = 50;
  c.ga.max_generations = 100;
  c.schemes = {Scheme::hybrid_slnr};
  return c;
}

std::string config_to_json(const ExperimentConfig& c, int indent) {
  json j;
  j["n_tx"] = c.n_tx;
  j["n_rf"] = c.n_rf;
  j["n_users"] = c.n_users;
  j["rx_antennas"] = c.rx_antennas;
  j["resolution_bits"] = c.resolution_bits;
  j["snr_grid_db"] = c.snr_grid_db;
  j["n_channel_realizations"] = c.n_channel_realizations;
  j["ga"] = {{"population_size", c.ga.population_size},
             {"max_generations", c.ga.max_generations},
             {"crossover_prob", c.ga.crossover_prob},
             {"mutation_prob", c.ga.mutation_prob},
             {"elitism_count", c.ga.elitism_count}};
  j["channel_model"] = std::string(to_string(c.channel_model));
  j["los_angles_deg"] = c.los_angles_deg ? json(*c.los_angles_deg) : json(nullptr);
  j["array"] = {{"n_elements", c.n_tx}, {"spacing_wavelengths", c.array_spacing_wavelengths}};
  j["beam_grid_points"] = c.beam_grid_points;
  json schemes = json::array();
  for (Scheme s : c.schemes) schemes.push_back(std::string(to_string(s)));
  j["schemes"] = schemes;
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  return j.dump(indent);
}

ExperimentConfig config_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) fail("top level must be an object");
  reject_unknown(j,
                 {"n_tx", "n_rf", "n_users", "rx_antennas", "resolution_bits", "snr_grid_db", "n_channel_realizations",
                  "ga", "channel_model", "los_angles_deg", "array", "beam_grid_points", "schemes", "seed",
                  "output_dir"},
                 "config");

  ExperimentConfig c;
  c.n_tx = get_as<int>(j, "n_tx", c.n_tx);
  c.n_rf = get_as<int>(j, "n_rf", c.n_rf);
  c.n_users = get_as<int>(j, "n_users", c.n_users);
  if (j.contains("rx_antennas")) {
    c.rx_antennas = get_as<std::vector<int>>(j, "rx_antennas", c.rx_antennas);
  } else {
    c.rx_antennas.assign(static_cast<std::size_t>(std::max(c.n_users, 0)), 1);
  }
  c.resolution_bits = get_as<int>(j, "resolution_bits", c.resolution_bits);
  c.snr_grid_db = get_as<std::vector<double>>(j, "snr_grid_db", c.snr_grid_db);
  c.n_channel_realizations = get_count(j, "n_channel_realizations", c.n_channel_realizations);
  if (j.contains("ga")) {
    const json& g = j.at("ga");
    if (!g.is_object()) fail("'ga' must be an object");
    reject_unknown(g, {"population_size", "max_generations", "crossover_prob", "mutation_prob", "elitism_count"}, "ga");
    c.ga.population_size = get_count(g, "population_size", c.ga.population_size);
    c.ga.max_generations = get_count(g, "max_generations", c.ga.max_generations);
    c.ga.crossover_prob = get_as<double>(g, "crossover_prob", c.ga.crossover_prob);
    c.ga.mutation_prob = get_as<double>(g, "mutation_prob", c.ga.mutation_prob);
    c.ga.elitism_count = get_count(g, "elitism_count", c.ga.elitism_count);
  }
  if (j.contains("channel_model")) c.channel_model = parse_channel_model(get_as<std::string>(j, "channel_model", ""));
  if (j.contains("los_angles_deg") && !j.at("los_angles_deg").is_null()) {
    c.los_angles_deg = get_as<std::vector<double>>(j, "los_angles_deg", {});
  }
  if (j.contains("array")) {
    const json& a = j.at("array");
    if (!a.is_object()) fail("'array' must be an object");
    reject_unknown(a, {"n_elements", "spacing_wavelengths"}, "array");
    if (a.contains("n_elements") && get_as<int>(a, "n_elements", 0) != c.n_tx) {
      fail("array n_elements must equal n_tx");
    }
    c.array_spacing_wavelengths = get_as<double>(a, "spacing_wavelengths", c.array_spacing_wavelengths);
  }
  c.beam_grid_points = get_count(j, "beam_grid_points", c.beam_grid_points);
  if (j.contains("schemes")) {
    c.schemes.clear();
    for (const auto& name : get_as<std::vector<std::string>>(j, "schemes", {})) c.schemes.push_back(parse_scheme(name));
  }
  if (j.contains("seed")) {
    const json& s = j.at("seed");
    if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() && s.get<long long>() < 0)) {
      fail("'seed' must be a non-negative integer");
    }
    c.seed = s.get<std::uint64_t>();
  }
  c.output_dir = get_as<std::string>(j, "output_dir", c.output_dir);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_json(buf.str());
}

// Output location is not an experiment parameter and is left out.
std::uint64_t config_hash(const ExperimentConfig& config) {
  ExperimentConfig keyed = config;
  keyed.output_dir.clear();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : config_to_json(keyed, -1)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace hslnr
