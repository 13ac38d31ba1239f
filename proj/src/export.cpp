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

#include "hslnr/export.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

#include "hslnr/errors.hpp"
#include "json.hpp"

#ifndef HSLNR_VERSION
#define HSLNR_VERSION "0.0.0"
#endif

namespace hslnr {
namespace {

using nlohmann::ordered_json;

constexpr std::string_view kSnrDefinition =
    "snr_db = -10*log10(noise_power); unit-variance channel entries; per-node ||A D_l|| = 1";

// Shortest representation that round-trips; "inf"/"-inf"/"nan" otherwise.
std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{}", x);
}

void csv_preamble(std::ostream& os, const ExportMetadata& meta, std::string_view extra_key = {},
                  std::string_view extra_value = {}) {
  os << "# tool: hslnr " << meta.tool_version << '\n';
  os << "# command: " << meta.command << '\n';
  os << "# config_hash: " << fmt::format("{:016x}", meta.config_hash) << '\n';
  os << "# seed: " << meta.seed << '\n';
  os << "# snr_definition: " << kSnrDefinition << '\n';
  if (!extra_key.empty()) os << "# " << extra_key << ": " << extra_value << '\n';
}

ordered_json json_metadata(const ExportMetadata& meta) {
  ordered_json m;
  m["tool"] = "hslnr";
  m["version"] = meta.tool_version;
  m["command"] = meta.command;
  m["config_hash"] = fmt::format("{:016x}", meta.config_hash);
  m["seed"] = meta.seed;
  m["snr_definition"] = kSnrDefinition;
  return m;
}

// JSON has no infinities; -inf dB (zero gain) is written as null.
ordered_json json_number(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }

}  // namespace

OutputFormat parse_output_format(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw ConfigError("unknown output format '" + std::string(name) + "' (expected csv or json)");
}

std::string_view file_extension(OutputFormat format) noexcept { return format == OutputFormat::csv ? "csv" : "json"; }

std::string_view library_version() noexcept { return HSLNR_VERSION; }

ExportMetadata make_metadata(const ExperimentConfig& config, std::string_view command) {
  return {std::string(library_version()), std::string(command), config_hash(config), config.seed};
}

void write_sweep(std::ostream& os, const SweepTable& table, const ExportMetadata& meta, OutputFormat format) {
  if (format == OutputFormat::csv) {
    csv_preamble(os, meta);
    os << "scheme,snr_db,mean_sum_rate_bps_hz,std_err,n_realizations\n";
    for (const auto& r : table.rows) {
      os << to_string(r.scheme) << ',' << num(r.snr_db) << ',' << num(r.mean_sum_rate) << ',' << num(r.std_err) << ','
         << r.n_realizations << '\n';
    }
    return;
  }
  ordered_json doc;
  doc["metadata"] = json_metadata(meta);
  doc["rows"] = ordered_json::array();
  for (const auto& r : table.rows) {
    doc["rows"].push_back({{"scheme", std::string(to_string(r.scheme))},
                           {"snr_db", r.snr_db},
                           {"mean_sum_rate_bps_hz", r.mean_sum_rate},
                           {"std_err", r.std_err},
                           {"n_realizations", r.n_realizations}});
  }
  os << doc.dump(2) << '\n';
}

void write_trace(std::ostream& os, const GaTrace& trace, const ExportMetadata& meta, OutputFormat format) {
  if (format == OutputFormat::csv) {
    csv_preamble(os, meta);
    os << "generation,best_fitness,mean_fitness\n";
    for (const auto& r : trace.records) {
      os << r.generation << ',' << num(r.best_fitness) << ',' << num(r.mean_fitness) << '\n';
    }
    return;
  }
  ordered_json doc;
  doc["metadata"] = json_metadata(meta);
  doc["rows"] = ordered_json::array();
  for (const auto& r : trace.records) {
    doc["rows"].push_back({{"generation", r.generation}, {"best_fitness", r.best_fitness}, {"mean_fitness", r.mean_fitness}});
  }
  os << doc.dump(2) << '\n';
}

void write_beams(std::ostream& os, const SchemeBeamPattern& pattern, const ExportMetadata& meta, OutputFormat format) {
  const auto& p = pattern.pattern;
  const double to_deg = 180.0 / std::numbers::pi;
  if (format == OutputFormat::csv) {
    csv_preamble(os, meta, "scheme", to_string(pattern.scheme));
    os << "angle_deg,node,gain_linear,gain_db\n";
    for (std::size_t l = 0; l < p.gain_per_node.size(); ++l) {
      for (std::size_t i = 0; i < p.angles.size(); ++i) {
        const double g = p.gain_per_node[l][i];
        os << num(p.angles[i] * to_deg) << ',' << l << ',' << num(g) << ',' << num(to_db(g)) << '\n';
      }
    }
    return;
  }
  ordered_json doc;
  doc["metadata"] = json_metadata(meta);
  doc["metadata"]["scheme"] = std::string(to_string(pattern.scheme));
  doc["rows"] = ordered_json::array();
  for (std::size_t l = 0; l < p.gain_per_node.size(); ++l) {
    for (std::size_t i = 0; i < p.angles.size(); ++i) {
      const double g = p.gain_per_node[l][i];
      doc["rows"].push_back(
          {{"angle_deg", p.angles[i] * to_deg}, {"node", l}, {"gain_linear", g}, {"gain_db", json_number(to_db(g))}});
    }
  }
  os << doc.dump(2) << '\n';
}

}  // namespace hslnr
