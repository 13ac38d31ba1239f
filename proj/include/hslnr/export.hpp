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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "hslnr/config.hpp"
#include "hslnr/harness.hpp"

namespace hslnr {

enum class OutputFormat { csv, json };

OutputFormat parse_output_format(std::string_view name);
std::string_view file_extension(OutputFormat format) noexcept;

struct ExportMetadata {
  std::string tool_version;
  std::string command;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
};

ExportMetadata make_metadata(const ExperimentConfig& config, std::string_view command);
std::string_view library_version() noexcept;

// CSV output starts with '#'-prefixed metadata lines, then the header row.
// Columns:
//   sweep: scheme,snr_db,mean_sum_rate_bps_hz,std_err,n_realizations
//   trace: generation,best_fitness,mean_fitness
//   beams: angle_deg,node,gain_linear,gain_db   (one document per scheme)
// JSON output is {"metadata": {...}, "rows": [{column: value, ...}, ...]}.
void write_sweep(std::ostream& os, const SweepTable& table, const ExportMetadata& meta, OutputFormat format);
void write_trace(std::ostream& os, const GaTrace& trace, const ExportMetadata& meta, OutputFormat format);
void write_beams(std::ostream& os, const SchemeBeamPattern& pattern, const ExportMetadata& meta, OutputFormat format);

}  // namespace hslnr
