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

#include "hslnr/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "hslnr/config.hpp"
#include "hslnr/errors.hpp"
#include "hslnr/export.hpp"
#include "hslnr/harness.hpp"

namespace hslnr {
namespace {

namespace fs = std::filesystem;

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string format = "csv";
  std::size_t threads = 1;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--config", opt.config_path, "Experiment config (JSON)");
  cmd->add_option("--seed", opt.seed, "Override the config seed");
  cmd->add_option("--out", opt.out_dir, "Output directory (default: config output_dir)");
  cmd->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--threads", opt.threads, "Worker threads for Monte Carlo realizations")
      ->check(CLI::PositiveNumber);
}

ExperimentConfig resolve_config(const CommonOptions& opt, ExperimentConfig fallback) {
  ExperimentConfig config = opt.config_path.empty() ? std::move(fallback) : load_config(opt.config_path);
  if (opt.seed) config.seed = *opt.seed;
  if (!opt.out_dir.empty()) config.output_dir = opt.out_dir;
  config.validate();
  return config;
}

class OutputFile {
 public:
  OutputFile(const ExperimentConfig& config, const std::string& stem, OutputFormat format)
      : path_(fs::path(config.output_dir) / (stem + "." + std::string(file_extension(format)))) {
    std::error_code ec;
    fs::create_directories(path_.parent_path(), ec);
    stream_.open(path_, std::ios::binary | std::ios::trunc);
    if (!stream_) throw std::ios_base::failure("cannot write '" + path_.string() + "'");
  }
  std::ostream& stream() { return stream_; }
  const fs::path& path() const { return path_; }
  void close() {
    stream_.close();
    if (!stream_) throw std::ios_base::failure("failed writing '" + path_.string() + "'");
  }

 private:
  fs::path path_;
  std::ofstream stream_;
};

int run_sweep(const CommonOptions& opt, std::ostream& out) {
  const ExperimentConfig config = resolve_config(opt, sum_rate_config());
  const OutputFormat format = parse_output_format(opt.format);
  const SweepTable table = run_sum_rate_sweep(config, {opt.threads});
  OutputFile file(config, "sweep", format);
  write_sweep(file.stream(), table, make_metadata(config, "sweep"), format);
  file.close();
  out << fmt::format("sweep: {} realizations, seed {}\n", config.n_channel_realizations, config.seed);
  out << fmt::format("{:<14}{:>9}{:>14}{:>11}\n", "scheme", "snr_db", "sum_rate", "std_err");
  for (const auto& r : table.rows) {
    out << fmt::format("{:<14}{:>9.2f}{:>14.4f}{:>11.4f}\n", to_string(r.scheme), r.snr_db, r.mean_sum_rate, r.std_err);
  }
  out << fmt::format("max | ||A D|| - 1 |: {:.3g}; degenerate nodes: {}; singular ZF: {}\n",
                     table.diagnostics.max_norm_deviation, table.diagnostics.degenerate_nodes,
                     table.diagnostics.zf_singular);
  out << "wrote " << file.path().string() << '\n';
  return 0;
}

int run_trace(const CommonOptions& opt, std::optional<double> snr_db, std::ostream& out) {
  ExperimentConfig config = resolve_config(opt, convergence_config());
  if (snr_db) config.snr_grid_db = {*snr_db};
  const OutputFormat format = parse_output_format(opt.format);
  const ConvergenceResult result = run_convergence_trace(config);
  OutputFile file(config, "trace", format);
  write_trace(file.stream(), result.ga.trace, make_metadata(config, "trace"), format);
  file.close();
  const auto& recs = result.ga.trace.records;
  out << fmt::format("trace: {} at {} dB, {} generations, seed {}\n", to_string(result.scheme), result.snr_db,
                     recs.size() - 1, config.seed);
  out << fmt::format("generation 0: best {:.4f}, mean {:.4f}\n", recs.front().best_fitness, recs.front().mean_fitness);
  out << fmt::format("generation {}: best {:.4f}, mean {:.4f}\n", recs.back().generation, recs.back().best_fitness,
                     recs.back().mean_fitness);
  out << fmt::format("distinct fitness evaluations: {}\n", result.ga.evaluations);
  out << "wrote " << file.path().string() << '\n';
  return 0;
}

int run_beams(const CommonOptions& opt, std::ostream& out) {
  const ExperimentConfig config = resolve_config(opt, beam_pattern_config());
  const OutputFormat format = parse_output_format(opt.format);
  const BeamPatternResult result = run_beam_pattern(config);
  const double to_deg = 180.0 / std::numbers::pi;
  out << fmt::format("beams: {} nodes at SNR {} dB\n", result.node_angles_rad.size(), result.snr_db);
  for (const auto& p : result.patterns) {
    OutputFile file(config, "beams_" + std::string(to_string(p.scheme)), format);
    write_beams(file.stream(), p, make_metadata(config, "beams"), format);
    file.close();
    out << fmt::format("{}: max sidelobe {:.2f} dB; peaks at", to_string(p.scheme), to_db(p.max_sidelobe));
    for (const auto& gains : p.pattern.gain_per_node) {
      const auto it = std::max_element(gains.begin(), gains.end());
      out << fmt::format(" {:.2f}", p.pattern.angles[static_cast<std::size_t>(it - gains.begin())] * to_deg);
    }
    out << " deg\n";
    out << "wrote " << file.path().string() << '\n';
  }
  const auto* digital = result.find(Scheme::digital_slnr);
  const auto* hybrid = result.find(Scheme::hybrid_slnr);
  if (digital && hybrid) {
    out << fmt::format("hybrid sidelobe above digital max sidelobe: {}\n",
                       hybrid->max_sidelobe > digital->max_sidelobe ? "yes" : "no");
  }
  return 0;
}

int run_oracle(const CommonOptions& opt, std::size_t runs, std::ostream& out) {
  const ExperimentConfig config = resolve_config(opt, oracle_config());
  const OracleCheckResult result = run_oracle_check(config, runs, {opt.threads});
  out << fmt::format("oracle-check: N_T={} N_RF={} K={} B={}, {} runs, seed {}\n", config.n_tx, config.n_rf,
                     config.n_users, config.resolution_bits, result.runs, config.seed);
  out << fmt::format("GA reached the exhaustive maximum in {}/{} runs (hit rate {:.3f}); exceeded: {}\n", result.hits,
                     result.runs, result.hit_rate(), result.exceeded);
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hybrid SLNR beamforming experiments"};
  app.require_subcommand(1);
  CommonOptions opt;
  std::optional<double> snr_db;
  std::size_t runs = 50;

  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sum rate versus SNR");
  add_common(sweep, opt);
  auto* trace = app.add_subcommand("trace", "GA fitness per generation on one realization");
  add_common(trace, opt);
  trace->add_option("--snr-db", snr_db, "Single SNR point (overrides snr_grid_db)");
  auto* beams = app.add_subcommand("beams", "Beam patterns for line-of-sight nodes");
  add_common(beams, opt);
  auto* oracle = app.add_subcommand("oracle-check", "GA against exhaustive search on a small instance");
  add_common(oracle, opt);
  oracle->add_option("--runs", runs, "Number of seeded runs")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "hslnr: " << e.what() << "\n" << "run with --help for usage\n";
    return 2;
  }

  try {
    if (*sweep) return run_sweep(opt, out);
    if (*trace) return run_trace(opt, snr_db, out);
    if (*beams) return run_beams(opt, out);
    if (*oracle) return run_oracle(opt, runs, out);
  } catch (const ConfigError& e) {
    err << "hslnr: " << e.what() << '\n';
    return 2;
  } catch (const UnsupportedConfiguration& e) {
    err << "hslnr: " << e.what() << '\n';
    return 2;
  } catch (const GaAborted& e) {
    err << "hslnr: " << e.what() << " (after " << e.partial_trace.records.size() << " generations)\n";
    return 1;
  } catch (const std::exception& e) {
    err << "hslnr: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace hslnr
