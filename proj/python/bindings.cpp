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

// Python bindings: thin wrappers over the C++ core with NumPy/Eigen conversion.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "hslnr/config.hpp"
#include "hslnr/errors.hpp"
#include "hslnr/export.hpp"
#include "hslnr/ga.hpp"
#include "hslnr/harness.hpp"
#include "hslnr/metrics.hpp"
#include "hslnr/precoding.hpp"

namespace py = pybind11;
using namespace hslnr;

namespace {

ChannelSet to_channels(const std::vector<CMatrix>& mats) {
  std::vector<ChannelMatrix> users;
  users.reserve(mats.size());
  for (const auto& m : mats) users.emplace_back(m);
  return ChannelSet(std::move(users));
}

std::vector<CMatrix> from_channels(const ChannelSet& set) {
  std::vector<CMatrix> out;
  for (const auto& h : set) out.push_back(h.entries());
  return out;
}

DigitalPrecoderSet to_precoders(const std::vector<CVector>& vectors, double noise_power) {
  DigitalPrecoderSet d;
  d.vectors = vectors;
  d.noise_power = noise_power;
  d.rx_antennas.assign(vectors.size(), 1);
  d.degenerate.assign(vectors.size(), false);
  return d;
}

py::dict solution_dict(const SlnrSolution& s) {
  py::dict d;
  d["precoders"] = s.precoders.vectors;
  d["lambda_max"] = s.lambda_max;
  d["degenerate"] = s.precoders.degenerate;
  return d;
}

py::list trace_rows(const GaTrace& trace) {
  py::list rows;
  for (const auto& r : trace.records) {
    py::dict row;
    row["generation"] = r.generation;
    row["best_fitness"] = r.best_fitness;
    row["mean_fitness"] = r.mean_fitness;
    row["best"] = r.best.to_string();
    rows.append(row);
  }
  return rows;
}

ExperimentConfig resolve(const std::optional<std::string>& json, ExperimentConfig fallback) {
  ExperimentConfig c = json ? config_from_json(*json) : std::move(fallback);
  c.validate();
  return c;
}

}  // namespace

PYBIND11_MODULE(hybrid_slnr, m) {
  m.doc() = "Hybrid analog/digital SLNR beamforming with a genetic analog-precoder search";
  m.attr("__version__") = std::string(library_version());

  // Bases first: the most recently registered translator is tried first.
  auto numerical = py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<SingularityError>(m, "SingularityError", numerical.ptr());
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<UnsupportedConfiguration>(m, "UnsupportedConfiguration", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<GaAborted>(m, "GaAborted", PyExc_RuntimeError);

  py::class_<AnalogPrecoder>(m, "AnalogPrecoder")
      .def(py::init<IndexMatrix, int>(), py::arg("phase_indices"), py::arg("resolution_bits"))
      .def_property_readonly("matrix", &AnalogPrecoder::matrix)
      .def_property_readonly("phase_indices", &AnalogPrecoder::phase_indices)
      .def_property_readonly("resolution_bits", &AnalogPrecoder::resolution_bits)
      .def_property_readonly("n_tx", &AnalogPrecoder::n_tx)
      .def_property_readonly("n_rf", &AnalogPrecoder::n_rf)
      .def("__repr__", [](const AnalogPrecoder& a) {
        return "AnalogPrecoder(n_tx=" + std::to_string(a.n_tx()) + ", n_rf=" + std::to_string(a.n_rf()) +
               ", bits=" + std::to_string(a.resolution_bits()) + ")";
      });

  m.def(
      "draw_iid_rayleigh",
      [](const std::vector<int>& rx_antennas, int n_tx, std::uint64_t seed) {
        RandomStream rng(seed);
        return from_channels(draw_iid_rayleigh_set(rx_antennas, n_tx, rng));
      },
      py::arg("rx_antennas"), py::arg("n_tx"), py::arg("seed"),
      "Seeded i.i.d. CN(0, 1) channels, one matrix per user.");
  m.def(
      "steering_vector",
      [](int n_elements, double angle, double spacing) { return steering_vector(UlaGeometry(n_elements, spacing), angle); },
      py::arg("n_elements"), py::arg("angle"), py::arg("spacing") = 0.5);
  m.def(
      "effective_channel",
      [](const CMatrix& h, const AnalogPrecoder& a) { return effective_channel(ChannelMatrix(h), a).entries(); },
      py::arg("h"), py::arg("analog"));

  m.def(
      "slnr_precoder",
      [](const std::vector<CMatrix>& channels, const AnalogPrecoder& a, double noise_power) {
        const auto set = to_channels(channels);
        return solution_dict(slnr_digital_precoder(effective_channels(set, a), noise_power, set.rx_antennas(), a));
      },
      py::arg("channels"), py::arg("analog"), py::arg("noise_power"),
      "SLNR digital precoders behind an analog front; each satisfies ||A d|| = 1.");
  m.def(
      "slnr_fully_digital_precoder",
      [](const std::vector<CMatrix>& channels, double noise_power) {
        return solution_dict(slnr_fully_digital_precoder(to_channels(channels), noise_power));
      },
      py::arg("channels"), py::arg("noise_power"));
  m.def(
      "zf_precoder",
      [](const std::vector<CMatrix>& channels, const AnalogPrecoder& a, double noise_power) {
        return zf_digital_precoder(effective_channels(to_channels(channels), a), noise_power, a).vectors;
      },
      py::arg("channels"), py::arg("analog"), py::arg("noise_power"));

  m.def(
      "sinr",
      [](const std::vector<CMatrix>& channels, const AnalogPrecoder& a, const std::vector<CVector>& precoders,
         double noise_power) { return sinr(to_channels(channels), a, to_precoders(precoders, noise_power), noise_power); },
      py::arg("channels"), py::arg("analog"), py::arg("precoders"), py::arg("noise_power"));
  m.def(
      "sum_rate", [](const std::vector<double>& sinrs) { return sum_rate(sinrs); }, py::arg("sinrs"));
  m.def(
      "fitness",
      [](const std::vector<CMatrix>& channels, const AnalogPrecoder& a, double noise_power) {
        const auto set = to_channels(channels);
        return fitness(effective_channels(set, a), noise_power, set.rx_antennas(), a);
      },
      py::arg("channels"), py::arg("analog"), py::arg("noise_power"),
      "Sum of log2(1 + lambda_max) over nodes for the given analog precoder.");
  m.def(
      "beam_pattern",
      [](const AnalogPrecoder& a, const std::vector<CVector>& precoders, const std::vector<double>& angles,
         double spacing) {
        const UlaGeometry ula(static_cast<int>(a.n_tx()), spacing);
        return beam_pattern(ula, a, to_precoders(precoders, 1.0), angles).gain_per_node;
      },
      py::arg("analog"), py::arg("precoders"), py::arg("angles"), py::arg("spacing") = 0.5);

  m.def(
      "decode",
      [](const std::string& bits, int n_tx, int n_rf, int resolution_bits) {
        return decode(Chromosome::from_string(bits), n_tx, n_rf, resolution_bits);
      },
      py::arg("bits"), py::arg("n_tx"), py::arg("n_rf"), py::arg("resolution_bits"));
  m.def(
      "encode", [](const AnalogPrecoder& a) { return encode(a).to_string(); }, py::arg("analog"));
  m.def(
      "evolve",
      [](const Evaluator& evaluate, int n_tx, int n_rf, int n_users, std::size_t population_size,
         std::size_t max_generations, double crossover_prob, double mutation_prob, std::size_t elitism_count,
         int resolution_bits, std::uint64_t seed) {
        GaConfig cfg{population_size, max_generations, crossover_prob, mutation_prob, elitism_count, resolution_bits,
                     seed};
        RandomStream rng(seed);
        const auto r = evolve(evaluate, cfg, GaDimensions{n_tx, n_rf, n_users}, rng);
        py::dict d;
        d["best"] = r.best;
        d["best_fitness"] = r.best_fitness;
        d["best_bits"] = r.best_chromosome.to_string();
        d["trace"] = trace_rows(r.trace);
        d["evaluations"] = r.evaluations;
        return d;
      },
      py::arg("evaluate"), py::arg("n_tx"), py::arg("n_rf"), py::arg("n_users") = 1, py::arg("population_size") = 50,
      py::arg("max_generations") = 200, py::arg("crossover_prob") = 0.7, py::arg("mutation_prob") = 0.001,
      py::arg("elitism_count") = 1, py::arg("resolution_bits") = 1, py::arg("seed") = 0,
      "Genetic search over quantized analog precoders; `evaluate` maps an AnalogPrecoder to a fitness.");
  m.def(
      "exhaustive_oracle",
      [](const Evaluator& evaluate, int n_tx, int n_rf, int resolution_bits) {
        const auto r = exhaustive_oracle(evaluate, n_tx, n_rf, resolution_bits);
        py::dict d;
        d["best"] = r.best;
        d["best_fitness"] = r.best_fitness;
        d["best_bits"] = r.best_chromosome.to_string();
        d["candidates"] = r.candidates;
        return d;
      },
      py::arg("evaluate"), py::arg("n_tx"), py::arg("n_rf"), py::arg("resolution_bits") = 1);

  m.def(
      "default_config",
      [](const std::string& name) {
        if (name == "sweep") return config_to_json(sum_rate_config());
        if (name == "trace") return config_to_json(convergence_config());
        if (name == "beams") return config_to_json(beam_pattern_config());
        if (name == "oracle-check") return config_to_json(oracle_config());
        throw ContractViolation("default_config: unknown experiment '" + name + "'");
      },
      py::arg("name"), "Default experiment config as JSON: sweep, trace, beams or oracle-check.");
  m.def(
      "run_sum_rate_sweep",
      [](const std::optional<std::string>& config_json, std::size_t threads) {
        const auto table = run_sum_rate_sweep(resolve(config_json, sum_rate_config()), {threads});
        py::list rows;
        for (const auto& r : table.rows) {
          py::dict row;
          row["scheme"] = std::string(to_string(r.scheme));
          row["snr_db"] = r.snr_db;
          row["mean_sum_rate_bps_hz"] = r.mean_sum_rate;
          row["std_err"] = r.std_err;
          row["n_realizations"] = r.n_realizations;
          rows.append(row);
        }
        return rows;
      },
      py::arg("config_json") = py::none(), py::arg("threads") = 1);
  m.def(
      "run_convergence_trace",
      [](const std::optional<std::string>& config_json) {
        return trace_rows(run_convergence_trace(resolve(config_json, convergence_config())).ga.trace);
      },
      py::arg("config_json") = py::none());
  m.def(
      "run_oracle_check",
      [](const std::optional<std::string>& config_json, std::size_t runs, std::size_t threads) {
        const auto r = run_oracle_check(resolve(config_json, oracle_config()), runs, {threads});
        py::dict d;
        d["runs"] = r.runs;
        d["hits"] = r.hits;
        d["exceeded"] = r.exceeded;
        d["hit_rate"] = r.hit_rate();
        return d;
      },
      py::arg("config_json") = py::none(), py::arg("runs") = 50, py::arg("threads") = 1);
}
