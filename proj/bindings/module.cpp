#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

#include "fedcodec/baselines.hpp"
#include "fedcodec/bitcode.hpp"
#include "fedcodec/codec.hpp"
#include "fedcodec/errors.hpp"
#include "fedcodec/experiments.hpp"
#include "fedcodec/quantizer.hpp"
#include "fedcodec/rd_control.hpp"
#include "fedcodec/rng.hpp"
#include "fedcodec/transforms.hpp"

namespace py = pybind11;
using namespace fedcodec;

namespace {

Quantizer parse_quantizer(const std::string& name) {
  if (name == "round") return Quantizer::round;
  if (name == "stochastic") return Quantizer::stochastic;
  if (name == "dithered") return Quantizer::dithered;
  throw std::invalid_argument("unknown quantizer '" + name + "'");
}

Code parse_code(const std::string& name) {
  if (name == "gamma") return Code::gamma;
  if (name == "delta") return Code::delta;
  throw std::invalid_argument("unknown code '" + name + "'");
}

std::vector<uint8_t> to_bytes(const py::bytes& blob) {
  std::string s = blob;
  return std::vector<uint8_t>(s.begin(), s.end());
}

py::bytes from_bytes(const std::vector<uint8_t>& bytes) {
  return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

}  // namespace

PYBIND11_MODULE(_fedcodec, m) {
  m.doc() = "Stateless client-update codec and rate-distortion tools";

  py::register_exception<CorruptStreamError>(m, "CorruptStreamError");
  py::register_exception<InfeasibleBudgetError>(m, "InfeasibleBudgetError");
  py::register_exception<ConfigError>(m, "ConfigError");

  m.attr("CONTAINER_VERSION") = kFormatVersion;
  m.attr("HEADER_BYTES") = kHeaderBytes;

  m.def(
      "gamma_encode", [](uint64_t n) { return gamma_encode(n).to_string(); },
      py::arg("n"), "Elias gamma codeword of n as a '0'/'1' string.");
  m.def(
      "gamma_decode",
      [](const std::string& bits) {
        BitString b = BitString::from_string(bits);
        BitReader r(b);
        return gamma_decode(r);
      },
      py::arg("bits"));
  m.def(
      "delta_encode", [](uint64_t n) { return delta_encode(n).to_string(); },
      py::arg("n"), "Elias delta codeword of n as a '0'/'1' string.");
  m.def(
      "delta_decode",
      [](const std::string& bits) {
        BitString b = BitString::from_string(bits);
        BitReader r(b);
        return delta_decode(r);
      },
      py::arg("bits"));
  m.def("gamma_length", &gamma_length, py::arg("n"));
  m.def("delta_length", &delta_length, py::arg("n"));

  m.def(
      "round_uniform",
      [](const std::vector<double>& u, double step) {
        return round_uniform(u, step);
      },
      py::arg("u"), py::arg("step"));
  m.def(
      "stochastic_round",
      [](const std::vector<double>& u, double step, uint64_t seed) {
        Rng rng(seed);
        return stochastic_round(u, step, rng);
      },
      py::arg("u"), py::arg("step"), py::arg("seed"));

  m.def(
      "encode",
      [](const std::vector<double>& u, double delta,
         const std::string& quantizer, const std::string& code,
         uint64_t seed) {
        Rng rng(seed);
        EncodedUpdate e = encode_update(u, delta, rng, parse_code(code),
                                        parse_quantizer(quantizer));
        return from_bytes(serialize(e));
      },
      py::arg("u"), py::arg("delta"), py::arg("quantizer") = "stochastic",
      py::arg("code") = "gamma", py::arg("seed") = 0,
      "Quantize + entropy-code u into a container (bytes).");
  m.def(
      "decode",
      [](const py::bytes& blob) {
        return decode_container(deserialize_update(to_bytes(blob)));
      },
      py::arg("blob"), "Decode any container (main codec or baselines).");
  m.def(
      "payload_bits",
      [](const py::bytes& blob) {
        return deserialize_update(to_bytes(blob)).payload.size();
      },
      py::arg("blob"));

  m.def(
      "randomized_hadamard",
      [](const std::vector<double>& u, uint64_t seed) {
        return randomized_hadamard(u, seed);
      },
      py::arg("u"), py::arg("seed"));
  m.def(
      "inverse_hadamard",
      [](const std::vector<double>& y, uint64_t seed, size_t original_d) {
        return inverse_hadamard(y, seed, original_d);
      },
      py::arg("y"), py::arg("seed"), py::arg("original_d"));
  m.def(
      "normalize",
      [](const std::vector<double>& u) { return normalize(u); },
      py::arg("u"));

  m.def(
      "client_vote",
      [](const std::vector<double>& u, const std::vector<double>& grid,
         double lam, uint64_t seed) {
        Rng rng(seed);
        return client_vote(u, grid, lam, rng);
      },
      py::arg("u"), py::arg("grid"), py::arg("lambda_"), py::arg("seed"));
  m.def(
      "vote_histogram",
      [](const std::vector<std::vector<double>>& updates,
         const std::vector<double>& grid, double lam, uint64_t seed) {
        return vote_histogram(updates, grid, lam, seed);
      },
      py::arg("updates"), py::arg("grid"), py::arg("lambda_"),
      py::arg("seed"));
  m.def(
      "rd_sweep",
      [](const std::vector<std::vector<double>>& updates,
         const std::vector<double>& grid, uint64_t seed) {
        std::vector<RdPoint> curve = rd_sweep(updates, grid, seed);
        py::list rows;
        for (const RdPoint& p : curve) {
          py::dict row;
          row["delta"] = p.delta;
          row["mean_rate_bits_per_elem"] = p.mean_rate_bits_per_elem;
          row["mean_distortion_per_elem"] = p.mean_distortion_per_elem;
          row["mean_entropy_bits"] = p.mean_entropy_bits;
          rows.append(row);
        }
        return rows;
      },
      py::arg("updates"), py::arg("grid"), py::arg("seed"));
  m.def("log_grid", &log_grid, py::arg("lo"), py::arg("hi"), py::arg("count"));

  m.def(
      "run_experiment",
      [](const std::string& name, const std::string& config_json) {
        ExperimentOutput out = run_experiment(name, config_json);
        return py::make_tuple(out.csv, out.manifest);
      },
      py::arg("name"), py::arg("config_json"),
      "Run a named experiment; returns (csv, manifest_json).");
}
