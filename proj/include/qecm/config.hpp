#pragma once

#include <json.hpp>
#include <string>

#include "qecm/codes.hpp"
#include "qecm/harness.hpp"
#include "qecm/protocols.hpp"

// Config documents: one JSON object per run with a top-level "kind"
// (check | recover | simulate | analytic | sweep). Complex numbers are
// [re, im] pairs, operators are Pauli-expression strings or nested arrays.
// Errors are InvalidConfig / MissingParam and name the offending field.

namespace qecm {

using json = nlohmann::json;

json load_config_file(const std::string& path);
std::string config_kind(const json& doc);

Tolerances parse_tolerances(const json& doc, const Tolerances& base = default_tolerances());
Matrix parse_operator(const json& value, const std::string& field);
CodeSpace parse_code(const json& value, const Tolerances& tol);
/// `num_qubits` is the register size the channel acts on.
QuantumChannel parse_channel(const json& value, std::size_t num_qubits, const Tolerances& tol);

struct CheckConfig {
  Matrix generator;
  QuantumChannel channel;
  CodeSpace code;
  Tolerances tolerances;
  std::string recovery;  // "polar" or "syndrome"
};
CheckConfig parse_check(const json& doc);

struct SimulateConfig {
  std::string protocol;  // standard | qec | ghz
  std::string recovery;  // syndrome | polar
  ProtocolConfig config;
};
SimulateConfig parse_simulate(const json& doc, std::uint64_t seed);

SweepSpec parse_sweep(const json& doc, std::uint64_t seed);

json to_json(const Matrix& m);
json to_json(const ProtocolConfig& c);
json to_json(const EstimationResult& r);
json to_json(const ConditionReport& r);
json to_json(const RecoveryOperation& r);
json to_json(const SweepSpec& s);

}  // namespace qecm
