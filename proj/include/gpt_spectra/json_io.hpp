#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "gpt_spectra/axioms.hpp"
#include "gpt_spectra/majorize.hpp"
#include "gpt_spectra/purity.hpp"
#include "gpt_spectra/spectral.hpp"
#include "gpt_spectra/theory.hpp"

namespace gpt::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

namespace detail {

inline void write_number(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  out += s;
}

inline void write(std::string& out, const json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + json(it.key()).dump() + ": ";
        write(out, it.value(), indent, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      out += "[";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",";
        if (!flat) out += "\n" + pad;
        first = false;
        write(out, e, indent, depth + 1);
      }
      if (!flat) out += "\n" + close_pad;
      out += "]";
      return;
    }
    case json::value_t::number_float:
      write_number(out, j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

inline const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw Error(ErrorCode::InvalidInput, std::string("missing field '") + key + "'");
  return j.at(key);
}

inline double number(const json& j) {
  if (!j.is_number()) throw Error(ErrorCode::InvalidInput, "expected a number");
  return j.get<double>();
}

}  // namespace detail

/// Serializes with every float at 17 significant digits; object keys are
/// sorted, so equal values give byte-identical text.
inline std::string dump(const json& j, int indent = 2) {
  std::string out;
  detail::write(out, j, indent, 0);
  out += "\n";
  return out;
}

inline json vector_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::vector<double> doubles_from_json(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::InvalidInput, "expected an array of numbers");
  std::vector<double> out;
  for (const auto& e : j) out.push_back(detail::number(e));
  return out;
}

inline Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw Error(ErrorCode::InvalidInput, "expected a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(doubles_from_json(j.front()).size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto row = doubles_from_json(j.at(static_cast<std::size_t>(i)));
    if (static_cast<Eigen::Index>(row.size()) != cols) throw Error(ErrorCode::InvalidInput, "ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = row[static_cast<std::size_t>(c)];
  }
  return m;
}

namespace detail {

template <class Tag>
json element_to_json(const Element<Tag>& e) {
  json j;
  j["schema"] = kSchemaVersion;
  j["theory"] = std::string(e.theory().name());
  j["dim"] = e.theory().dim();
  j["data"] = e.theory().is_quantum() ? matrix_to_json(e.matrix()) : vector_to_json(e.coords());
  return j;
}

template <class Tag>
Element<Tag> element_from_json(const json& j) {
  const std::string theory_name = require(j, "theory").get<std::string>();
  const json& dim = require(j, "dim");
  if (!dim.is_number_integer()) throw Error(ErrorCode::InvalidInput, "dim must be an integer");
  const Theory theory = Theory::from_name(theory_name, dim.get<int>());
  const json& data = require(j, "data");
  if (theory.is_quantum()) return Element<Tag>::from_matrix(theory, matrix_from_json(data));
  const auto v = doubles_from_json(data);
  return Element<Tag>(theory, Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
}

}  // namespace detail

inline json state_to_json(const State& s) { return detail::element_to_json(s); }
inline json effect_to_json(const Effect& e) { return detail::element_to_json(e); }
inline State state_from_json(const json& j) { return detail::element_from_json<StateTag>(j); }
inline Effect effect_from_json(const json& j) { return detail::element_from_json<EffectTag>(j); }

/// Accepts {"values": [...]} or a bare array.
inline Spectrum spectrum_from_json(const json& j) {
  return Spectrum(doubles_from_json(j.is_array() ? j : detail::require(j, "values")));
}

inline json spectrum_to_json(const Spectrum& s) {
  return json{{"schema", kSchemaVersion}, {"values", s.values()}};
}

/// Accepts {"matrix": [[...]]} or a bare array of rows.
inline Eigen::MatrixXd matrix_file_from_json(const json& j) {
  return matrix_from_json(j.is_array() ? j : detail::require(j, "matrix"));
}

inline json diagonalization_to_json(const Diagonalization& d) {
  json j;
  j["schema"] = kSchemaVersion;
  j["eigenvalues"] = d.eigenvalues;
  j["pure_states"] = json::array();
  for (const State& s : d.pure_states) j["pure_states"].push_back(state_to_json(s));
  j["test_effects"] = json::array();
  for (const Effect& e : d.test_effects) j["test_effects"].push_back(effect_to_json(e));
  j["reconstruction_error"] = d.reconstruction_error;
  j["steps"] = d.steps;
  return j;
}

inline json birkhoff_to_json(const BirkhoffDecomposition& b, double reconstruction_error) {
  json j;
  j["schema"] = kSchemaVersion;
  j["weights"] = b.weights;
  j["permutations"] = b.permutations;
  j["reconstruction_error"] = reconstruction_error;
  return j;
}

inline json channel_to_json(const ReversibleChannel& c) { return json{{"orthogonal", matrix_to_json(c.matrix())}}; }

inline json rare_to_json(const RaReChannel& r) {
  json j;
  j["schema"] = kSchemaVersion;
  j["theory"] = std::string(r.theory().name());
  j["dim"] = r.theory().dim();
  j["weights"] = r.weights();
  j["channels"] = json::array();
  for (const auto& c : r.channels()) j["channels"].push_back(channel_to_json(c));
  return j;
}

inline RaReChannel rare_from_json(const json& j) {
  const Theory theory = Theory::from_name(detail::require(j, "theory").get<std::string>(),
                                          detail::require(j, "dim").get<int>());
  std::vector<ReversibleChannel> channels;
  for (const auto& c : detail::require(j, "channels"))
    channels.push_back(ReversibleChannel::from_matrix(theory, matrix_from_json(detail::require(c, "orthogonal"))));
  return RaReChannel(doubles_from_json(detail::require(j, "weights")), std::move(channels));
}

inline json report_to_json(const AxiomReport& r) {
  json j;
  j["schema"] = kSchemaVersion;
  j["model"] = r.model;
  j["dim"] = r.dim;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["failures"] = r.failures();
  j["checks"] = json::array();
  for (const auto& c : r.checks) {
    json cj;
    cj["name"] = c.name;
    cj["verdict"] = std::string(verdict_name(c.verdict));
    if (!c.note.empty()) cj["note"] = c.note;
    cj["witness"] = json::object();
    for (const auto& [k, v] : c.witness) cj["witness"][k] = v;
    j["checks"].push_back(std::move(cj));
  }
  return j;
}

}  // namespace gpt::io
