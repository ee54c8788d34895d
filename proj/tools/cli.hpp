#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gpt_spectra/gpt_spectra.hpp"
#include "gpt_spectra/json_io.hpp"

namespace gpt::cli {

using io::json;

enum ExitCode : int { kOk = 0, kNegative = 1, kInputError = 2, kNumericalFailure = 3 };

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotMajorized:
      return kNegative;
    case ErrorCode::NotDiagonalizable:
    case ErrorCode::NoConvergence:
    case ErrorCode::ResidualOutsideCone:
    case ErrorCode::NoPerfectMatching:
    case ErrorCode::SynthesisVerificationFailed:
    case ErrorCode::DaggerNotUnique:
      return kNumericalFailure;
    default:
      return kInputError;
  }
}

namespace detail {

inline json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, "'" + path + "' is not valid JSON: " + e.what());
  }
}

inline State read_state(const std::string& path) {
  State s = [&] {
    try {
      return io::state_from_json(read_json(path));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::InvalidInput, "'" + path + "': " + e.what());
    }
  }();
  require_valid_state(s);
  return s;
}

inline void emit(const json& j, const std::string& out_path, std::ostream& out) {
  const std::string text = io::dump(j);
  if (out_path.empty() || out_path == "-") {
    out << text;
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw Error(ErrorCode::InvalidInput, "cannot write '" + out_path + "'");
  file << text;
}

inline std::vector<double> padded(std::vector<double> v, std::size_t n) {
  v.resize(std::max(v.size(), n), 0.0);
  return v;
}

}  // namespace detail

/// Runs one command line (without the program name). Output files go to
/// `--out` or to `out`; diagnostics go to `err` as "error: <Code>: detail".
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Operational diagonalization and majorization for probabilistic theories"};
  app.require_subcommand(1);
  double tol_scale = 0.0;
  app.add_option("--tol", tol_scale, "Tolerance multiplier (must precede any computation in-process)")
      ->check(CLI::PositiveNumber);

  std::string in_path, out_path, p_path, q_path, from_path, to_path, state_path, component_path, theory_name;
  int dim = 0;
  int trials = 20;
  std::uint64_t seed = 0;
  double weight = 0.0;

  auto* diag_cmd = app.add_subcommand("diagonalize", "Diagonalize a state by pure-effect peeling");
  diag_cmd->add_option("--in", in_path, "State file")->required();
  diag_cmd->add_option("--out", out_path, "Output file (stdout if omitted)");

  auto* maj_cmd = app.add_subcommand("majorize", "Test whether spectrum q majorizes spectrum p");
  maj_cmd->add_option("--p", p_path, "Spectrum file p")->required();
  maj_cmd->add_option("--q", q_path, "Spectrum file q")->required();
  maj_cmd->add_option("--out", out_path, "Output file (stdout if omitted)");

  auto* conv_cmd = app.add_subcommand("convert", "Decide sigma -> rho under random-reversible channels");
  conv_cmd->add_option("--from", from_path, "State file sigma")->required();
  conv_cmd->add_option("--to", to_path, "State file rho")->required();
  conv_cmd->add_option("--out", out_path, "Channel file (stdout if omitted)");

  auto* bvn_cmd = app.add_subcommand("birkhoff", "Decompose a doubly stochastic matrix into permutations");
  bvn_cmd->add_option("--in", in_path, "Matrix file")->required();
  bvn_cmd->add_option("--out", out_path, "Output file (stdout if omitted)");

  auto* check_cmd = app.add_subcommand("check", "Run the axiom checks on a model");
  check_cmd->add_option("--theory", theory_name, "quantum_real | classical | gbit")->required();
  check_cmd->add_option("--dim", dim, "System dimension")->required();
  check_cmd->add_option("--seed", seed, "Random seed")->required();
  check_cmd->add_option("--trials", trials, "Samples per randomized check")->check(CLI::NonNegativeNumber);
  check_cmd->add_option("--out", out_path, "Report file (stdout if omitted)");

  auto* steer_cmd = app.add_subcommand("steer", "Find the purifying-side effect preparing weight * sigma");
  steer_cmd->add_option("--state", state_path, "State file rho")->required();
  steer_cmd->add_option("--component", component_path, "State file sigma")->required();
  steer_cmd->add_option("--weight", weight, "Weight p of sigma inside rho")->required();
  steer_cmd->add_option("--out", out_path, "Output file (stdout if omitted)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: Usage: " << e.what() << "\n";
    return kInputError;
  }

  if (tol_scale > 0.0) setenv("GPT_SPECTRA_TOL_SCALE", std::to_string(tol_scale).c_str(), 1);

  try {
    if (diag_cmd->parsed()) {
      const State rho = detail::read_state(in_path);
      detail::emit(io::diagonalization_to_json(diagonalize(rho)), out_path, out);
      return kOk;
    }

    if (maj_cmd->parsed()) {
      auto p_values = io::spectrum_from_json(detail::read_json(p_path)).values();
      auto q_values = io::spectrum_from_json(detail::read_json(q_path)).values();
      const std::size_t n = std::max(p_values.size(), q_values.size());
      const Spectrum p(detail::padded(p_values, n));
      const Spectrum q(detail::padded(q_values, n));
      const auto violation = majorization_violation(q, p);
      json j;
      j["schema"] = io::kSchemaVersion;
      j["q_majorizes_p"] = !violation.has_value();
      j["partial_sums"] = json::array();
      const auto sp = p.partial_sums();
      const auto sq = q.partial_sums();
      for (std::size_t k = 0; k < n; ++k) j["partial_sums"].push_back({{"k", k + 1}, {"p", sp[k]}, {"q", sq[k]}});
      if (violation) j["violating_index"] = *violation;
      detail::emit(j, out_path, out);
      return violation ? kNegative : kOk;
    }

    if (conv_cmd->parsed()) {
      const State sigma = detail::read_state(from_path);
      const State rho = detail::read_state(to_path);
      const ConvertibilityCertificate cert = is_more_mixed(rho, sigma);
      json j;
      switch (cert.verdict) {
        case MixednessVerdict::MoreMixed:
          j = io::rare_to_json(*cert.rare);
          break;
        case MixednessVerdict::EquallyMixed:
          j = io::rare_to_json(RaReChannel::single(*cert.reversible));
          break;
        case MixednessVerdict::NotMoreMixed:
          j["schema"] = io::kSchemaVersion;
          j["violating_index"] = *cert.violating_index;
          break;
      }
      j["verdict"] = std::string(verdict_name(cert.verdict));
      j["residual_error"] = cert.residual_error;
      j["spectrum_rho"] = cert.spectrum_rho;
      j["spectrum_sigma"] = cert.spectrum_sigma;
      detail::emit(j, out_path, out);
      return cert.verdict == MixednessVerdict::NotMoreMixed ? kNegative : kOk;
    }

    if (bvn_cmd->parsed()) {
      const Eigen::MatrixXd m = io::matrix_file_from_json(detail::read_json(in_path));
      if (!is_doubly_stochastic(m, tolerances().doubly_stochastic))
        throw Error(ErrorCode::InvalidInput, "matrix is not doubly stochastic");
      const BirkhoffDecomposition b = birkhoff(m);
      const double err = (b.reconstruct(m.rows()) - m).cwiseAbs().maxCoeff();
      detail::emit(io::birkhoff_to_json(b, err), out_path, out);
      return kOk;
    }

    if (check_cmd->parsed()) {
      const Theory theory = Theory::from_name(theory_name, dim);
      const AxiomReport report = run_axiom_checks(theory, trials, seed);
      detail::emit(io::report_to_json(report), out_path, out);
      return report.failures() == 0 ? kOk : kNegative;
    }

    if (steer_cmd->parsed()) {
      const State rho = detail::read_state(state_path);
      const State sigma = detail::read_state(component_path);
      const SteeringResult result = steer(purify(rho), sigma, weight);
      json j;
      j["schema"] = io::kSchemaVersion;
      j["weight"] = weight;
      j["effect"] = io::effect_to_json(result.effect);
      j["reproduction_error"] = result.reproduction_error;
      detail::emit(j, out_path, out);
      return kOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: InvalidInput: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace gpt::cli
