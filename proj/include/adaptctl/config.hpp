#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "adaptctl/kyp.hpp"
#include "adaptctl/lyapunov.hpp"
#include "adaptctl/simulator.hpp"

namespace adaptctl::config {

struct CertificateSource {
  enum class Kind { kP, kQ, kKyp };
  Kind kind = Kind::kP;
  SymMatrix matrix;  // P or Q
  Vector v;          // kyp only
  double varrho = 0.75;
  double kappa_fraction = 0.9;
  kyp::FrequencyGrid grid = kyp::FrequencyGrid::log_spaced();
};

struct LawSpec {
  sim::UpdateLaw law;
  std::string tag;
};

struct AnalysisSpec {
  SymMatrix K_b;
  double alpha = 1.0;
  std::optional<double> gamma;  // empty: use gamma*
  double mu = 0.0;
  std::optional<double> eta_star;  // default: from the noise block
};

struct RunSpec {
  double dt = 1e-3;
  double t_final = 50.0;
  Vector e0;
  Vector z0;
  std::uint64_t seed = 0;
  double tail_fraction = 0.25;
};

struct BodeSpec {
  double omega_min = 1e-3;
  double omega_max = 1e2;
  std::size_t points = 400;
};

struct ExperimentConfig {
  Matrix A;
  Vector B;
  CertificateSource certificate;
  sim::UncertaintyModel uncertainty;
  std::vector<LawSpec> laws;
  AnalysisSpec analysis;
  RunSpec run;
  BodeSpec bode;
  std::filesystem::path output = "out";
};

// Parses and validates a schema-1 document. Every error is a ValidationError
// whose message starts with the offending field path.
ExperimentConfig parse(const std::string& json_text);
ExperimentConfig load(const std::filesystem::path& path);

}  // namespace adaptctl::config
