#pragma once

// JSON-configured pipelines: source -> transforms -> detection, with an error
// certificate attached to every approximate probability.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "biphoton/covariance.hpp"
#include "biphoton/detection.hpp"
#include "biphoton/spectral.hpp"
#include "biphoton/transforms.hpp"

namespace biphoton {

struct TransformStep {
  enum class Kind { Phase, Fourier, BeamSplitter, Loss, Projection };
  Kind kind = Kind::Phase;
  std::string dof;
  std::string dof_q;  // second port of a beam splitter
  double phi0 = 0.0;
  double tau = 0.0;
  double beta_l = 0.0;
  double transmission = 1.0;  // power transmission of a beam splitter
  double eta = 1.0;           // field transmittivity of a loss step
  Window window;
};

struct DetectorConfig {
  std::vector<std::string> dofs;
  std::vector<Window> windows;  // one per entry of dofs
};

struct ScenarioConfig {
  ProcessType process = ProcessType::TypeII;
  std::optional<double> gain;
  std::optional<double> mu;
  std::optional<GaussianJsaModel> gaussian;
  std::optional<std::filesystem::path> jsa_csv;
  double extent_sigma = 6.0;
  std::optional<std::size_t> points;
  std::vector<std::string> vacuum_modes;
  std::vector<TransformStep> pipeline;
  std::vector<DetectorConfig> detectors;  // empty: one detector per source DOF
  std::vector<Method> methods{Method::Exact};
  int series_order = 2;
  std::vector<std::size_t> pnd_cutoffs;
  std::optional<std::filesystem::path> output_csv;
  int precision = 17;
};

/// Parses and validates a JSON document. Relative paths resolve against base_dir.
/// Errors name the offending field, e.g. `source.jsa.gaussian.delta_plus_rad_s`.
ScenarioConfig parse_scenario(const std::string& json_text, const std::filesystem::path& base_dir = {});
ScenarioConfig load_scenario(const std::filesystem::path& file);

struct ResultRow {
  std::string quantity;
  std::string method;
  double value = 0.0;
  std::optional<double> bound;
  std::string bound_kind;
};

struct ScenarioResult {
  std::vector<std::string> metadata;  // written as comment lines
  std::vector<ResultRow> rows;

  const ResultRow* find(const std::string& quantity, const std::string& method) const;
  void write_csv(std::ostream& os, int precision = 17) const;
};

ScenarioResult run_scenario(const ScenarioConfig& config);

}  // namespace biphoton
