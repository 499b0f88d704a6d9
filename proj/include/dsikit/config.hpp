#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dsikit/input_model.hpp"
#include "dsikit/variance.hpp"

namespace dsikit {

/// Flat `key = value` run description. '#' starts a comment; covariance rows
/// are given as `cov.row.<i> = v1, v2, ...` with i starting at 1.
struct RunConfig {
  std::string source = "config";
  std::string model = "linear";
  std::vector<double> params;
  std::vector<double> mean;
  std::map<int, std::vector<double>> cov_rows;
  double psd_tolerance = 1e-10;
  EstimatorConfig estimator;
  std::optional<std::string> output;
  std::optional<double> dependent_gradient_bound;
  // Line of each key, for error messages.
  std::map<std::string, int> lines;
};

/// Throws Error(ConfigParse) with "source:line: message".
RunConfig parse_config(std::string_view text, const std::string& source = "config");
RunConfig load_config(const std::string& path);

struct BuiltRun {
  GaussianInputSpec spec;
  ModelHandle model;
  EstimatorConfig estimator;
};

/// Validation failures of the input spec or the model are reported as
/// ConfigParse errors pointing at the offending key, naming the original error.
BuiltRun build_run(const RunConfig& config);

}  // namespace dsikit
