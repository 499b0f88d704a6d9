#include "dsikit/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "dsikit/error.hpp"

namespace dsikit {
namespace {

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg) {
  throw Error(ErrorCode::kConfigParse, source + ":" + std::to_string(line) + ": " + msg);
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view s, const std::string& source, int line) {
  s = trim(s);
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    fail(source, line, "'" + std::string(s) + "' is not a number");
  }
  return v;
}

std::uint64_t parse_count(std::string_view s, const std::string& source, int line) {
  s = trim(s);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    fail(source, line, "'" + std::string(s) + "' is not a non-negative integer");
  }
  return v;
}

std::vector<double> parse_list(std::string_view s, const std::string& source, int line) {
  std::vector<double> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(parse_double(s.substr(0, comma), source, line));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

bool parse_bool(std::string_view s, const std::string& source, int line) {
  s = trim(s);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  fail(source, line, "expected true or false, got '" + std::string(s) + "'");
}

}  // namespace

RunConfig parse_config(std::string_view text, const std::string& source) {
  RunConfig cfg;
  cfg.source = source;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(source, line_no, "expected 'key = value'");
    const std::string key{trim(line.substr(0, eq))};
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) fail(source, line_no, "missing key");
    if (cfg.lines.count(key) != 0) {
      fail(source, line_no, "duplicate key '" + key + "' (first set on line " +
                                std::to_string(cfg.lines[key]) + ")");
    }
    cfg.lines[key] = line_no;

    if (key == "model") {
      cfg.model = std::string(value);
    } else if (key == "params") {
      cfg.params = parse_list(value, source, line_no);
    } else if (key == "mean") {
      cfg.mean = parse_list(value, source, line_no);
    } else if (key.rfind("cov.row.", 0) == 0) {
      const auto idx = parse_count(std::string_view(key).substr(8), source, line_no);
      if (idx < 1) fail(source, line_no, "covariance rows are numbered from 1");
      cfg.cov_rows[static_cast<int>(idx)] = parse_list(value, source, line_no);
    } else if (key == "psd_tolerance") {
      cfg.psd_tolerance = parse_double(value, source, line_no);
    } else if (key == "m") {
      cfg.estimator.m = parse_count(value, source, line_no);
    } else if (key == "n_i") {
      cfg.estimator.n_i = parse_count(value, source, line_no);
    } else if (key == "n_0") {
      cfg.estimator.n_0 = parse_count(value, source, line_no);
    } else if (key == "n_v") {
      cfg.estimator.n_v = parse_count(value, source, line_no);
    } else if (key == "n_perm") {
      cfg.estimator.n_perm = parse_count(value, source, line_no);
    } else if (key == "seed") {
      cfg.estimator.seed = parse_count(value, source, line_no);
    } else if (key == "antithetic") {
      cfg.estimator.antithetic = parse_bool(value, source, line_no);
    } else if (key == "mode") {
      if (value == "auto") {
        cfg.estimator.path = PathMode::kAuto;
      } else if (value == "exact-only") {
        cfg.estimator.path = PathMode::kExactOnly;
      } else if (value == "mc-only") {
        cfg.estimator.path = PathMode::kMcOnly;
      } else {
        fail(source, line_no, "mode must be auto, exact-only or mc-only");
      }
    } else if (key == "exec") {
      if (value == "serial") {
        cfg.estimator.exec = Exec::kSerial;
      } else if (value == "parallel") {
        cfg.estimator.exec = Exec::kParallel;
      } else {
        fail(source, line_no, "exec must be serial or parallel");
      }
    } else if (key == "output") {
      cfg.output = std::string(value);
    } else if (key == "dependent_gradient_bound") {
      cfg.dependent_gradient_bound = parse_double(value, source, line_no);
    } else {
      fail(source, line_no, "unknown key '" + key + "'");
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::kConfigParse, path + ":0: cannot open file");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path);
}

BuiltRun build_run(const RunConfig& cfg) {
  auto line_of = [&](const std::string& key) {
    const auto it = cfg.lines.find(key);
    return it == cfg.lines.end() ? 0 : it->second;
  };
  const int d = static_cast<int>(cfg.cov_rows.size());
  if (d == 0) fail(cfg.source, 0, "no covariance rows (cov.row.1 = ...)");
  for (const auto& [i, row] : cfg.cov_rows) {
    const int line = line_of("cov.row." + std::to_string(i));
    if (i > d) {
      fail(cfg.source, line, "row " + std::to_string(i) + " given but only " +
                                 std::to_string(d) + " rows present");
    }
    if (static_cast<int>(row.size()) != d) {
      fail(cfg.source, line, "covariance row " + std::to_string(i) + " has " +
                                 std::to_string(row.size()) + " entries, expected " +
                                 std::to_string(d));
    }
  }
  Matrix cov(d, d);
  for (const auto& [i, row] : cfg.cov_rows) {
    for (int k = 0; k < d; ++k) cov(i - 1, k) = row[k];
  }
  Vector mean = Vector::Zero(d);
  if (!cfg.mean.empty()) {
    if (static_cast<int>(cfg.mean.size()) != d) {
      fail(cfg.source, line_of("mean"), "mean has " + std::to_string(cfg.mean.size()) +
                                            " entries, expected " + std::to_string(d));
    }
    for (int k = 0; k < d; ++k) mean(k) = cfg.mean[k];
  }
  std::vector<double> params = cfg.params;
  if (params.empty()) params.assign(static_cast<std::size_t>(d), 1.0);

  BuiltRun run;
  try {
    run.spec = build_input_spec(mean, cov, cfg.psd_tolerance);
  } catch (const Error& e) {
    fail(cfg.source, line_of("cov.row.1"), std::string(error_name(e.code())) + ": " + e.what());
  }
  try {
    if (static_cast<int>(params.size()) != d) {
      throw Error(ErrorCode::kParamLengthMismatch,
                  "model has " + std::to_string(params.size()) + " parameters but d = " +
                      std::to_string(d));
    }
    run.model = register_builtin_model(cfg.model, params);
  } catch (const Error& e) {
    const int line = cfg.lines.count("params") ? line_of("params") : line_of("model");
    fail(cfg.source, line, std::string(error_name(e.code())) + ": " + e.what());
  }
  run.model.dependent_gradient_bound = cfg.dependent_gradient_bound;
  run.estimator = cfg.estimator;
  try {
    run.estimator.validate();
  } catch (const Error& e) {
    fail(cfg.source, 0, std::string(error_name(e.code())) + ": " + e.what());
  }
  return run;
}

}  // namespace dsikit
