#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dsikit {

/// Exit codes shared by the subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;      // verify: a criterion failed
inline constexpr int kExitConfig = 2;       // unreadable or invalid config
inline constexpr int kExitComputation = 3;  // library error during computation

/// CSV to `out_path` if given, else to the config's `output` key, else to out.
int cmd_report(const std::string& config_path, const std::optional<std::string>& out_path,
               std::ostream& out, std::ostream& err);

struct Figure1Row {
  std::string set;
  int input = 0;  // 1-based
  double ds = 0.0;
  double ds_t = 0.0;
  double sh = 0.0;
  double dub = 0.0;
  double dub_coefficient = 0.0;  // DUB / E_std
  double dub_prime = 0.0;
};

struct Figure1Data {
  std::vector<Figure1Row> rows;
  std::string csv;
  std::string dat;  // whitespace-separated companion for gnuplot
};

/// Ten correlation sets x three inputs. Exact linear path unless m is given,
/// in which case m = N_0 = N_v = *m on the Monte Carlo path.
Figure1Data figure1_data(std::optional<std::uint64_t> m, std::uint64_t seed);

/// Writes out_path and out_path + ".dat".
int cmd_figure1(const std::string& out_path, std::optional<std::uint64_t> m, std::uint64_t seed,
                std::ostream& out, std::ostream& err);

struct CostsArgs {
  int d = 3;
  std::vector<int> blocks;
  std::uint64_t m = 10000;
  std::uint64_t n_i = 10000;
  std::uint64_t n_0 = 10000;
  std::uint64_t n_v = 10000;
  std::uint64_t n_perm = 500;
};

int cmd_costs(const CostsArgs& args, std::ostream& out, std::ostream& err);

/// Runs the acceptance suite, one line per criterion. corrupt_fixture swaps in
/// a covariance fixture that is not positive semidefinite.
int cmd_verify(std::uint64_t seed, bool corrupt_fixture, std::ostream& out, std::ostream& err);

}  // namespace dsikit
