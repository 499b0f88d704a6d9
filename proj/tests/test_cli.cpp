#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "dsikit/commands.hpp"
#include "dsikit/config.hpp"
#include "dsikit/csv.hpp"
#include "dsikit/error.hpp"

using namespace dsikit;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = std::string(DSIKIT_TEST_TMP) + "/" + name;
  std::ofstream(path) << text;
  return path;
}

const char* kC4 =
    "# C4 layout\n"
    "model = linear\n"
    "params = 1, 1, 1\n"
    "cov.row.1 = 2, 2, 2\n"
    "cov.row.2 = 2, 8, 4\n"
    "cov.row.3 = 2, 4, 8\n"
    "mode = exact-only\n";

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("number formatting round-trips and spells non-finite values") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(csv_line({"a", "b"}) == "a,b\n");
}

TEST_CASE("config parsing") {
  const RunConfig c = parse_config(kC4, "c4.cfg");
  CHECK(c.model == "linear");
  CHECK(c.cov_rows.size() == 3);
  CHECK(c.estimator.path == PathMode::kExactOnly);
  CHECK(c.lines.at("cov.row.2") == 5);
}

TEST_CASE("config errors carry the line number") {
  auto message = [](const std::string& text) {
    try {
      build_run(parse_config(text, "x.cfg"));
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kConfigParse);
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("model = linear\ncolor = red\n").find("x.cfg:2:") == 0);
  CHECK(message("m = 10\nm = 20\n").find("x.cfg:2: duplicate") == 0);
  CHECK(message("seed = -3\n").find("x.cfg:1:") == 0);
  const std::string not_psd =
      "model = linear\ncov.row.1 = 1, 2\ncov.row.2 = 2, 1\n";
  CHECK(message(not_psd).find("NotPositiveSemidefinite") != std::string::npos);
  CHECK(message("model = cubic\ncov.row.1 = 1\n").find("UnknownModel") != std::string::npos);
  CHECK(message("model = linear\nparams = 1, 2\ncov.row.1 = 1\n").find("x.cfg:2:") == 0);
}

TEST_CASE("report writes the CSV") {
  const std::string cfg = write_temp("c4.cfg", kC4);
  std::ostringstream out, err;
  CHECK(cmd_report(cfg, std::nullopt, out, err) == kExitOk);
  std::istringstream lines(out.str());
  std::string header, row;
  std::getline(lines, header);
  CHECK(header == kReportHeader);
  int rows = 0;
  while (std::getline(lines, row)) {
    ++rows;
    int commas = 0;
    for (char ch : row) commas += ch == ',' ? 1 : 0;
    CHECK(commas == 11);
    CHECK(row.rfind(std::to_string(rows) + ",", 0) == 0);
  }
  CHECK(rows == 3);
  for (const auto& r : parse_csv(out.str())) {
    if (r[0] == "input") continue;
    CHECK(std::stod(r[1]) == doctest::Approx(std::stod(r[3])).epsilon(1e-10));
    CHECK(std::stod(r[2]) == doctest::Approx(std::stod(r[3])).epsilon(1e-10));
  }
}

TEST_CASE("independent config: S and DS columns match") {
  std::ostringstream out, err;
  REQUIRE(cmd_report(std::string(DSIKIT_SOURCE_DIR) + "/configs/c7_linear.cfg", std::nullopt, out,
                     err) == kExitOk);
  const auto rows = parse_csv(out.str());
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 12);
    CHECK(rows[i][1] == rows[i][4]);
    CHECK(rows[i][2] == rows[i][5]);
    CHECK(rows[i][7].empty());
  }
}

TEST_CASE("report output is byte-identical across runs") {
  const std::string cfg = std::string(DSIKIT_SOURCE_DIR) + "/configs/c3_sine.cfg";
  std::ostringstream a, b, err;
  REQUIRE(cmd_report(cfg, std::nullopt, a, err) == kExitOk);
  REQUIRE(cmd_report(cfg, std::nullopt, b, err) == kExitOk);
  CHECK(a.str() == b.str());
}

TEST_CASE("report exit codes") {
  std::ostringstream out, err;
  CHECK(cmd_report("/nonexistent/file.cfg", std::nullopt, out, err) == kExitConfig);
  const std::string bad = write_temp("bad.cfg", "model = linear\ncov.row.1 = 1, 2\ncov.row.2 = 2, 1\n");
  CHECK(cmd_report(bad, std::nullopt, out, err) == kExitConfig);
  CHECK(err.str().find("bad.cfg:2:") != std::string::npos);
  const std::string nonlinear =
      write_temp("sine.cfg", std::string(kC4) + "model2 = x\n");
  CHECK(cmd_report(nonlinear, std::nullopt, out, err) == kExitConfig);
  const std::string exact_sine = write_temp(
      "exact_sine.cfg",
      "model = additive-nonlinear\ncov.row.1 = 1, 0.5\ncov.row.2 = 0.5, 1\nmode = exact-only\n");
  CHECK(cmd_report(exact_sine, std::nullopt, out, err) == kExitComputation);
  CHECK(err.str().find("ExactPathUnavailable") != std::string::npos);
  const std::string short_row =
      write_temp("short.cfg", "model = linear\ncov.row.1 = 1, 0\ncov.row.2 = 0\n");
  std::ostringstream err2;
  CHECK(cmd_report(short_row, std::nullopt, out, err2) == kExitConfig);
  CHECK(err2.str().find("short.cfg:3:") != std::string::npos);
}

TEST_CASE("costs subcommand") {
  CostsArgs a;
  a.d = 3;
  a.blocks = {3};
  std::ostringstream out, err;
  CHECK(cmd_costs(a, out, err) == kExitOk);
  CHECK(out.str().find("C_l,240000\n") != std::string::npos);
  // d = 1: no interactions, only the variance runs remain.
  CostsArgs one;
  one.d = 1;
  std::ostringstream single;
  CHECK(cmd_costs(one, single, err) == kExitOk);
  CHECK(single.str().find("C_l,0\n") != std::string::npos);
  CHECK(single.str().find("C,10000\n") != std::string::npos);
  CostsArgs big;
  big.d = 40;
  CHECK(cmd_costs(big, out, err) != kExitOk);
  CHECK(err.str().find("Overflow") != std::string::npos);
}

TEST_CASE("figure1 data has thirty rows and a companion file") {
  const Figure1Data d = figure1_data(std::nullopt, 1);
  CHECK(d.rows.size() == 30);
  CHECK(d.csv.rfind("set,input,DS,DS_T,Sh,DUB,DUB_coefficient,DUB_prime\n", 0) == 0);
  const std::string path = std::string(DSIKIT_TEST_TMP) + "/fig.csv";
  std::ostringstream out, err;
  CHECK(cmd_figure1(path, std::nullopt, 1, out, err) == kExitOk);
  CHECK(std::ifstream(path + ".dat").good());
}

TEST_CASE("verify reports a corrupted fixture") {
  std::ostringstream out, err;
  CHECK(cmd_verify(1, true, out, err) == kExitFailure);
  CHECK(out.str().find("NotPositiveSemidefinite") != std::string::npos);
}
