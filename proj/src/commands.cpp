#include "dsikit/commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "dsikit/acceptance.hpp"
#include "dsikit/config.hpp"
#include "dsikit/csv.hpp"
#include "dsikit/error.hpp"
#include "dsikit/indices.hpp"
#include "dsikit/quadrature.hpp"
#include "dsikit/testcase.hpp"

namespace dsikit {
namespace {

void report_error(std::ostream& err, const Error& e) {
  err << "error: " << error_module(e.code()) << " error " << error_name(e.code()) << ": "
      << e.what() << "\n";
}

bool write_file(const std::string& path, const std::string& text, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    err << "error: cannot write " << path << "\n";
    return false;
  }
  f << text;
  return static_cast<bool>(f);
}

}  // namespace

int cmd_report(const std::string& config_path, const std::optional<std::string>& out_path,
               std::ostream& out, std::ostream& err) {
  BuiltRun run;
  std::optional<std::string> target = out_path;
  try {
    const RunConfig cfg = load_config(config_path);
    run = build_run(cfg);
    if (!target) target = cfg.output;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  std::string csv;
  try {
    csv = report_csv(full_report(run.model, run.spec, run.estimator));
  } catch (const Error& e) {
    report_error(err, e);
    return kExitComputation;
  }
  if (target) return write_file(*target, csv, err) ? kExitOk : kExitComputation;
  out << csv;
  return kExitOk;
}

Figure1Data figure1_data(std::optional<std::uint64_t> m, std::uint64_t seed) {
  EstimatorConfig cfg;
  cfg.seed = seed;
  if (m) {
    cfg.path = PathMode::kMcOnly;
    cfg.m = cfg.n_0 = cfg.n_v = *m;
  }
  const ModelHandle model = reference_model();
  Figure1Data data;
  data.csv = "set,input,DS,DS_T,Sh,DUB,DUB_coefficient,DUB_prime\n";
  data.dat = "# set input DS DS_T Sh DUB_coefficient DUB_prime\n";
  int set_no = 0;
  for (const CorrelationSet& c : correlation_sets()) {
    ++set_no;
    const GaussianInputSpec spec = reference_spec(c);
    const IndexReport rep = full_report(model, spec, cfg);
    for (const InputRow& r : rep.rows) {
      Figure1Row row;
      row.set = c.name;
      row.input = r.input + 1;
      row.ds = r.ds.value;
      row.ds_t = r.ds_t.value;
      row.sh = r.sh.value;
      row.dub = r.bounds.dub.value;
      row.dub_coefficient = r.bounds.dub.coefficient;
      row.dub_prime = r.bounds.dub_prime ? r.bounds.dub_prime->value : r.bounds.dub.value;
      data.rows.push_back(row);
      data.csv += csv_line({row.set, std::to_string(row.input), format_number(row.ds),
                            format_number(row.ds_t), format_number(row.sh),
                            format_number(row.dub), format_number(row.dub_coefficient),
                            r.bounds.dub_prime ? format_number(row.dub_prime) : ""});
      data.dat += std::to_string(set_no) + " " + std::to_string(row.input) + " " +
                  format_number(row.ds) + " " + format_number(row.ds_t) + " " +
                  format_number(row.sh) + " " + format_number(row.dub_coefficient) + " " +
                  (r.bounds.dub_prime ? format_number(row.dub_prime) : "NaN") + "\n";
    }
  }
  return data;
}

int cmd_figure1(const std::string& out_path, std::optional<std::uint64_t> m, std::uint64_t seed,
                std::ostream& out, std::ostream& err) {
  Figure1Data data;
  try {
    data = figure1_data(m, seed);
  } catch (const Error& e) {
    report_error(err, e);
    return kExitComputation;
  }
  if (!write_file(out_path, data.csv, err) || !write_file(out_path + ".dat", data.dat, err)) {
    return kExitComputation;
  }
  out << "wrote " << data.rows.size() << " rows to " << out_path << " and " << out_path
      << ".dat\n";
  if (!e_std_analysis().divergent) return kExitOk;
  out << "note: E[F(1-F)/rho^2] diverges for Gaussian innovations, so DUB is infinite "
         "wherever its coefficient is nonzero; DUB_coefficient is DUB / E_std\n";
  return kExitOk;
}

int cmd_costs(const CostsArgs& args, std::ostream& out, std::ostream& err) {
  CostTable t;
  try {
    t = cost_table(args.d, args.blocks, args.m, args.n_i, args.n_0, args.n_v, args.n_perm);
  } catch (const Error& e) {
    report_error(err, e);
    if (e.code() == ErrorCode::kOverflow) err << "hint: try a smaller d or smaller sample sizes\n";
    return kExitComputation;
  }
  out << "quantity,value\n";
  out << "d," << t.d << "\n";
  out << "d_max," << t.d_max << "\n";
  out << "C_l," << to_string(t.c_l) << "\n";
  out << "C," << to_string(t.c) << "\n";
  out << "C_prime," << to_string(t.c_prime) << "\n";
  out << "C_l/C," << format_number(t.ratio_cl_over_c) << "\n";
  return kExitOk;
}

int cmd_verify(std::uint64_t seed, bool corrupt_fixture, std::ostream& out, std::ostream& err) {
  AcceptanceOptions opts;
  opts.seed = seed;
  opts.corrupt_fixture = corrupt_fixture;
  const auto results = run_acceptance(opts);
  const CriterionResult* first_fail = nullptr;
  for (const auto& r : results) {
    out << format_result(r) << "\n";
    if (!r.pass && first_fail == nullptr) first_fail = &r;
  }
  if (first_fail != nullptr) {
    err << "verify failed at criterion " << first_fail->id << " (" << first_fail->name << ")\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace dsikit
