#include "dsikit/csv.hpp"

#include <charconv>
#include <cmath>

namespace dsikit {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) out += ',';
    out += cells[i];
  }
  out += '\n';
  return out;
}

std::string report_csv(const IndexReport& report) {
  std::string out = std::string(kReportHeader) + "\n";
  for (const InputRow& r : report.rows) {
    out += csv_line({
        std::to_string(r.input + 1),
        format_number(r.ds.value),
        format_number(r.ds_t.value),
        format_number(r.sh.value),
        r.s ? format_number(r.s->value) : "",
        r.s_t ? format_number(r.s_t->value) : "",
        format_number(r.bounds.dub.value),
        r.bounds.dub_prime ? format_number(r.bounds.dub_prime->value) : "",
        format_number(r.ds.std_error),
        format_number(r.ds_t.std_error),
        format_number(r.sh.std_error),
        std::to_string(r.n_evals),
    });
  }
  return out;
}

}  // namespace dsikit
