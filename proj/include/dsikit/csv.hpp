#pragma once

#include <string>
#include <vector>

#include "dsikit/indices.hpp"

namespace dsikit {

/// 17 significant digits, '.' decimal, no locale. Infinities print as "inf".
std::string format_number(double v);

/// Joins cells with ',' and terminates with '\n'.
std::string csv_line(const std::vector<std::string>& cells);

inline constexpr const char* kReportHeader =
    "input,DS,DS_T,Sh,S,S_T,DUB,DUB_prime,stderr_DS,stderr_DST,stderr_Sh,n_evals";

std::string report_csv(const IndexReport& report);

}  // namespace dsikit
