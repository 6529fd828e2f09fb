#pragma once

#include "switchocp/outerloop.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace switchocp {

/// Bound-trace CSV: iteration, cpu_seconds, lower_bound, max_violation,
/// num_cuts, bv_seminorm (maximum over switches).
void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const BoundLogRecord& record);
void write_bound_log(std::ostream& out, const std::vector<BoundLogRecord>& log);
void write_bound_log(const std::string& path, const std::vector<BoundLogRecord>& log);

/// One line: status, final bound, cuts, total CPU time.
std::string summary_line(const OuterResult& result);

}  // namespace switchocp
