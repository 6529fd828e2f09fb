#include "switchocp/io.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace switchocp {

void write_csv_header(std::ostream& out) {
    out << "iteration,cpu_seconds,lower_bound,max_violation,num_cuts,bv_seminorm\n";
}

void write_csv_row(std::ostream& out, const BoundLogRecord& record) {
    const double bv = record.bv_seminorm.empty()
                          ? 0.0
                          : *std::max_element(record.bv_seminorm.begin(), record.bv_seminorm.end());
    const auto precision = out.precision(17);
    out << record.iteration << ',' << record.cpu_seconds << ',' << record.lower_bound << ','
        << record.max_violation << ',' << record.num_cuts << ',' << bv << '\n';
    out.precision(precision);
}

void write_bound_log(std::ostream& out, const std::vector<BoundLogRecord>& log) {
    write_csv_header(out);
    for (const auto& record : log) write_csv_row(out, record);
}

void write_bound_log(const std::string& path, const std::vector<BoundLogRecord>& log) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_bound_log(out, log);
    if (!out) throw std::runtime_error("cannot write " + path);
}

std::string summary_line(const OuterResult& result) {
    std::ostringstream out;
    out.precision(12);
    out << "status=" << to_string(result.status);
    if (!result.log.empty()) {
        const BoundLogRecord& last = result.log.back();
        out << " final_bound=" << last.lower_bound << " cuts=" << result.pool.size()
            << " iterations=" << result.log.size() << " cpu_seconds=" << last.cpu_seconds;
    }
    return out.str();
}

}  // namespace switchocp
