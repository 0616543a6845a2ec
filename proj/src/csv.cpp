#include "bnnr/csv.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace bnnr {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void ResultTable::write(const std::string& path, bool with_timestamp) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  if (with_timestamp) {
    const auto now = std::chrono::system_clock::now();
    out << "# timestamp: " << std::chrono::duration_cast<std::chrono::seconds>(
                                  now.time_since_epoch())
                                  .count()
        << "\n";
  }
  for (const std::string& m : metadata) out << "# " << m << '\n';
  for (size_t i = 0; i < columns.size(); ++i) out << columns[i] << (i + 1 < columns.size() ? ',' : '\n');
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i)
      out << format_g17(row[i]) << (i + 1 < row.size() ? ',' : '\n');
  }
}

}  // namespace bnnr
