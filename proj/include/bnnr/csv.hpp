#pragma once

#include <string>
#include <vector>

namespace bnnr {

/// RFC-4180 numeric table with comment-prefixed metadata lines. Bodies are
/// deterministic; the timestamp line is opt-in and excluded from comparisons.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> metadata;  // written as "# ..." lines

  void add_row(std::initializer_list<double> vals) { rows.emplace_back(vals); }
  void write(const std::string& path, bool with_timestamp = true) const;
};

std::string format_g17(double v);

}  // namespace bnnr
