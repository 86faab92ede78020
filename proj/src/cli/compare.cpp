#include <algorithm>
#include <cmath>

#include "vfw/cli.hpp"
#include "vfw/csvio.hpp"

namespace vfw {

namespace {

long column_index(const CsvTable& table, const std::string& column, const std::string& path) {
  const auto it = std::find(table.columns.begin(), table.columns.end(), column);
  if (it == table.columns.end())
    throw ScenarioError("compare: column '" + column + "' missing from " + path);
  return it - table.columns.begin();
}

}  // namespace

CompareResult compare_csv(const std::string& fileA, const std::string& fileB,
                          const std::vector<std::string>& columns) {
  const CsvTable a = read_csv(fileA);
  const CsvTable b = read_csv(fileB);
  if (a.rows.size() != b.rows.size())
    throw ScenarioError("compare: row count mismatch (" + std::to_string(a.rows.size()) +
                        " vs " + std::to_string(b.rows.size()) + ")");

  // Empty request means every column the two tables share, in A's order.
  std::vector<std::string> wanted = columns;
  if (wanted.empty()) {
    for (const std::string& c : a.columns)
      if (std::find(b.columns.begin(), b.columns.end(), c) != b.columns.end())
        wanted.push_back(c);
    if (wanted.empty()) throw ScenarioError("compare: the two tables share no columns");
  }

  CompareResult result;
  for (const std::string& c : wanted) {
    const long ia = column_index(a, c, fileA);
    const long ib = column_index(b, c, fileB);
    double max_abs = 0.0, sq = 0.0;
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
      const double d = a.rows[r][ia] - b.rows[r][ib];
      max_abs = std::max(max_abs, std::abs(d));
      sq += d * d;
    }
    result.columns.push_back(c);
    result.max_abs.push_back(max_abs);
    result.l2.push_back(std::sqrt(sq));
  }
  return result;
}

}  // namespace vfw
