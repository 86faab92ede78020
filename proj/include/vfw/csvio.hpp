#pragma once
#include <fstream>
#include <string>
#include <vector>

namespace vfw {

// Shortest round-trip decimal representation (std::to_chars), independent of
// the global locale.  This is what every CSV/JSON writer in the project uses,
// so identical doubles always serialize to identical bytes.
std::string format_double(double x);

// Minimal CSV writer: header row, comma separator, '\n' line ends.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  void row_strings(const std::vector<std::string>& values);
  void close();

 private:
  std::ofstream out_;
  std::size_t ncols_;
};

// Whole-file helpers for the compare subcommand and the tests.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};
CsvTable read_csv(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace vfw
