#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace citemerge {

/// Formats a double with 12 significant digits, stable across runs.
std::string fmt_double(double v);

/// Comma-separated table writer. Fields must not contain commas or newlines;
/// none of the pipeline's outputs do.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  void row(const std::vector<std::string>& fields);
  void close();

 private:
  std::ofstream out_;
  std::string path_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;  // throws if absent
};

/// Reads a whole comma-separated table. Throws std::runtime_error on IO
/// failure or ragged rows.
CsvTable read_csv(const std::string& path);

}  // namespace citemerge
