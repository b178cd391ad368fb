#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace greedylab {

/// "%.12g"; non-finite values become "nan", "inf" or "-inf".
std::string format_double(double v);

/// Sorted keys, two-space indent, every floating value printed with
/// format_double, non-finite floats written as null. Byte-stable.
std::string canonical_json(const nlohmann::json& j);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
  void write(std::ostream& os) const;
};

/// Long-format plot data: one (series, x, y) triple per row.
struct PlotPoint {
  std::string series;
  double x;
  double y;
};

CsvTable plot_table(const std::vector<PlotPoint>& points);

/// Writes the whole file or throws std::runtime_error naming the path.
void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace greedylab
