#include "wgqed/csv.hpp"

#include <fmt/format.h>

#include "wgqed/common.hpp"

namespace wgqed {

std::string format_number(double v) {
  if (v == 0.0) return "0";  // drop the sign of -0
  return fmt::format("{:.17g}", v);
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : path_(path), columns_(header.size()), out_(path) {
  if (!out_) throw Error("cannot open '" + path + "' for writing");
  row(header);
}

void CsvWriter::row(std::span<const double> values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  row(cells);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw DimensionMismatch("csv row width differs from header in " + path_);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
  if (!out_) throw Error("write failed for '" + path_ + "'");
}

}  // namespace wgqed
