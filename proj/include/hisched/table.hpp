#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hisched/types.hpp"

namespace hisched {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A CSV document held as strings: one header, rows of equal width.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column position; throws CsvError when absent.
  std::size_t col(std::string_view name) const;
  bool has_col(std::string_view name) const;
  /// Cell as a number; empty cells are absent. Throws CsvError on junk.
  std::optional<double> number(std::size_t row, std::string_view name) const;
  const std::string& text(std::size_t row, std::string_view name) const;

  void add_row(std::vector<std::string> row);
};

/// printf %.10g; absent values become empty cells.
std::string fmt(double v);
std::string fmt(const std::optional<double>& v);

void write_csv(std::ostream& out, const Table& table);
/// Minimal RFC 4180 reader. An empty document yields an empty table.
Table read_csv(std::istream& in, std::string_view source);

/// GitHub-flavoured markdown table.
std::string markdown_table(const Table& table);

}  // namespace hisched
