#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cavfermi {

/// Shortest round-tripping decimal form ("inf", "nan" for non-finite values).
std::string format_double(double value);

/// In-memory CSV document: '#' comment lines, one header row, data rows.
/// Cells are never quoted, so they must not contain commas or newlines.
class CsvDocument {
 public:
  void comment(std::string_view line);
  void columns(std::vector<std::string> names);

  class Row {
   public:
    Row& add(double value);
    Row& add(std::optional<double> value);  // empty cell when absent
    Row& add(long long value);
    Row& add(int value) { return add(static_cast<long long>(value)); }
    Row& add(bool value);
    Row& add(std::string_view text);
    Row& add(const char* text) { return add(std::string_view(text)); }
    Row& empty();

   private:
    friend class CsvDocument;
    std::vector<std::string> cells_;
  };

  /// Appends the row; throws std::logic_error if its width differs from the header.
  void append(const Row& row);

  std::size_t row_count() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> comments_;
  std::vector<std::string> columns_;
  std::vector<std::string> rows_;
};

}  // namespace cavfermi
