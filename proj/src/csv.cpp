#include "cavfermi/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace cavfermi {

namespace {

std::string join(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  return out;
}

void check_cell(std::string_view text) {
  if (text.find_first_of(",\n\r") != std::string_view::npos) {
    throw std::invalid_argument("csv cell contains a separator: " + std::string(text));
  }
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw std::runtime_error("format_double: to_chars failed");
  return std::string(buf, end);
}

void CsvDocument::comment(std::string_view line) {
  if (line.find('\n') != std::string_view::npos) {
    throw std::invalid_argument("csv comment spans lines");
  }
  comments_.push_back("# " + std::string(line));
}

void CsvDocument::columns(std::vector<std::string> names) {
  for (const auto& n : names) check_cell(n);
  columns_ = std::move(names);
}

CsvDocument::Row& CsvDocument::Row::add(double value) {
  cells_.push_back(format_double(value));
  return *this;
}

CsvDocument::Row& CsvDocument::Row::add(std::optional<double> value) {
  return value ? add(*value) : empty();
}

CsvDocument::Row& CsvDocument::Row::add(long long value) {
  cells_.push_back(std::to_string(value));
  return *this;
}

CsvDocument::Row& CsvDocument::Row::add(bool value) {
  cells_.emplace_back(value ? "true" : "false");
  return *this;
}

CsvDocument::Row& CsvDocument::Row::add(std::string_view text) {
  check_cell(text);
  cells_.emplace_back(text);
  return *this;
}

CsvDocument::Row& CsvDocument::Row::empty() {
  cells_.emplace_back();
  return *this;
}

void CsvDocument::append(const Row& row) {
  if (row.cells_.size() != columns_.size()) {
    throw std::logic_error("csv row has " + std::to_string(row.cells_.size()) +
                           " cells, header has " + std::to_string(columns_.size()));
  }
  rows_.push_back(join(row.cells_));
}

std::string CsvDocument::str() const {
  std::string out;
  for (const auto& c : comments_) out += c + '\n';
  out += join(columns_) + '\n';
  for (const auto& r : rows_) out += r + '\n';
  return out;
}

}  // namespace cavfermi
