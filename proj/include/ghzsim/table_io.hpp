#pragma once

// Tabular result files. Every number is written with 12 significant digits in
// lowercase scientific notation so outputs are byte-stable; the readers parse
// both formats back into the same Table.

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ghzsim::io {

enum class Format { csv, json };

Format parse_format(std::string_view text);
std::string_view to_string(Format format);

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  // Index of a column, throws InvalidArgument if missing.
  std::size_t column(std::string_view name) const;
  double number(std::size_t row, std::string_view name) const;
};

std::string format_double(double value);

std::string to_csv(const Table& table);
std::string to_json(const Table& table);
std::string render(const Table& table, Format format);

Table parse_csv(std::string_view text);
Table parse_json(std::string_view text);
Table parse(std::string_view text, Format format);

void write_file(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace ghzsim::io
