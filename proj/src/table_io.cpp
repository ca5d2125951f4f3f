#include "ghzsim/table_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ghzsim/errors.hpp"

namespace ghzsim::io {

namespace {

std::string cell_text(const Cell& cell) {
  if (const double* v = std::get_if<double>(&cell)) return format_double(*v);
  return std::get<std::string>(cell);
}

std::string json_escape(std::string_view text) { return nlohmann::json(std::string(text)).dump(); }

Cell parse_cell(const std::string& text) {
  if (!text.empty()) {
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (end == text.c_str() + text.size()) return value;
  }
  return text;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

Format parse_format(std::string_view text) {
  if (text == "csv") return Format::csv;
  if (text == "json") return Format::json;
  throw InvalidArgument("unknown output format '" + std::string(text) + "' (expected csv or json)");
}

std::string_view to_string(Format format) { return format == Format::csv ? "csv" : "json"; }

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw InvalidArgument("table has no column '" + std::string(name) + "'");
}

double Table::number(std::size_t row, std::string_view name) const {
  const Cell& cell = rows.at(row).at(column(name));
  if (const double* v = std::get_if<double>(&cell)) return *v;
  throw InvalidArgument("column '" + std::string(name) + "' is not numeric");
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.11e", value);
  return buf;
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += cell_text(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const Table& table) {
  std::string out = "{\n  \"columns\": [";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ", ";
    out += json_escape(table.columns[i]);
  }
  out += "],\n  \"rows\": [";
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    out += r ? ",\n    [" : "\n    [";
    const auto& row = table.rows[r];
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ", ";
      if (const double* v = std::get_if<double>(&row[i]); v && std::isfinite(*v)) {
        out += format_double(*v);
      } else {
        out += json_escape(cell_text(row[i]));
      }
    }
    out += ']';
  }
  out += table.rows.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

std::string render(const Table& table, Format format) {
  return format == Format::csv ? to_csv(table) : to_json(table);
}

Table parse_csv(std::string_view text) {
  Table table;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("csv: missing header");
  table.columns = split_line(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<Cell> row;
    for (const std::string& field : split_line(line)) row.push_back(parse_cell(field));
    if (row.size() != table.columns.size()) throw InvalidArgument("csv: row width does not match header");
    table.rows.push_back(std::move(row));
  }
  return table;
}

Table parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("json: ") + e.what());
  }
  Table table;
  for (const auto& name : doc.at("columns")) table.columns.push_back(name.get<std::string>());
  for (const auto& jrow : doc.at("rows")) {
    std::vector<Cell> row;
    for (const auto& cell : jrow) {
      if (cell.is_number()) {
        row.emplace_back(cell.get<double>());
      } else {
        row.push_back(parse_cell(cell.get<std::string>()));
      }
    }
    if (row.size() != table.columns.size()) throw InvalidArgument("json: row width does not match columns");
    table.rows.push_back(std::move(row));
  }
  return table;
}

Table parse(std::string_view text, Format format) {
  return format == Format::csv ? parse_csv(text) : parse_json(text);
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw InvalidArgument("failed writing '" + path.string() + "'");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace ghzsim::io
