#pragma once

// Machine-readable records emitted by the command-line tool, with CSV and
// JSON writers and the matching parsers.
//
// CSV layout:
//   # schema_version: 1
//   # command: rrm
//   # input: gamma=4
//   # diagnostic: ...
//   # table: convergence
//   N,W0,W1
//   4,-1.4595...,4
// Numbers use 17 significant digits; a missing value is an empty field.

#include "qsmag/error.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace qsmag {

inline constexpr const char* kSchemaVersion = "1";

using Cell = std::optional<double>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row) {
    require(row.size() == columns.size(), "row width does not match the column count of table " + name);
    rows.push_back(std::move(row));
  }

  bool operator==(const Table&) const = default;
};

struct OutputRecord {
  std::string schema_version = kSchemaVersion;
  std::string command;
  std::vector<std::pair<std::string, std::string>> inputs;  // in flag order
  std::vector<Table> tables;
  std::vector<std::string> diagnostics;

  const Table& table(const std::string& name) const {
    for (const auto& t : tables) {
      if (t.name == name) return t;
    }
    throw DomainError("record has no table named " + name);
  }

  bool operator==(const OutputRecord&) const = default;
};

enum class Format { Csv, Json };

inline Format parse_format(const std::string& text) {
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  throw DomainError("unknown format '" + text + "' (expected csv or json)");
}

/// Non-finite values are written as missing.
inline std::string format_number(Cell value) {
  if (!value || !std::isfinite(*value)) return {};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", *value);
  return buf;
}

namespace detail {

inline std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw DomainError("unterminated quoted CSV field");
  return fields;
}

// Metadata lines are single physical lines.
inline std::string one_line(std::string text) {
  for (auto& c : text) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return text;
}

inline Cell parse_cell(const std::string& field) {
  if (field.empty()) return std::nullopt;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &used);
  } catch (...) {
    throw DomainError("not a number: '" + field + "'");
  }
  if (used != field.size()) throw DomainError("not a number: '" + field + "'");
  return v;
}

}  // namespace detail

inline std::string to_csv(const OutputRecord& record) {
  std::ostringstream out;
  out << "# schema_version: " << record.schema_version << '\n';
  out << "# command: " << detail::one_line(record.command) << '\n';
  for (const auto& [key, value] : record.inputs) out << "# input: " << key << '=' << detail::one_line(value) << '\n';
  for (const auto& d : record.diagnostics) out << "# diagnostic: " << detail::one_line(d) << '\n';
  for (const auto& table : record.tables) {
    out << "# table: " << detail::one_line(table.name) << '\n';
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      out << (c ? "," : "") << detail::csv_quote(table.columns[c]);
    }
    out << "\r\n";
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
      out << "\r\n";
    }
  }
  return out.str();
}

inline OutputRecord parse_csv(const std::string& text) {
  OutputRecord record;
  record.schema_version.clear();
  std::istringstream in(text);
  std::string line;
  Table* current = nullptr;
  bool need_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("# ", 0) == 0) {
      const auto colon = line.find(": ");
      if (colon == std::string::npos) throw DomainError("malformed metadata line: " + line);
      const std::string key = line.substr(2, colon - 2);
      const std::string value = line.substr(colon + 2);
      if (key == "schema_version") {
        record.schema_version = value;
      } else if (key == "command") {
        record.command = value;
      } else if (key == "input") {
        const auto eq = value.find('=');
        if (eq == std::string::npos) throw DomainError("malformed input line: " + line);
        record.inputs.emplace_back(value.substr(0, eq), value.substr(eq + 1));
      } else if (key == "diagnostic") {
        record.diagnostics.push_back(value);
      } else if (key == "table") {
        record.tables.push_back(Table{value, {}, {}});
        current = &record.tables.back();
        need_header = true;
      } else {
        throw DomainError("unknown metadata key: " + key);
      }
      continue;
    }
    if (!current) throw DomainError("data line before any table");
    auto fields = detail::csv_split(line);
    if (need_header) {
      current->columns = std::move(fields);
      need_header = false;
      continue;
    }
    if (fields.size() != current->columns.size()) throw DomainError("row width mismatch in table " + current->name);
    std::vector<Cell> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(detail::parse_cell(f));
    current->rows.push_back(std::move(row));
  }
  return record;
}

/// Numbers are written in the shortest form that reads back to the same
/// double; missing and non-finite values are null.
inline std::string to_json(const OutputRecord& record) {
  nlohmann::ordered_json j;
  j["schema_version"] = record.schema_version;
  j["command"] = record.command;
  j["inputs"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : record.inputs) j["inputs"][key] = value;
  j["tables"] = nlohmann::ordered_json::array();
  for (const auto& table : record.tables) {
    nlohmann::ordered_json t;
    t["name"] = table.name;
    t["columns"] = table.columns;
    t["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      auto r = nlohmann::ordered_json::array();
      for (const auto& cell : row) {
        if (cell && std::isfinite(*cell)) {
          r.push_back(*cell);
        } else {
          r.push_back(nullptr);
        }
      }
      t["rows"].push_back(std::move(r));
    }
    j["tables"].push_back(std::move(t));
  }
  j["diagnostics"] = record.diagnostics;
  return j.dump(2) + "\n";
}

inline OutputRecord parse_json(const std::string& text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
    OutputRecord record;
    record.schema_version = j.at("schema_version").get<std::string>();
    record.command = j.at("command").get<std::string>();
    for (const auto& [key, value] : j.at("inputs").items()) record.inputs.emplace_back(key, value.get<std::string>());
    for (const auto& t : j.at("tables")) {
      Table table{t.at("name").get<std::string>(), t.at("columns").get<std::vector<std::string>>(), {}};
      for (const auto& r : t.at("rows")) {
        std::vector<Cell> row;
        for (const auto& cell : r) {
          if (cell.is_null()) {
            row.emplace_back(std::nullopt);
          } else {
            row.emplace_back(cell.get<double>());
          }
        }
        table.rows.push_back(std::move(row));
      }
      record.tables.push_back(std::move(table));
    }
    record.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
    return record;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed JSON record: ") + e.what());
  }
}

inline std::string emit(const OutputRecord& record, Format format) {
  return format == Format::Csv ? to_csv(record) : to_json(record);
}

inline OutputRecord parse(const std::string& text, Format format) {
  return format == Format::Csv ? parse_csv(text) : parse_json(text);
}

}  // namespace qsmag
