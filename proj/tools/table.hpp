#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "throwbox/io.hpp"

namespace throwbox::cli {

using Cell = std::variant<std::string, double, long long>;

/// Rows of named columns written as CSV or as a JSON array of objects.
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add(std::vector<Cell> row) {
    if (row.size() != columns_.size()) throw std::logic_error("table row width mismatch");
    rows_.push_back(std::move(row));
  }
  std::size_t size() const { return rows_.size(); }

  std::string csv() const {
    std::string out;
    for (std::size_t i = 0; i < columns_.size(); ++i) out += (i ? "," : "") + columns_[i];
    out += '\n';
    for (const auto& row : rows_) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out += ',';
        out += text(row[i]);
      }
      out += '\n';
    }
    return out;
  }

  nlohmann::ordered_json json() const {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& row : rows_) {
      nlohmann::ordered_json obj;
      for (std::size_t i = 0; i < row.size(); ++i) {
        std::visit([&](const auto& v) { obj[columns_[i]] = v; }, row[i]);
      }
      arr.push_back(std::move(obj));
    }
    return arr;
  }

  /// Writes `stem.csv` or `stem.json`; returns the file name.
  std::string save(const std::string& dir, const std::string& stem, bool as_json) const {
    const std::string name = stem + (as_json ? ".json" : ".csv");
    write_text_file(dir + "/" + name, as_json ? json().dump(2) + "\n" : csv());
    return name;
  }

 private:
  static std::string text(const Cell& c) {
    if (const auto* s = std::get_if<std::string>(&c)) {
      if (s->find_first_of(",\"\n") == std::string::npos) return *s;
      std::string q = "\"";
      for (char ch : *s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      return q + "\"";
    }
    if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
    return std::to_string(std::get<long long>(c));
  }

  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

}  // namespace throwbox::cli
