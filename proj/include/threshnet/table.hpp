#pragma once

#include "threshnet/core.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace threshnet {

/// Comma-delimited text table with a fixed header. Numbers are rendered at
/// 12 significant digits; missing cells are written as "NA".
class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

  class Row {
   public:
    Row& add(const std::string& s) {
      cells_.push_back(s);
      return *this;
    }
    Row& add(const char* s) { return add(std::string(s)); }
    Row& add(double x) { return add(format_number(x)); }
    Row& add(int x) { return add(std::to_string(x)); }
    Row& add(long x) { return add(std::to_string(x)); }
    Row& add(std::size_t x) { return add(std::to_string(x)); }
    Row& add(bool b) { return add(std::string(b ? "1" : "0")); }
    Row& add(const std::optional<double>& x) { return x ? add(*x) : add("NA"); }

   private:
    friend class Table;
    std::vector<std::string> cells_;
  };

  Table& push(Row row) {
    if (row.cells_.size() != header_.size())
      throw std::invalid_argument("Table: row has " + std::to_string(row.cells_.size()) + " cells, header has " +
                                  std::to_string(header_.size()));
    rows_.push_back(std::move(row.cells_));
    return *this;
  }

  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }
  const std::vector<std::string>& row(std::size_t r) const { return rows_.at(r); }

  void write(std::ostream& os) const {
    write_line(os, header_);
    for (const auto& r : rows_) write_line(os, r);
  }

  std::string str() const {
    std::ostringstream os;
    write(os);
    return os.str();
  }

  void save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path + " for writing");
    write(f);
  }

 private:
  static void write_line(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) os << ',';
      os << cells[k];
    }
    os << '\n';
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace threshnet
