#pragma once

#include <string>
#include <variant>
#include <vector>

namespace tcrrgu {

// A report is a list of named tables plus a flat summary section.  Every
// output format renders the same report object, so the numbers in the table,
// CSV and JSON views agree by construction: the human and CSV views print
// numbers with four decimals, JSON carries them at full precision.
struct Cell {
  std::variant<std::monostate, double, long, std::string> value;

  Cell() = default;
  Cell(double v) : value(v) {}
  Cell(long v) : value(v) {}
  Cell(int v) : value(static_cast<long>(v)) {}
  Cell(std::string v) : value(std::move(v)) {}
  Cell(const char* v) : value(std::string(v)) {}
};

struct Column {
  std::string name;
  bool parenthesized = false;  // table view wraps values in parentheses
};

struct ReportTable {
  std::string name;
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Report {
  std::string command;
  std::vector<std::pair<std::string, Cell>> summary;
  std::vector<ReportTable> tables;
};

enum class OutputFormat { table, csv, json };

// Fixed-point formatting used by the table and CSV views; negative zero is
// normalized so reruns are byte-identical.
std::string format_fixed(double v, int decimals = 4);

std::string render(const Report& report, OutputFormat format);

}  // namespace tcrrgu
