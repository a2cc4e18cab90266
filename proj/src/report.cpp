#include "tcrrgu/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace tcrrgu {

std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  std::string s(buf);
  if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-')
    s.erase(0, 1);  // "-0.0000" -> "0.0000"
  return s;
}

namespace {

std::string cell_text(const Cell& cell) {
  if (std::holds_alternative<std::monostate>(cell.value)) return "n/a";
  if (const double* d = std::get_if<double>(&cell.value)) return format_fixed(*d);
  if (const long* i = std::get_if<long>(&cell.value)) return std::to_string(*i);
  return std::get<std::string>(cell.value);
}

std::string render_table_view(const Report& report) {
  std::ostringstream os;
  for (const auto& [key, cell] : report.summary)
    os << key << ": " << cell_text(cell) << "\n";
  for (const ReportTable& table : report.tables) {
    os << "\n" << table.name << "\n";
    const size_t cols = table.columns.size();
    std::vector<size_t> width(cols);
    std::vector<std::vector<std::string>> grid;
    grid.reserve(table.rows.size() + 1);
    {
      std::vector<std::string> header(cols);
      for (size_t c = 0; c < cols; ++c) {
        header[c] = table.columns[c].name;
        width[c] = header[c].size();
      }
      grid.push_back(std::move(header));
    }
    for (const auto& row : table.rows) {
      std::vector<std::string> cells(cols);
      for (size_t c = 0; c < cols && c < row.size(); ++c) {
        cells[c] = table.columns[c].parenthesized ? "(" + cell_text(row[c]) + ")"
                                                  : cell_text(row[c]);
        width[c] = std::max(width[c], cells[c].size());
      }
      grid.push_back(std::move(cells));
    }
    for (const auto& row : grid) {
      os << " ";
      for (size_t c = 0; c < cols; ++c) {
        os << " ";
        os << std::string(width[c] - row[c].size(), ' ') << row[c];
      }
      os << "\n";
    }
  }
  return os.str();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

// CSV view: one block per section, separated by blank lines.  The first
// line of a block names it; the summary block has key,value rows.
std::string render_csv_view(const Report& report) {
  std::ostringstream os;
  os << "section,summary\n";
  for (const auto& [key, cell] : report.summary)
    os << csv_escape(key) << "," << csv_escape(cell_text(cell)) << "\n";
  for (const ReportTable& table : report.tables) {
    os << "\nsection," << csv_escape(table.name) << "\n";
    for (size_t c = 0; c < table.columns.size(); ++c)
      os << (c ? "," : "") << csv_escape(table.columns[c].name);
    os << "\n";
    for (const auto& row : table.rows) {
      for (size_t c = 0; c < table.columns.size(); ++c)
        os << (c ? "," : "")
           << (c < row.size() ? csv_escape(cell_text(row[c])) : "");
      os << "\n";
    }
  }
  return os.str();
}

nlohmann::ordered_json cell_json(const Cell& cell) {
  if (std::holds_alternative<std::monostate>(cell.value)) return nullptr;
  if (const double* d = std::get_if<double>(&cell.value)) return *d;
  if (const long* i = std::get_if<long>(&cell.value)) return *i;
  return std::get<std::string>(cell.value);
}

std::string render_json_view(const Report& report) {
  nlohmann::ordered_json doc;
  doc["command"] = report.command;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  for (const auto& [key, cell] : report.summary) summary[key] = cell_json(cell);
  doc["summary"] = std::move(summary);
  nlohmann::ordered_json tables = nlohmann::ordered_json::object();
  for (const ReportTable& table : report.tables) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (size_t c = 0; c < table.columns.size() && c < row.size(); ++c)
        obj[table.columns[c].name] = cell_json(row[c]);
      rows.push_back(std::move(obj));
    }
    tables[table.name] = std::move(rows);
  }
  doc["tables"] = std::move(tables);
  return doc.dump(2) + "\n";
}

}  // namespace

std::string render(const Report& report, OutputFormat format) {
  switch (format) {
    case OutputFormat::table: return render_table_view(report);
    case OutputFormat::csv: return render_csv_view(report);
    case OutputFormat::json: return render_json_view(report);
  }
  return {};
}

}  // namespace tcrrgu
