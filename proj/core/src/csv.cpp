#include "heatlink/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace heatlink::csv {

int Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

int Table::require_column(const std::string& name) const {
  int c = column(name);
  if (c < 0) throw ParseError(source + ": missing column '" + name + "'");
  return c;
}

const std::string& Table::cell(std::size_t row, int col) const {
  const auto& r = rows.at(row);
  if (col < 0 || static_cast<std::size_t>(col) >= r.size())
    throw ParseError(source + ": row " + std::to_string(row + 1) +
                     " has no column index " + std::to_string(col));
  return r[static_cast<std::size_t>(col)];
}

double Table::number(std::size_t row, int col) const {
  const std::string& s = cell(row, col);
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(source + ": row " + std::to_string(row + 1) + ", column '" +
                     header.at(static_cast<std::size_t>(col)) +
                     "': not a number: '" + s + "'");
  }
}

double Table::number(std::size_t row, const std::string& name) const {
  return number(row, require_column(name));
}

Table read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path.string());
  Table t;
  t.source = path.string();
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    if (!have_header) {
      t.header = std::move(fields);
      have_header = true;
    } else {
      t.rows.push_back(std::move(fields));
    }
  }
  if (!have_header) throw ParseError(path.string() + ": empty file, no header row");
  return t;
}

void write_file(const std::filesystem::path& path,
                const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write file: " + path.string());
  auto emit = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i)
      out << (i > 0 ? "," : "") << fields[i];
    out << "\n";
  };
  emit(header);
  for (const auto& r : rows) emit(r);
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace heatlink::csv
