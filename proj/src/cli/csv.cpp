#include "specbound/cli/csv.hpp"

#include "specbound/cli/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace specbound::cli {

std::string format_number(double x) {
  if (x == 0.0) return "0";
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[48];
  const double m = std::abs(x);
  if (m >= 1e-3 && m < 1e4) {
    std::snprintf(buf, sizeof buf, "%.15g", x);
  } else {
    std::snprintf(buf, sizeof buf, "%.15e", x);
  }
  return buf;
}

std::string quote_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string hex_hash(std::uint64_t hash) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, std::uint64_t config_hash, std::uint64_t seed,
                     const std::vector<std::string>& columns, const std::string& extra_metadata)
    : out_(out) {
  out_ << "# config_hash=" << hex_hash(config_hash) << ",seed=" << seed;
  if (!extra_metadata.empty()) out_ << "," << extra_metadata;
  out_ << "\n";
  for (const auto& c : columns) field(c);
  end_row();
}

void CsvWriter::separator() {
  if (!first_) out_ << ',';
  first_ = false;
}

CsvWriter& CsvWriter::field(double x) {
  separator();
  out_ << format_number(x);
  return *this;
}

CsvWriter& CsvWriter::field(long long x) {
  separator();
  out_ << x;
  return *this;
}

CsvWriter& CsvWriter::field(const std::string& text) {
  separator();
  out_ << quote_field(text);
  return *this;
}

void CsvWriter::end_row() {
  out_ << "\n";
  first_ = true;
}

CsvTable read_numeric_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open data file", path);
  CsvTable table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (table.header.empty()) {
      table.header = cells;
      continue;
    }
    if (cells.size() != table.header.size()) throw ConfigError("row width differs from the header", path, line_no);
    std::vector<double> row;
    for (const auto& c : cells) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(c, &used));
        if (used != c.size()) throw std::invalid_argument(c);
      } catch (const std::exception&) {
        throw ConfigError("non-numeric cell '" + c + "'", path, line_no);
      }
    }
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw ConfigError("data file has no header", path);
  return table;
}

}  // namespace specbound::cli
