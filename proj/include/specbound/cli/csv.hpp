#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace specbound::cli {

// %.15g inside [1e-3, 1e4), scientific (%.15e) outside, "0" for zero.
std::string format_number(double x);

// Quotes a text field when it contains a comma, quote or newline.
std::string quote_field(const std::string& text);

// Writes the "# config_hash=...,seed=..." comment line followed by the header.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::uint64_t config_hash, std::uint64_t seed,
            const std::vector<std::string>& columns, const std::string& extra_metadata = {});

  CsvWriter& field(double x);
  CsvWriter& field(long long x);
  CsvWriter& field(const std::string& text);
  void end_row();

 private:
  void separator();

  std::ostream& out_;
  bool first_ = true;
};

std::string hex_hash(std::uint64_t hash);

// Comment-skipping numeric reader: returns the header and the numeric rows.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_numeric_csv(const std::string& path);

}  // namespace specbound::cli
