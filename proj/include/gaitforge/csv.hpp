#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace gaitforge {

// Writes numeric CSV with a fixed header and shortest round-trip float
// formatting, so identical data produces identical bytes.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path,
            const std::vector<std::string>& header);
  ~CsvWriter();

  void write_row(const std::vector<double>& values);
  void close();
  int rows_written() const { return rows_; }

  static std::string format_value(double v);

 private:
  std::ofstream out_;
  std::size_t columns_ = 0;
  int rows_ = 0;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const;  // -1 when absent
};

// Strict reader for our own files: one header row, every later row numeric
// with the same arity. Throws FormatError otherwise.
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace gaitforge
