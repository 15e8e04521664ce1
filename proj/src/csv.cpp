#include "gaitforge/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "gaitforge/types.hpp"

namespace gaitforge {

std::string CsvWriter::format_value(double v) {
  char buf[40];
  // %.17g round-trips any double; trim to the shortest form that still does.
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::vector<std::string>& header)
    : out_(path), columns_(header.size()) {
  if (!out_) throw FormatError("cannot open for writing: " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out_ << ',';
    out_ << header[i];
  }
  out_ << '\n';
}

CsvWriter::~CsvWriter() = default;

void CsvWriter::write_row(const std::vector<double>& values) {
  if (values.size() != columns_)
    throw FormatError("csv row arity mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ',';
    out_ << format_value(values[i]);
  }
  out_ << '\n';
  ++rows_;
}

void CsvWriter::close() { out_.close(); }

int CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open: " + path.string());

  CsvTable table;
  std::string line;
  if (!std::getline(in, line))
    throw FormatError(path.string() + ": empty file");
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) table.header.push_back(cell);
  }
  if (table.header.empty())
    throw FormatError(path.string() + ": empty header");

  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      errno = 0;
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0' || errno == ERANGE)
        throw FormatError(path.string() + ":" + std::to_string(line_no) +
                          ": bad numeric cell '" + cell + "'");
      row.push_back(v);
    }
    if (row.size() != table.header.size())
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": expected " + std::to_string(table.header.size()) +
                        " cells, got " + std::to_string(row.size()));
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace gaitforge
