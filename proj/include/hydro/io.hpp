#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "hydro/field.hpp"

namespace hydro {

/// Malformed snapshot/lattice/config input.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Binary field snapshot: 16-byte header (magic "LBF2", u32 n, u32 reserved,
/// f64 time, all little-endian) followed by n*n row-major f64 values.
void write_field_snapshot(const std::filesystem::path& path, const RealField2D& field,
                          double time);

struct FieldSnapshot {
  RealField2D field;
  double time = 0.0;
};

FieldSnapshot read_field_snapshot(const std::filesystem::path& path);

/// Formats a double with full round-trip precision (17 significant digits).
std::string format_double(double value);

/// CSV with '.' decimal separator, LF line endings, 17-significant-digit floats.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  void raw_row(const std::vector<std::string>& cells);

 private:
  std::ofstream out_;
  std::filesystem::path path_;
  std::size_t columns_;
};

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

/// key=value config files ('#' comments, blank lines ignored).
std::map<std::string, std::string> read_kv_config(const std::filesystem::path& path);
void write_kv_config(const std::filesystem::path& path,
                     const std::vector<std::pair<std::string, std::string>>& entries);

}  // namespace hydro
