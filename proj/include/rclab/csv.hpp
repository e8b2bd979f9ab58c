#pragma once

#include <string>
#include <vector>

namespace rclab {

/// Deterministic CSV builder: one header row, doubles rendered with 17
/// significant digits so equal values produce byte-identical files.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  std::string str() const;

  static std::string fmt(double v);
  static std::string fmt(long v);
  static std::string fmt(int v);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace rclab
