#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace dynlearn {

/// Plain numeric CSV with a single header row. Values are written with 17
/// significant digits so a read-back reproduces every double exactly.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::string format_g17(double v);

void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace dynlearn
