#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace tracksentinel::io {

// Minimal CSV table: one header line, numeric cells only.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::filesystem::path& path);
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

// Numbers are written with round-trip precision ("%.17g") so repeated runs
// with the same seed produce byte-identical files.
std::string format_double(double v);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace tracksentinel::io
