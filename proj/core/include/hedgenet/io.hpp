#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace hedgenet {

/// Shortest round-trip decimal form of a double ('.' decimal separator).
std::string format_double(double v);

/// Write `content` to `path` atomically (temp file in the same directory,
/// then rename over the target).
void atomic_write(const std::filesystem::path& path, const std::string& content);

/// Minimal RFC-4180-style CSV: numeric cells only, '\n' records, UTF-8.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

std::string csv_to_string(const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace hedgenet
