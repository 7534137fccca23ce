#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nomoforge {

/// UTF-8, comma-delimited, first row is the header. Quoted fields may contain
/// commas, doubled quotes and line breaks.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  bool operator==(const CsvTable&) const = default;
};

CsvTable parse_csv(std::string_view text);
std::string write_csv(const CsvTable& table);

std::string read_text_file(const std::filesystem::path& path);

/// Strict decimal parse with '.' separator; surrounding blanks allowed.
std::optional<double> parse_double(std::string_view text);

}  // namespace nomoforge
