#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gradflow/error.hpp"

namespace gradflow::io {

/// Column-oriented numeric table written as CSV: a `# config_hash=` line, a
/// header row, then one row per record with 17 significant digits.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row);
};

void write_csv(std::ostream& os, const Table& table, const std::string& config_hash);
void write_csv(const std::filesystem::path& path, const Table& table, const std::string& config_hash);

/// Shortest round-trip-safe text for a double: 17 significant digits, "nan",
/// "inf" or "-inf".
std::string format_number(double x);

/// JSON cannot carry NaN or infinities; those become null.
nlohmann::json number(double x);

void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

/// Record written when a command fails.
nlohmann::json error_record(const std::string& kind, const std::string& message,
                            const std::string& config_hash);

}  // namespace gradflow::io
