#include "gradflow/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace gradflow::io {

void Table::add(std::vector<double> row) {
  require(row.size() == columns.size(), ErrorKind::InvalidArgument,
          "row has " + std::to_string(row.size()) + " entries, table has " +
              std::to_string(columns.size()) + " columns");
  rows.push_back(std::move(row));
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

nlohmann::json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

void write_csv(std::ostream& os, const Table& table, const std::string& config_hash) {
  os << "# config_hash=" << config_hash << '\n';
  for (std::size_t j = 0; j < table.columns.size(); ++j) {
    if (j) os << ',';
    os << table.columns[j];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) os << ',';
      os << format_number(row[j]);
    }
    os << '\n';
  }
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  require(static_cast<bool>(os), ErrorKind::InvalidArgument, "cannot open " + path.string());
  return os;
}

}  // namespace

void write_csv(const std::filesystem::path& path, const Table& table, const std::string& config_hash) {
  auto os = open_output(path);
  write_csv(os, table, config_hash);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& doc) {
  auto os = open_output(path);
  os << doc.dump(2) << '\n';
}

nlohmann::json error_record(const std::string& kind, const std::string& message,
                            const std::string& config_hash) {
  return {{"error", kind}, {"message", message}, {"config_hash", config_hash}};
}

}  // namespace gradflow::io
