#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace mdsrel {

inline constexpr const char* kCsvSchemaVersion = "mdsrel-1";

using CsvCell = std::variant<std::string, double, int64_t, uint64_t>;

// RFC-4180 CSV writer. Numbers are rendered with std::to_chars (shortest
// round-trip form, '.' decimal separator, locale independent), so identical
// inputs produce byte-identical files.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path);

    void write_header(const std::vector<std::string>& columns);
    void write_row(const std::vector<CsvCell>& cells);

    static std::string format_cell(const CsvCell& cell);

  private:
    std::ofstream out_;
};

// Companion run manifest: resolved configuration, seed, RNG algorithm,
// version, thread count and timing live here, next to the CSV, so the CSV
// body stays reproducible byte for byte.
void write_manifest(const std::string& csv_path, const nlohmann::json& manifest);

}  // namespace mdsrel
