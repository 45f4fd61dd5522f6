#include "mdsrel/csv.hpp"

#include <charconv>
#include <stdexcept>

namespace mdsrel {

namespace {

std::string quote_if_needed(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

template <typename T>
std::string number_to_string(T value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

}  // namespace

CsvWriter::CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open output file: " + path);
}

std::string CsvWriter::format_cell(const CsvCell& cell) {
    return std::visit(
        [](const auto& value) -> std::string {
            using T = std::decay_t<decltype(value)>;
            if constexpr (std::is_same_v<T, std::string>) {
                return quote_if_needed(value);
            } else {
                return number_to_string(value);
            }
        },
        cell);
}

void CsvWriter::write_header(const std::vector<std::string>& columns) {
    for (size_t i = 0; i < columns.size(); ++i) {
        if (i) out_ << ',';
        out_ << quote_if_needed(columns[i]);
    }
    out_ << "\r\n";
}

void CsvWriter::write_row(const std::vector<CsvCell>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << format_cell(cells[i]);
    }
    out_ << "\r\n";
}

void write_manifest(const std::string& csv_path, const nlohmann::json& manifest) {
    const std::string path = csv_path + ".manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open manifest file: " + path);
    out << manifest.dump(2) << "\n";
}

}  // namespace mdsrel
