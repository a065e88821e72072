#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace shelab {

using CsvCell = std::variant<double, long long, std::string>;

/// A table with a fixed header. Rows must match the header width.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<CsvCell>> rows;

    void add(std::vector<CsvCell> row);
};

// Doubles use 17 significant digits; fields with commas, quotes or line breaks
// are quoted. Lines end in CRLF.
std::string format_cell(const CsvCell& cell);
std::string to_csv(const CsvTable& table);
void write_csv(const CsvTable& table, const std::filesystem::path& path);

// Splits CSV text back into string fields (header row included).
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

// Flat "key = value" record, one pair per line, in insertion order.
struct SummaryRecord {
    std::vector<std::pair<std::string, std::string>> entries;

    void add(const std::string& key, double value);
    void add(const std::string& key, long long value);
    void add(const std::string& key, const std::string& value);
    void add(const std::string& key, const char* value) { add(key, std::string(value)); }
    void add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }
    std::string text() const;
};

void write_text(const std::string& text, const std::filesystem::path& path);

}  // namespace shelab
