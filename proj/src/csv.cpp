#include "shelab/csv.hpp"

#include <fstream>

#include <fmt/format.h>

#include "shelab/errors.hpp"

namespace shelab {

void CsvTable::add(std::vector<CsvCell> row) {
    if (row.size() != header.size()) {
        throw InvalidArgument(fmt::format("csv row has {} fields, header has {}", row.size(), header.size()));
    }
    rows.push_back(std::move(row));
}

namespace {

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string format_cell(const CsvCell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) return fmt::format("{:.17g}", *d);
    if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
    return quote(std::get<std::string>(cell));
}

std::string to_csv(const CsvTable& table) {
    std::string out;
    for (std::size_t i = 0; i < table.header.size(); ++i) out += (i ? "," : "") + quote(table.header[i]);
    out += "\r\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_cell(row[i]);
        out += "\r\n";
    }
    return out;
}

void write_text(const std::string& text, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot open {} for writing", path.string()));
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.close();
    if (!out) throw IoError(fmt::format("write failed for {}", path.string()));
}

void write_csv(const CsvTable& table, const std::filesystem::path& path) { write_text(to_csv(table), path); }

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
            any = true;
        } else if (c == '\r' || c == '\n') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            row.push_back(std::move(field));
            field.clear();
            rows.push_back(std::move(row));
            row.clear();
            any = false;
        } else {
            field += c;
            any = true;
        }
    }
    if (quoted) throw InvalidArgument("unterminated quoted csv field");
    if (any) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

void SummaryRecord::add(const std::string& key, double value) { entries.emplace_back(key, fmt::format("{:.17g}", value)); }
void SummaryRecord::add(const std::string& key, long long value) { entries.emplace_back(key, std::to_string(value)); }
void SummaryRecord::add(const std::string& key, const std::string& value) { entries.emplace_back(key, value); }

std::string SummaryRecord::text() const {
    std::string out;
    for (const auto& [k, v] : entries) out += k + " = " + v + "\n";
    return out;
}

}  // namespace shelab
