#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fundiff {

/// One output field. std::monostate is an empty field (divergent or
/// unreachable values); it serializes as an empty CSV field or JSON null.
using Cell = std::variant<std::monostate, double, std::int64_t, bool, std::string>;

enum class OutputFormat { csv, json };

OutputFormat output_format_from_string(const std::string& text);

/// Row-oriented result table with a provenance header.
struct Table {
    std::string banner;  ///< tool/version/command line, written as `#! ...`
    std::vector<std::pair<std::string, std::string>> header;  ///< resolved parameters, in order
    std::vector<std::string> notes;                           ///< free-text banner lines
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_header(std::string key, std::string value) { header.emplace_back(std::move(key), std::move(value)); }
};

/// CSV: `#! banner`, then `# key = value` lines (a valid config file once the
/// `# ` prefix is stripped), `# NOTE:` lines, the column line, and rows.
void write_csv(std::ostream& out, const Table& table);
/// JSON object {"meta": {...}, "notes": [...], "columns": [...], "rows": [[...]]}.
void write_json(std::ostream& out, const Table& table);
void write_table(std::ostream& out, const Table& table, OutputFormat format);

}  // namespace fundiff
