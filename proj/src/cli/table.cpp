#include "fundiff/table.hpp"

#include <ostream>

#include <json.hpp>

#include "fundiff/config.hpp"
#include "fundiff/errors.hpp"

namespace fundiff {

OutputFormat output_format_from_string(const std::string& text) {
    if (text == "csv") return OutputFormat::csv;
    if (text == "json") return OutputFormat::json;
    throw ConfigError("unknown output format \"" + text + "\" (expected csv or json)");
}

namespace {

struct CsvCell {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const { return v; }
};

struct JsonCell {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(double v) const { return v; }
    nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
    nlohmann::ordered_json operator()(bool v) const { return v; }
    nlohmann::ordered_json operator()(const std::string& v) const { return v; }
};

}  // namespace

void write_csv(std::ostream& out, const Table& table) {
    if (!table.banner.empty()) out << "#! " << table.banner << '\n';
    for (const auto& [k, v] : table.header) out << "# " << k << " = " << v << '\n';
    for (const auto& note : table.notes) out << "# NOTE: " << note << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << std::visit(CsvCell{}, row[i]);
        out << '\n';
    }
}

void write_json(std::ostream& out, const Table& table) {
    nlohmann::ordered_json doc;
    doc["meta"] = nlohmann::ordered_json::object();
    if (!table.banner.empty()) doc["meta"]["tool"] = table.banner;
    for (const auto& [k, v] : table.header) doc["meta"][k] = v;
    doc["notes"] = table.notes;
    doc["columns"] = table.columns;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        auto& r = doc["rows"].emplace_back(nlohmann::ordered_json::array());
        for (const auto& cell : row) r.push_back(std::visit(JsonCell{}, cell));
    }
    out << doc.dump(1) << '\n';
}

void write_table(std::ostream& out, const Table& table, OutputFormat format) {
    if (format == OutputFormat::json) {
        write_json(out, table);
    } else {
        write_csv(out, table);
    }
}

}  // namespace fundiff
