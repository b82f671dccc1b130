#include "chiral/io.hpp"

#include "chiral/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace chiral {

OutputFormat format_from_string(const std::string& name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    if (name == "both") return OutputFormat::Both;
    throw DomainError("format: expected csv, json or both, got '" + name + "'");
}

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) {
        throw DomainError("row width does not match the column count");
    }
    rows.push_back(std::move(row));
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

std::string cell_text(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    return std::get<std::string>(c);
}

nlohmann::json cell_json(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) {
        // JSON has no inf/nan literals; keep them as strings so nothing is lost.
        if (!std::isfinite(*d)) return format_number(*d);
        return *d;
    }
    if (const auto* i = std::get_if<long long>(&c)) return *i;
    return std::get<std::string>(c);
}

} // namespace

std::string to_csv(const Table& table) {
    std::ostringstream os;
    os << "# " << kArtifactVersion << '\n';
    for (const auto& [key, value] : table.metadata.items()) {
        os << "# " << key << ": " << value.dump() << '\n';
    }
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        os << (i ? "," : "") << table.columns[i];
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "," : "") << cell_text(row[i]);
        }
        os << '\n';
    }
    return os.str();
}

nlohmann::json to_json(const Table& table) {
    nlohmann::json doc;
    doc["artifact"] = kArtifactVersion;
    doc["metadata"] = table.metadata;
    doc["columns"] = table.columns;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto& c : row) r.push_back(cell_json(c));
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    return doc;
}

void ensure_writable_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("cannot create output directory '" + dir.string() + "'");
    }
    const auto probe = dir / ".chiral_chain_write_probe";
    {
        std::ofstream f(probe);
        if (!f) {
            throw IoError("output directory '" + dir.string() + "' is not writable");
        }
    }
    std::filesystem::remove(probe, ec);
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    f << text;
    if (!f) {
        throw IoError("write to '" + path.string() + "' failed");
    }
}

} // namespace

std::vector<std::filesystem::path> write_table(const Table& table,
                                               const std::filesystem::path& dir,
                                               const std::string& stem, OutputFormat format) {
    ensure_writable_dir(dir);
    std::vector<std::filesystem::path> written;
    if (format != OutputFormat::Json) {
        written.push_back(dir / (stem + ".csv"));
        write_text(written.back(), to_csv(table));
    }
    if (format != OutputFormat::Csv) {
        written.push_back(dir / (stem + ".json"));
        write_text(written.back(), to_json(table).dump(1) + "\n");
    }
    return written;
}

} // namespace chiral
