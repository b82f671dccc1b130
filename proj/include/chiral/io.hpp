// io.hpp: tabular outputs (CSV with a `#` metadata header, JSON mirror)

#pragma once

#include "chiral/model.hpp"

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace chiral {

inline constexpr const char* kArtifactVersion = "chiral-chain 0.1.0";

enum class OutputFormat { Csv, Json, Both };

OutputFormat format_from_string(const std::string& name);

using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    // Extra header entries; "config" holds the serialized ChainConfig.
    nlohmann::json metadata = nlohmann::json::object();

    void add_row(std::vector<Cell> row);
};

// Shortest round-trip decimal; "inf", "-inf", "nan" for non-finite values.
std::string format_number(double x);

std::string to_csv(const Table& table);
nlohmann::json to_json(const Table& table);

// Throws IoError unless `dir` exists (or can be created) and accepts a file.
void ensure_writable_dir(const std::filesystem::path& dir);

// Writes <stem>.csv and/or <stem>.json into dir; returns the written paths.
std::vector<std::filesystem::path> write_table(const Table& table,
                                               const std::filesystem::path& dir,
                                               const std::string& stem, OutputFormat format);

} // namespace chiral
