// CSV and small-file helpers used by the harness and CLI.
#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "pisur/dataset.hpp"

namespace pisur {

/// Writes a header row of column names then one row per design point,
/// full round-trip precision.
void write_csv(const std::filesystem::path& path, const Dataset& data);

/// Reads a header + numeric rows; has_output is left false (caller decides).
Dataset read_csv(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

}  // namespace pisur
