#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

namespace ferrotorque::cli {

/// Scientific notation, 9 significant digits, '.' separator ("1.88000000e+00").
std::string format_number(double value);

/// Rounds to the 9 significant digits that format_number prints, so JSON
/// output matches the CSV text.
double round9(double value);

/// Pretty-printed JSON with a trailing newline.
std::string dump_json(const nlohmann::json& j);

/// Writes through a temporary file in the same directory and renames it over
/// the target, creating parent directories as needed.
void write_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace ferrotorque::cli
