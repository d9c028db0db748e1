#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace esboot::cli {

/// Reads the "epsilon" column of a header-first CSV. A file with a single
/// column is read whatever its header says.
std::vector<double> read_returns_csv(const std::filesystem::path& path);

/// Opens `dir / name` for writing, creating `dir` when needed.
std::ofstream open_output(const std::filesystem::path& dir, const std::string& name);

/// Writes a double with 17 significant digits.
void put_number(std::ostream& os, double v);

/// Pretty-printed JSON whose floating-point values carry 17 significant digits.
void write_json(std::ostream& os, const nlohmann::ordered_json& j);

}  // namespace esboot::cli
