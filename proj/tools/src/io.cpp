#include "io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

#include "errors.hpp"

namespace esboot::cli {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

void write_json_value(std::ostream& os, const nlohmann::ordered_json& j, int indent) {
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    const std::string close(static_cast<std::size_t>(indent), ' ');
    if (j.is_object()) {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        bool first = true;
        for (const auto& [k, v] : j.items()) {
            if (!first) os << ",\n";
            first = false;
            os << pad << nlohmann::ordered_json(k).dump() << ": ";
            write_json_value(os, v, indent + 2);
        }
        os << '\n' << close << '}';
    } else if (j.is_array()) {
        if (j.empty()) {
            os << "[]";
            return;
        }
        const bool flat = std::all_of(j.begin(), j.end(), [](const auto& e) { return e.is_primitive(); });
        os << '[';
        bool first = true;
        for (const auto& v : j) {
            if (!first) os << (flat ? ", " : ",");
            first = false;
            if (!flat) os << '\n' << pad;
            write_json_value(os, v, indent + 2);
        }
        if (!flat) os << '\n' << close;
        os << ']';
    } else if (j.is_number_float()) {
        const double v = j.get<double>();
        if (std::isfinite(v)) {
            put_number(os, v);
        } else {
            os << "null";
        }
    } else {
        os << j.dump();
    }
}

}  // namespace

std::vector<double> read_returns_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw CliError(ErrorKind::Io, "cannot open input file " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw CliError(ErrorKind::Io, path.string() + ": empty file");
    const auto header = split(line);
    std::size_t col = header.size();
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == "epsilon") col = i;
    if (col == header.size()) {
        if (header.size() != 1)
            throw CliError(ErrorKind::Io, path.string() + ": no \"epsilon\" column in header");
        col = 0;
    }

    std::vector<double> out;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto cells = split(line);
        if (col >= cells.size())
            throw CliError(ErrorKind::Io, path.string() + ":" + std::to_string(row) + ": missing column");
        const std::string& s = cells[col];
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
            throw CliError(ErrorKind::Io, path.string() + ":" + std::to_string(row) + ": not a finite number: " + s);
        out.push_back(v);
    }
    return out;
}

std::ofstream open_output(const std::filesystem::path& dir, const std::string& name) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw CliError(ErrorKind::Io, "cannot create output directory " + dir.string() + ": " + ec.message());
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw CliError(ErrorKind::Io, "cannot write " + (dir / name).string());
    return out;
}

void put_number(std::ostream& os, double v) {
    const auto old = os.precision(17);
    os << v;
    os.precision(old);
}

void write_json(std::ostream& os, const nlohmann::ordered_json& j) {
    write_json_value(os, j, 0);
    os << '\n';
}

}  // namespace esboot::cli
