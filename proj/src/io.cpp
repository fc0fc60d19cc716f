#include "pisur/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pisur/error.hpp"

namespace pisur {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
  }
  return std::string(buf, ptr);
}

void write_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
  for (size_t i = 0; i < data.names.size(); ++i) {
    if (i) out << ',';
    out << data.names[i];
  }
  out << '\n';
  for (Eigen::Index r = 0; r < data.rows(); ++r) {
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
      if (c) out << ',';
      out << format_double(data.values(r, c));
    }
    out << '\n';
  }
}

Dataset read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty csv '" + path.string() + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  Dataset d;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) d.names.push_back(cell);
  }
  std::vector<double> flat;
  Eigen::Index rows = 0;
  const size_t k = d.names.size();
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    size_t got = 0;
    while (std::getline(ss, cell, ',')) {
      try {
        flat.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigError("csv '" + path.string() + "': bad number '" + cell + "'");
      }
      ++got;
    }
    if (got != k)
      throw ConfigError("csv '" + path.string() + "': row with " + std::to_string(got) +
                        " cells, expected " + std::to_string(k));
    ++rows;
  }
  d.values.resize(rows, static_cast<Eigen::Index>(k));
  for (Eigen::Index r = 0; r < rows; ++r)
    for (size_t c = 0; c < k; ++c) d.values(r, static_cast<Eigen::Index>(c)) = flat[r * k + c];
  return d;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
  out << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

nlohmann::json read_json(const std::filesystem::path& path) {
  return nlohmann::json::parse(read_text(path));
}

}  // namespace pisur
