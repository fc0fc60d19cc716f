#include "pisur/dataset.hpp"

#include <cmath>
#include <cstring>

#include "pisur/error.hpp"

namespace pisur {

int Dataset::index_of(const std::string& name) const {
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return -1;
}

Eigen::VectorXd Dataset::column(const std::string& name) const {
  int idx = index_of(name);
  if (idx < 0) throw ColumnMismatch("dataset has no column '" + name + "'");
  return values.col(idx);
}

const std::string& Dataset::output_name() const {
  if (!has_output) throw ColumnMismatch("dataset has no output column");
  return names.back();
}

Eigen::VectorXd Dataset::output() const {
  if (!has_output) throw ColumnMismatch("dataset has no output column");
  return values.col(values.cols() - 1);
}

std::uint64_t Dataset::checksum() const {
  // FNV-1a over names, flags and the raw value bytes.
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  for (const auto& n : names) mix(n.data(), n.size());
  unsigned char flags[2] = {static_cast<unsigned char>(has_output),
                            static_cast<unsigned char>(n_primary & 0xff)};
  mix(flags, sizeof(flags));
  for (Eigen::Index c = 0; c < values.cols(); ++c)
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
      double v = values(r, c);
      mix(&v, sizeof(v));
    }
  return h;
}

void Dataset::validate() const {
  if (static_cast<Eigen::Index>(names.size()) != values.cols())
    throw ConfigError("dataset: names/values column mismatch");
  if (values.rows() < 1) throw ConfigError("dataset: empty (n >= 1 required)");
  if (has_output && names.empty()) throw ConfigError("dataset: output flagged but no columns");
  if (n_primary > num_inputs()) throw ConfigError("dataset: n_primary exceeds input count");
  if (!values.allFinite()) throw ConfigError("dataset: non-finite entry");
}

}  // namespace pisur
