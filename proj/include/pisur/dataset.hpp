// Column-named numeric dataset. Convention throughout: input columns first,
// the output column (when present) last.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace pisur {

struct Dataset {
  std::vector<std::string> names;
  Eigen::MatrixXd values;      // rows x names.size(), no missing entries
  bool has_output = false;     // last column is the output when true
  int n_primary = -1;          // leading input columns that are original
                               // (unexpanded) quantities; -1 means all
  std::string tag;             // provenance: "training" | "test" | ...

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
  int num_inputs() const { return static_cast<int>(cols()) - (has_output ? 1 : 0); }
  int primary_inputs() const { return n_primary < 0 ? num_inputs() : n_primary; }

  /// Index of a named column, or -1.
  int index_of(const std::string& name) const;
  bool has(const std::string& name) const { return index_of(name) >= 0; }
  Eigen::VectorXd column(const std::string& name) const;

  const std::string& output_name() const;
  Eigen::VectorXd output() const;

  /// Structural + bitwise content hash (names, flags, raw double bytes).
  std::uint64_t checksum() const;

  /// Throws ConfigError unless names/values shapes agree and entries are finite.
  void validate() const;
};

}  // namespace pisur
