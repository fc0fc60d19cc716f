// Dimension-vector algebra over the seven fundamental dimensions, plus the
// variable/system descriptions everything downstream consumes.
//
// Fixed dimension ordering: M, L, T, Theta, Q, N, Iv
// (mass, length, time, temperature, electric current, amount of substance,
// luminous intensity).
#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pisur/rational.hpp"

namespace pisur {

enum class Dim : int { M = 0, L, T, Theta, Q, N, Iv };

inline constexpr int kDimCount = 7;
inline constexpr std::array<Dim, kDimCount> kAllDims = {
    Dim::M, Dim::L, Dim::T, Dim::Theta, Dim::Q, Dim::N, Dim::Iv};

const char* dim_symbol(Dim d);            // "M", "L", "T", "Theta", "Q", "N", "Iv"
std::optional<Dim> dim_from_symbol(std::string_view s);

/// Exact rational exponents over the fundamental dimensions.
class DimensionVector {
 public:
  using Exponents = Eigen::Matrix<Rational, kDimCount, 1>;

  DimensionVector() { e_.setConstant(Rational(0)); }
  static DimensionVector dimensionless() { return DimensionVector(); }
  static DimensionVector of(std::initializer_list<std::pair<Dim, Rational>> entries);

  const Rational& operator[](Dim d) const { return e_[static_cast<int>(d)]; }
  Rational& operator[](Dim d) { return e_[static_cast<int>(d)]; }
  const Exponents& exponents() const { return e_; }

  bool is_dimensionless() const;
  std::string str() const;  // e.g. "L^2 T^-1"; "1" when dimensionless

  friend bool operator==(const DimensionVector& a, const DimensionVector& b);
  friend bool operator!=(const DimensionVector& a, const DimensionVector& b) { return !(a == b); }

 private:
  Exponents e_;
};

DimensionVector dim_mul(const DimensionVector& a, const DimensionVector& b);
DimensionVector dim_div(const DimensionVector& a, const DimensionVector& b);
DimensionVector dim_pow(const DimensionVector& a, const Rational& r);
DimensionVector dim_inverse(const DimensionVector& a);

// ---------------------------------------------------------------------------
// Variables and systems
// ---------------------------------------------------------------------------

enum class VarRole { Input, Output, Constant };

const char* var_role_name(VarRole role);
VarRole var_role_from_name(std::string_view s);

struct Range {
  double lo = 0;
  double hi = 0;
  double width() const { return hi - lo; }
};

struct VariableSpec {
  std::string name;
  DimensionVector dimension;
  std::string units;          // display metadata only; consistency assumed
  VarRole role = VarRole::Input;
  Range training_range{0, 0};
  std::optional<Range> extrapolation_range;

  bool is_constant() const { return role == VarRole::Constant; }
  /// Range used for a given test regime; falls back to the training range
  /// when no extrapolation shift is declared.
  const Range& range_for(bool extrapolation) const {
    return (extrapolation && extrapolation_range) ? *extrapolation_range : training_range;
  }
};

/// An ordered set of input variables (constants included) plus one output.
class SystemSpec {
 public:
  SystemSpec() = default;
  SystemSpec(std::string name, std::vector<VariableSpec> inputs, VariableSpec output);

  const std::string& name() const { return name_; }
  const std::vector<VariableSpec>& inputs() const { return inputs_; }
  const VariableSpec& output() const { return output_; }

  const VariableSpec* find(std::string_view var_name) const;  // inputs + output
  const VariableSpec& require(std::string_view var_name) const;

  /// Number of non-constant inputs (the "d" of the d - p counting).
  int d() const;
  int num_inputs() const { return static_cast<int>(inputs_.size()); }

  /// Fundamental dimensions with a nonzero exponent anywhere in the system,
  /// in canonical order. p() is its size.
  std::vector<Dim> present_dimensions() const;
  int p() const { return static_cast<int>(present_dimensions().size()); }

  std::vector<VariableSpec> varying_inputs() const;
  std::vector<VariableSpec> constant_inputs() const;

  nlohmann::json to_json() const;
  static SystemSpec from_json(const nlohmann::json& j);

 private:
  std::string name_;
  std::vector<VariableSpec> inputs_;
  VariableSpec output_;
};

nlohmann::json dimension_to_json(const DimensionVector& d);
DimensionVector dimension_from_json(const nlohmann::json& j);

}  // namespace pisur
