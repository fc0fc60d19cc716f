#include "pisur/dimension.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "pisur/error.hpp"

namespace pisur {

const char* dim_symbol(Dim d) {
  switch (d) {
    case Dim::M: return "M";
    case Dim::L: return "L";
    case Dim::T: return "T";
    case Dim::Theta: return "Theta";
    case Dim::Q: return "Q";
    case Dim::N: return "N";
    case Dim::Iv: return "Iv";
  }
  return "?";
}

std::optional<Dim> dim_from_symbol(std::string_view s) {
  for (Dim d : kAllDims)
    if (s == dim_symbol(d)) return d;
  return std::nullopt;
}

DimensionVector DimensionVector::of(std::initializer_list<std::pair<Dim, Rational>> entries) {
  DimensionVector v;
  for (const auto& [d, r] : entries) v[d] += r;
  return v;
}

bool DimensionVector::is_dimensionless() const {
  for (Dim d : kAllDims)
    if (!(*this)[d].is_zero()) return false;
  return true;
}

std::string DimensionVector::str() const {
  std::string out;
  for (Dim d : kAllDims) {
    const Rational& r = (*this)[d];
    if (r.is_zero()) continue;
    if (!out.empty()) out += ' ';
    out += dim_symbol(d);
    if (r != Rational(1)) {
      out += '^';
      out += r.str();
    }
  }
  return out.empty() ? "1" : out;
}

bool operator==(const DimensionVector& a, const DimensionVector& b) {
  for (Dim d : kAllDims)
    if (a[d] != b[d]) return false;
  return true;
}

DimensionVector dim_mul(const DimensionVector& a, const DimensionVector& b) {
  DimensionVector out;
  for (Dim d : kAllDims) out[d] = a[d] + b[d];
  return out;
}

DimensionVector dim_div(const DimensionVector& a, const DimensionVector& b) {
  return dim_mul(a, dim_inverse(b));
}

DimensionVector dim_pow(const DimensionVector& a, const Rational& r) {
  DimensionVector out;
  for (Dim d : kAllDims) out[d] = a[d] * r;
  return out;
}

DimensionVector dim_inverse(const DimensionVector& a) { return dim_pow(a, Rational(-1)); }

// ---------------------------------------------------------------------------

const char* var_role_name(VarRole role) {
  switch (role) {
    case VarRole::Input: return "input";
    case VarRole::Output: return "output";
    case VarRole::Constant: return "constant";
  }
  return "?";
}

VarRole var_role_from_name(std::string_view s) {
  if (s == "input") return VarRole::Input;
  if (s == "output") return VarRole::Output;
  if (s == "constant") return VarRole::Constant;
  throw ConfigError("unknown variable role '" + std::string(s) + "'");
}

SystemSpec::SystemSpec(std::string name, std::vector<VariableSpec> inputs, VariableSpec output)
    : name_(std::move(name)), inputs_(std::move(inputs)), output_(std::move(output)) {
  if (output_.role != VarRole::Output)
    throw ConfigError("system '" + name_ + "': output variable must have role 'output'");
  std::vector<std::string> seen;
  auto check = [&](const VariableSpec& v) {
    if (v.name.empty()) throw ConfigError("system '" + name_ + "': variable with empty name");
    if (std::find(seen.begin(), seen.end(), v.name) != seen.end())
      throw ConfigError("system '" + name_ + "': duplicate variable name '" + v.name + "'");
    seen.push_back(v.name);
    if (v.training_range.lo > v.training_range.hi)
      throw ConfigError("variable '" + v.name + "': training range lo > hi");
    if (v.extrapolation_range && v.extrapolation_range->lo > v.extrapolation_range->hi)
      throw ConfigError("variable '" + v.name + "': extrapolation range lo > hi");
    if (v.is_constant() && v.training_range.lo != v.training_range.hi)
      throw ConfigError("constant '" + v.name + "' must have a degenerate range");
  };
  for (const auto& v : inputs_) {
    if (v.role == VarRole::Output)
      throw ConfigError("system '" + name_ + "': input list contains an output role");
    check(v);
  }
  check(output_);
}

const VariableSpec* SystemSpec::find(std::string_view var_name) const {
  for (const auto& v : inputs_)
    if (v.name == var_name) return &v;
  if (output_.name == var_name) return &output_;
  return nullptr;
}

const VariableSpec& SystemSpec::require(std::string_view var_name) const {
  if (const VariableSpec* v = find(var_name)) return *v;
  throw UnknownVariable("unknown variable '" + std::string(var_name) + "' in system '" + name_ + "'");
}

int SystemSpec::d() const {
  int count = 0;
  for (const auto& v : inputs_)
    if (!v.is_constant()) ++count;
  return count;
}

std::vector<Dim> SystemSpec::present_dimensions() const {
  std::vector<Dim> out;
  for (Dim d : kAllDims) {
    bool present = !output_.dimension[d].is_zero();
    for (const auto& v : inputs_) present = present || !v.dimension[d].is_zero();
    if (present) out.push_back(d);
  }
  return out;
}

std::vector<VariableSpec> SystemSpec::varying_inputs() const {
  std::vector<VariableSpec> out;
  for (const auto& v : inputs_)
    if (!v.is_constant()) out.push_back(v);
  return out;
}

std::vector<VariableSpec> SystemSpec::constant_inputs() const {
  std::vector<VariableSpec> out;
  for (const auto& v : inputs_)
    if (v.is_constant()) out.push_back(v);
  return out;
}

// --- JSON config format ----------------------------------------------------
//
// {
//   "name": "...",
//   "inputs": [ { "name": "...", "dimension": {"L": 1, "T": "-1/2"},
//                 "units": "...", "role": "input|constant",
//                 "training_range": [lo, hi],
//                 "extrapolation_range": [lo, hi] }, ... ],
//   "output": { ... role "output", ranges optional ... }
// }
//
// Dimension exponents are integers or "num/den" strings.

nlohmann::json dimension_to_json(const DimensionVector& d) {
  nlohmann::json j = nlohmann::json::object();
  for (Dim k : kAllDims) {
    const Rational& r = d[k];
    if (r.is_zero()) continue;
    if (r.is_integer())
      j[dim_symbol(k)] = r.num();
    else
      j[dim_symbol(k)] = r.str();
  }
  return j;
}

DimensionVector dimension_from_json(const nlohmann::json& j) {
  DimensionVector d;
  if (j.is_null()) return d;
  if (!j.is_object()) throw ConfigError("dimension must be an object of exponents");
  for (auto it = j.begin(); it != j.end(); ++it) {
    auto sym = dim_from_symbol(it.key());
    if (!sym) throw ConfigError("unknown fundamental dimension '" + it.key() + "'");
    const auto& val = it.value();
    if (val.is_number_integer())
      d[*sym] = Rational(val.get<long long>());
    else if (val.is_string())
      d[*sym] = Rational::parse(val.get<std::string>());
    else
      throw ConfigError("dimension exponent for '" + it.key() + "' must be integer or \"num/den\"");
  }
  return d;
}

namespace {

nlohmann::json range_to_json(const Range& r) { return nlohmann::json::array({r.lo, r.hi}); }

Range range_from_json(const nlohmann::json& j, const std::string& var) {
  if (!j.is_array() || j.size() != 2)
    throw ConfigError("variable '" + var + "': range must be [lo, hi]");
  return Range{j[0].get<double>(), j[1].get<double>()};
}

nlohmann::json variable_to_json(const VariableSpec& v) {
  nlohmann::json j;
  j["name"] = v.name;
  j["dimension"] = dimension_to_json(v.dimension);
  j["units"] = v.units;
  j["role"] = var_role_name(v.role);
  j["training_range"] = range_to_json(v.training_range);
  if (v.extrapolation_range) j["extrapolation_range"] = range_to_json(*v.extrapolation_range);
  return j;
}

VariableSpec variable_from_json(const nlohmann::json& j) {
  VariableSpec v;
  v.name = j.at("name").get<std::string>();
  if (j.contains("dimension")) v.dimension = dimension_from_json(j.at("dimension"));
  if (j.contains("units")) v.units = j.at("units").get<std::string>();
  if (j.contains("role")) v.role = var_role_from_name(j.at("role").get<std::string>());
  if (j.contains("training_range")) v.training_range = range_from_json(j.at("training_range"), v.name);
  if (j.contains("extrapolation_range"))
    v.extrapolation_range = range_from_json(j.at("extrapolation_range"), v.name);
  return v;
}

}  // namespace

nlohmann::json SystemSpec::to_json() const {
  nlohmann::json j;
  j["name"] = name_;
  j["inputs"] = nlohmann::json::array();
  for (const auto& v : inputs_) j["inputs"].push_back(variable_to_json(v));
  j["output"] = variable_to_json(output_);
  return j;
}

SystemSpec SystemSpec::from_json(const nlohmann::json& j) {
  std::vector<VariableSpec> inputs;
  for (const auto& vj : j.at("inputs")) inputs.push_back(variable_from_json(vj));
  VariableSpec output = variable_from_json(j.at("output"));
  return SystemSpec(j.value("name", std::string("system")), std::move(inputs), std::move(output));
}

}  // namespace pisur
