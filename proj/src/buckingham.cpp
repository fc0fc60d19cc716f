#include "pisur/buckingham.hpp"

#include <algorithm>
#include <numeric>

#include <nlohmann/json.hpp>

#include "pisur/error.hpp"

namespace pisur {

// ---------------------------------------------------------------------------
// Exact rational linear algebra
// ---------------------------------------------------------------------------

int rational_rank(RationalMatrix a) {
  const Eigen::Index rows = a.rows(), cols = a.cols();
  Eigen::Index rank = 0;
  for (Eigen::Index c = 0; c < cols && rank < rows; ++c) {
    Eigen::Index piv = -1;
    for (Eigen::Index r = rank; r < rows; ++r)
      if (!a(r, c).is_zero()) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    if (piv != rank)
      for (Eigen::Index cc = 0; cc < cols; ++cc) std::swap(a(piv, cc), a(rank, cc));
    for (Eigen::Index r = rank + 1; r < rows; ++r) {
      if (a(r, c).is_zero()) continue;
      Rational f = a(r, c) / a(rank, c);
      for (Eigen::Index cc = c; cc < cols; ++cc) a(r, cc) -= f * a(rank, cc);
    }
    ++rank;
  }
  return static_cast<int>(rank);
}

RationalVector rational_solve(RationalMatrix a, RationalVector b) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || b.size() != n) throw Infeasible("rational_solve: non-square system");
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index piv = -1;
    for (Eigen::Index r = c; r < n; ++r)
      if (!a(r, c).is_zero()) {
        piv = r;
        break;
      }
    if (piv < 0) throw Infeasible("rational_solve: singular matrix");
    if (piv != c) {
      for (Eigen::Index cc = 0; cc < n; ++cc) std::swap(a(piv, cc), a(c, cc));
      std::swap(b[piv], b[c]);
    }
    for (Eigen::Index r = c + 1; r < n; ++r) {
      if (a(r, c).is_zero()) continue;
      Rational f = a(r, c) / a(c, c);
      for (Eigen::Index cc = c; cc < n; ++cc) a(r, cc) -= f * a(c, cc);
      b[r] -= f * b[c];
    }
  }
  RationalVector x(n);
  for (Eigen::Index r = n - 1; r >= 0; --r) {
    Rational s = b[r];
    for (Eigen::Index cc = r + 1; cc < n; ++cc) s -= a(r, cc) * x[cc];
    x[r] = s / a(r, r);
  }
  return x;
}

// ---------------------------------------------------------------------------
// Dimension matrix and basis validation
// ---------------------------------------------------------------------------

DimensionMatrix DimensionMatrix::from_system(const SystemSpec& sys) {
  DimensionMatrix dm;
  dm.dims = sys.present_dimensions();
  const Eigen::Index p = static_cast<Eigen::Index>(dm.dims.size());
  const Eigen::Index k = static_cast<Eigen::Index>(sys.inputs().size());
  dm.m.resize(p, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    dm.variables.push_back(sys.inputs()[j].name);
    for (Eigen::Index i = 0; i < p; ++i) dm.m(i, j) = sys.inputs()[j].dimension[dm.dims[i]];
  }
  return dm;
}

namespace {

RationalVector restricted_dimension(const VariableSpec& v, const std::vector<Dim>& dims) {
  RationalVector col(static_cast<Eigen::Index>(dims.size()));
  for (size_t i = 0; i < dims.size(); ++i) col[static_cast<Eigen::Index>(i)] = v.dimension[dims[i]];
  // Anything outside the tracked dimensions must be zero.
  for (Dim d : kAllDims) {
    if (std::find(dims.begin(), dims.end(), d) != dims.end()) continue;
    if (!v.dimension[d].is_zero())
      throw Infeasible("variable '" + v.name + "' carries dimension " + dim_symbol(d) +
                       " outside the system's present dimensions");
  }
  return col;
}

std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

}  // namespace

bool BasisSet::contains(const std::string& name) const {
  return std::find(members.begin(), members.end(), name) != members.end();
}

BasisSet validate_basis(const std::vector<std::string>& candidates, const SystemSpec& sys) {
  const std::vector<Dim> dims = sys.present_dimensions();
  const int p = static_cast<int>(dims.size());
  if (static_cast<int>(candidates.size()) != p)
    throw WrongCount("basis {" + join_names(candidates) + "}: expected p = " + std::to_string(p) +
                     " quantities, got " + std::to_string(candidates.size()));

  std::vector<const VariableSpec*> members;
  for (const auto& name : candidates) {
    const VariableSpec* v = sys.find(name);
    if (!v || v->role == VarRole::Output)
      throw UnknownVariable("basis candidate '" + name + "' is not an input of system '" +
                            sys.name() + "'");
    if (std::count(candidates.begin(), candidates.end(), name) > 1)
      throw WrongCount("basis candidate '" + name + "' repeated");
    members.push_back(v);
  }

  RationalMatrix basis(p, p);
  for (int j = 0; j < p; ++j) basis.col(j) = restricted_dimension(*members[j], dims);
  const int basis_rank = rational_rank(basis);

  // Representativity first: every remaining variable (and the output) must
  // lie in the candidate column space.
  auto check_member = [&](const VariableSpec& v) {
    RationalMatrix aug(p, p + 1);
    aug.leftCols(p) = basis;
    aug.col(p) = restricted_dimension(v, dims);
    if (rational_rank(aug) != basis_rank)
      throw NotRepresentative("basis {" + join_names(candidates) + "}: dimensions of '" + v.name +
                              "' [" + v.dimension.str() + "] cannot be formed from the basis");
  };
  for (const auto& v : sys.inputs())
    if (std::find(candidates.begin(), candidates.end(), v.name) == candidates.end())
      check_member(v);
  check_member(sys.output());

  if (basis_rank < p)
    throw NotIndependent("basis {" + join_names(candidates) +
                         "}: dimension vectors are not independent (rank " +
                         std::to_string(basis_rank) + " < " + std::to_string(p) + ")");

  BasisSet out;
  out.members = candidates;
  out.dims = dims;
  out.basis_matrix = std::move(basis);
  return out;
}

RationalVector solve_exponents(const VariableSpec& v, const BasisSet& basis) {
  return rational_solve(basis.basis_matrix, restricted_dimension(v, basis.dims));
}

// ---------------------------------------------------------------------------
// Transform construction
// ---------------------------------------------------------------------------

namespace {

// v / prod_k b_k^{a_k}; exponent-zero factors dropped, exponent-one bare.
QuantityExpr monomial_recipe(const std::string& variable, const BasisSet& basis,
                             const RationalVector& a) {
  QuantityExpr denom;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    if (a[k].is_zero()) continue;
    QuantityExpr factor = QuantityExpr::var(basis.members[k]);
    if (a[k] != Rational(1)) factor = pow(factor, a[k]);
    denom = denom.valid() ? denom * factor : factor;
  }
  QuantityExpr v = QuantityExpr::var(variable);
  return denom.valid() ? v / denom : v;
}

// q0 * prod_k b_k^{a_k}: closed-form inverse of the monomial output recipe.
QuantityExpr monomial_inverse(const BasisSet& basis, const RationalVector& a) {
  QuantityExpr out = QuantityExpr::var("q0");
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    if (a[k].is_zero()) continue;
    QuantityExpr factor = QuantityExpr::var(basis.members[k]);
    if (a[k] != Rational(1)) factor = pow(factor, a[k]);
    out = out * factor;
  }
  return out;
}

DimensionEnv env_with_q0(const SystemSpec& sys, const DimensionVector& q0_dim) {
  static const DimensionVector dimensionless = DimensionVector::dimensionless();
  (void)dimensionless;
  return [&sys, q0_dim](const std::string& name) -> const DimensionVector* {
    static thread_local DimensionVector q0_storage;
    if (name == "q0") {
      q0_storage = q0_dim;
      return &q0_storage;
    }
    const VariableSpec* v = sys.find(name);
    return v ? &v->dimension : nullptr;
  };
}

}  // namespace

PiTransform build_pi_transform(const SystemSpec& sys, const BasisSet& basis,
                               const std::vector<CuratedRecipe>& curated_inputs,
                               const std::optional<CuratedOutput>& curated_output) {
  if (sys.find("q0"))
    throw ConfigError("system '" + sys.name() + "': variable name 'q0' is reserved");

  std::vector<const VariableSpec*> non_basis;
  for (const auto& v : sys.inputs())
    if (!basis.contains(v.name)) non_basis.push_back(&v);

  // Validate curated recipes and index them by variable.
  std::vector<std::pair<const VariableSpec*, const CuratedRecipe*>> curated;
  for (const auto& c : curated_inputs) {
    const VariableSpec* v = sys.find(c.variable);
    if (!v || v->role == VarRole::Output)
      throw UnknownVariable("curated recipe targets unknown input '" + c.variable + "'");
    if (basis.contains(c.variable))
      throw ConfigError("curated recipe targets basis quantity '" + c.variable + "'");
    if (!check_expr(c.expr, sys).is_dimensionless())
      throw CuratedNotDimensionless("curated recipe for '" + c.variable + "' (" + c.expr.str() +
                                    ") is not dimensionless");
    curated.emplace_back(v, &c);
  }

  // When curated recipes cover every non-basis input, their order defines the
  // derived column order; otherwise declaration order with overrides.
  std::vector<std::pair<const VariableSpec*, const QuantityExpr*>> ordered;
  if (curated.size() == non_basis.size() && !curated.empty()) {
    for (const auto& [v, c] : curated) ordered.emplace_back(v, &c->expr);
    for (const VariableSpec* v : non_basis)
      if (std::none_of(curated.begin(), curated.end(),
                       [&](const auto& p) { return p.first == v; }))
        throw ConfigError("curated recipes do not cover non-basis input '" + v->name + "'");
  } else {
    for (const VariableSpec* v : non_basis) {
      const QuantityExpr* expr = nullptr;
      for (const auto& [cv, c] : curated)
        if (cv == v) expr = &c->expr;
      ordered.emplace_back(v, expr);
    }
  }

  PiTransform t;
  t.basis = basis;
  int qi = 1;
  for (const auto& [v, expr] : ordered) {
    Recipe r;
    r.qname = "q" + std::to_string(qi++);
    r.variable = v->name;
    r.expr = expr ? *expr : monomial_recipe(v->name, basis, solve_exponents(*v, basis));
    t.inputs.push_back(std::move(r));
  }

  const VariableSpec& y = sys.output();
  if (curated_output) {
    if (!check_expr(curated_output->expr, sys).is_dimensionless())
      throw CuratedNotDimensionless("curated output recipe (" + curated_output->expr.str() +
                                    ") is not dimensionless");
    if (!curated_output->inverse)
      throw NoInverse("curated output recipe (" + curated_output->expr.str() +
                      ") has no inverse in '" + y.name + "'");
    DimensionVector inv_dim =
        check_expr(*curated_output->inverse, env_with_q0(sys, DimensionVector::dimensionless()));
    if (inv_dim != y.dimension)
      throw DimensionMismatch("output inverse has dimension [" + inv_dim.str() +
                              "], expected [" + y.dimension.str() + "]");
    t.output = Recipe{"q0", y.name, curated_output->expr};
    t.output_inverse = *curated_output->inverse;
  } else {
    RationalVector a = solve_exponents(y, basis);
    t.output = Recipe{"q0", y.name, monomial_recipe(y.name, basis, a)};
    t.output_inverse = monomial_inverse(basis, a);
  }

  // Defensive: every emitted column must be dimensionless.
  for (const auto& r : t.inputs)
    if (!check_expr(r.expr, sys).is_dimensionless())
      throw CuratedNotDimensionless("recipe " + r.qname + " (" + r.expr.str() +
                                    ") is not dimensionless");
  if (!check_expr(t.output.expr, sys).is_dimensionless())
    throw CuratedNotDimensionless("output recipe is not dimensionless");

  // Original variables consumed by any recipe or the inverse.
  std::vector<std::string> sources;
  auto add_sources = [&sources](const QuantityExpr& e) {
    for (const auto& leaf : e.leaves())
      if (leaf != "q0" && std::find(sources.begin(), sources.end(), leaf) == sources.end())
        sources.push_back(leaf);
  };
  for (const auto& r : t.inputs) add_sources(r.expr);
  add_sources(t.output.expr);
  add_sources(t.output_inverse);
  t.source_columns = std::move(sources);
  return t;
}

Dataset apply_transform(const PiTransform& t, const Dataset& data) {
  std::unordered_map<std::string, int> columns;
  for (size_t i = 0; i < data.names.size(); ++i) columns[data.names[i]] = static_cast<int>(i);

  std::vector<BoundExpr> programs;
  std::vector<std::string> names;
  for (const auto& r : t.inputs) {
    programs.emplace_back(r.expr, columns);
    names.push_back(r.qname);
  }
  if (data.has_output) {
    programs.emplace_back(t.output.expr, columns);
    names.push_back(t.output.qname);
  }

  Dataset out;
  out.names = std::move(names);
  out.values.resize(data.rows(), static_cast<Eigen::Index>(out.names.size()));
  out.has_output = data.has_output;
  out.n_primary = static_cast<int>(t.inputs.size());
  out.tag = data.tag;
  for (Eigen::Index r = 0; r < data.rows(); ++r) {
    for (size_t j = 0; j < programs.size(); ++j) {
      try {
        out.values(r, static_cast<Eigen::Index>(j)) = programs[j].eval(data.values.row(r));
      } catch (const DomainError& e) {
        throw DomainError("transform column '" + out.names[j] + "' row " + std::to_string(r) +
                          ": " + e.what());
      }
    }
  }
  return out;
}

Eigen::VectorXd invert_output(const PiTransform& t, const Dataset& original,
                              const Eigen::VectorXd& q0_pred) {
  if (original.rows() != q0_pred.size())
    throw ColumnMismatch("invert_output: row count mismatch");
  std::unordered_map<std::string, int> columns;
  for (size_t i = 0; i < original.names.size(); ++i)
    columns[original.names[i]] = static_cast<int>(i);
  const int q0_col = static_cast<int>(original.cols());
  columns["q0"] = q0_col;

  BoundExpr inverse(t.output_inverse, columns);
  Eigen::VectorXd out(original.rows());
  Eigen::RowVectorXd row(original.cols() + 1);
  for (Eigen::Index r = 0; r < original.rows(); ++r) {
    row.head(original.cols()) = original.values.row(r);
    row[q0_col] = q0_pred[r];
    out[r] = inverse.eval(row);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Input arrangements
// ---------------------------------------------------------------------------

const char* arrangement_name(InputArrangement a) {
  switch (a) {
    case InputArrangement::Raw: return "raw";
    case InputArrangement::Log: return "log";
    case InputArrangement::ExpandedLog: return "expanded-log";
  }
  return "?";
}

InputArrangement arrangement_from_name(std::string_view s) {
  if (s == "raw") return InputArrangement::Raw;
  if (s == "log") return InputArrangement::Log;
  if (s == "expanded-log" || s == "expanded_log") return InputArrangement::ExpandedLog;
  throw ConfigError("unknown input arrangement '" + std::string(s) + "'");
}

Dataset arrange_inputs(const Dataset& data, InputArrangement kind) {
  if (kind == InputArrangement::Raw) return data;
  const int k = data.num_inputs();
  if (data.n_primary >= 0 && data.n_primary != k)
    throw ConfigError("arrange_inputs: dataset already carries expanded columns");

  Eigen::MatrixXd logged(data.rows(), k);
  for (int j = 0; j < k; ++j)
    for (Eigen::Index r = 0; r < data.rows(); ++r) {
      double v = data.values(r, j);
      if (v <= 0.0)
        throw DomainError("arrange_inputs: log of nonpositive value in column '" + data.names[j] +
                          "' row " + std::to_string(r));
      logged(r, j) = std::log(v);
    }

  Dataset out;
  out.has_output = data.has_output;
  out.n_primary = k;
  out.tag = data.tag;
  for (int j = 0; j < k; ++j) out.names.push_back("ln(" + data.names[j] + ")");

  const int pairs = (kind == InputArrangement::ExpandedLog) ? k * (k - 1) / 2 : 0;
  out.values.resize(data.rows(), k + 2 * pairs + (data.has_output ? 1 : 0));
  out.values.leftCols(k) = logged;

  if (kind == InputArrangement::ExpandedLog) {
    int c = k;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) {
        out.names.push_back("ln(" + data.names[i] + ")+ln(" + data.names[j] + ")");
        out.values.col(c++) = logged.col(i) + logged.col(j);
        out.names.push_back("ln(" + data.names[i] + ")-ln(" + data.names[j] + ")");
        out.values.col(c++) = logged.col(i) - logged.col(j);
      }
  }
  if (data.has_output) {
    out.names.push_back(data.names.back());
    out.values.rightCols(1) = data.values.rightCols(1);
  }
  return out;
}

// ---------------------------------------------------------------------------
// FANOVA-driven basis recommendation
// ---------------------------------------------------------------------------

BasisSet recommend_basis(const SystemSpec& sys, const FanovaReport& fanova) {
  const std::vector<VariableSpec> varying = sys.varying_inputs();
  std::vector<std::string> names;
  for (const auto& v : varying) names.push_back(v.name);
  if (!fanova.covers(names))
    throw ConfigError("recommend_basis: report does not cover all varying inputs of '" +
                      sys.name() + "'");

  const std::vector<Dim> dims = sys.present_dimensions();
  const int p = static_cast<int>(dims.size());

  // Main-effect percentages drive the ordering; interactions are narrative.
  std::vector<int> order(varying.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return fanova.main_effect(varying[a].name) > fanova.main_effect(varying[b].name);
  });

  std::vector<std::string> selected;
  RationalMatrix sel(p, 0);
  int rank = 0;
  for (int idx : order) {
    if (rank == p) break;
    RationalMatrix cand(p, sel.cols() + 1);
    cand.leftCols(sel.cols()) = sel;
    cand.col(sel.cols()) = restricted_dimension(varying[idx], dims);
    int cand_rank = rational_rank(cand);
    if (cand_rank > rank) {
      sel = std::move(cand);
      rank = cand_rank;
      selected.push_back(varying[idx].name);
    }
  }
  if (rank < p)
    throw Infeasible("recommend_basis: no size-" + std::to_string(p) +
                     " basis exists among varying inputs of '" + sys.name() + "'");
  return validate_basis(selected, sys);
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

nlohmann::json PiTransform::to_json() const {
  nlohmann::json j;
  j["basis"]["members"] = basis.members;
  nlohmann::json dims = nlohmann::json::array();
  for (Dim d : basis.dims) dims.push_back(dim_symbol(d));
  j["basis"]["dims"] = dims;
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < basis.basis_matrix.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < basis.basis_matrix.cols(); ++c)
      row.push_back(basis.basis_matrix(r, c).str());
    rows.push_back(row);
  }
  j["basis"]["matrix"] = rows;
  j["inputs"] = nlohmann::json::array();
  for (const auto& r : inputs)
    j["inputs"].push_back({{"qname", r.qname}, {"variable", r.variable}, {"expr", r.expr.to_json()}});
  j["output"] = {{"qname", output.qname}, {"variable", output.variable}, {"expr", output.expr.to_json()}};
  j["output_inverse"] = output_inverse.to_json();
  j["source_columns"] = source_columns;
  return j;
}

PiTransform PiTransform::from_json(const nlohmann::json& j) {
  PiTransform t;
  t.basis.members = j.at("basis").at("members").get<std::vector<std::string>>();
  for (const auto& s : j.at("basis").at("dims")) {
    auto d = dim_from_symbol(s.get<std::string>());
    if (!d) throw ConfigError("transform json: bad dimension symbol");
    t.basis.dims.push_back(*d);
  }
  const auto& rows = j.at("basis").at("matrix");
  const Eigen::Index p = static_cast<Eigen::Index>(rows.size());
  t.basis.basis_matrix.resize(p, p == 0 ? 0 : static_cast<Eigen::Index>(rows[0].size()));
  for (Eigen::Index r = 0; r < p; ++r)
    for (Eigen::Index c = 0; c < t.basis.basis_matrix.cols(); ++c)
      t.basis.basis_matrix(r, c) = Rational::parse(rows[r][c].get<std::string>());
  for (const auto& rj : j.at("inputs"))
    t.inputs.push_back(Recipe{rj.at("qname").get<std::string>(),
                              rj.at("variable").get<std::string>(),
                              QuantityExpr::from_json(rj.at("expr"))});
  t.output = Recipe{j.at("output").at("qname").get<std::string>(),
                    j.at("output").at("variable").get<std::string>(),
                    QuantityExpr::from_json(j.at("output").at("expr"))};
  t.output_inverse = QuantityExpr::from_json(j.at("output_inverse"));
  t.source_columns = j.at("source_columns").get<std::vector<std::string>>();
  return t;
}

}  // namespace pisur
