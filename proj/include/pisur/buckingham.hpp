// Buckingham Pi machinery: basis-set validation over exact rational
// dimension matrices, monomial nondimensionalization, curated recipe
// support, dataset transformation and the log/expanded-log input
// arrangements.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pisur/dataset.hpp"
#include "pisur/dimension.hpp"
#include "pisur/expr.hpp"
#include "pisur/fanova_report.hpp"

namespace pisur {

/// Rows are the fundamental dimensions actually present in the system,
/// columns the input variables, entries exact rationals.
struct DimensionMatrix {
  std::vector<Dim> dims;                  // p rows, canonical order
  std::vector<std::string> variables;     // all inputs, declaration order
  RationalMatrix m;                       // p x variables

  static DimensionMatrix from_system(const SystemSpec& sys);
};

/// Exact rank of a rational matrix by Gaussian elimination.
int rational_rank(RationalMatrix a);

/// Solves a full-column-rank square system exactly; throws Infeasible when
/// singular or inconsistent.
RationalVector rational_solve(RationalMatrix a, RationalVector b);

struct BasisSet {
  std::vector<std::string> members;  // p variable names, selection order
  std::vector<Dim> dims;             // row labels of basis_matrix
  RationalMatrix basis_matrix;       // p x p, full rank

  bool contains(const std::string& name) const;
};

/// Validates candidate basis quantities against representativity (checked
/// first, over all remaining inputs and the output) and independence.
/// Throws WrongCount / NotRepresentative / NotIndependent / UnknownVariable.
BasisSet validate_basis(const std::vector<std::string>& candidates, const SystemSpec& sys);

/// Exponents a with basis_matrix * a = dim(v), exact. A dimensionless v
/// yields the zero vector.
RationalVector solve_exponents(const VariableSpec& v, const BasisSet& basis);

// ---------------------------------------------------------------------------
// Transforms
// ---------------------------------------------------------------------------

struct Recipe {
  std::string qname;    // derived column name ("q1", ..., "q0")
  std::string variable; // original variable this recipe nondimensionalizes
  QuantityExpr expr;
};

struct CuratedRecipe {
  std::string variable;
  QuantityExpr expr;
};

struct CuratedOutput {
  QuantityExpr expr;
  std::optional<QuantityExpr> inverse;  // over original variables + var("q0")
};

struct PiTransform {
  BasisSet basis;
  std::vector<Recipe> inputs;    // one per non-basis input, all dimensionless
  Recipe output;                 // q0
  QuantityExpr output_inverse;   // original output from q0 + original inputs
  std::vector<std::string> source_columns;  // original variables consumed

  nlohmann::json to_json() const;
  static PiTransform from_json(const nlohmann::json& j);
};

/// Builds the d - p input recipes plus the output recipe and its inverse.
/// Curated recipes (by variable) override the monomial solver; a curated
/// output must carry an inverse (NoInverse otherwise) and every curated
/// expression must check dimensionless (CuratedNotDimensionless).
PiTransform build_pi_transform(const SystemSpec& sys, const BasisSet& basis,
                               const std::vector<CuratedRecipe>& curated_inputs = {},
                               const std::optional<CuratedOutput>& curated_output = std::nullopt);

/// Evaluates all recipes row-wise. The output column is transformed only
/// when `data` carries one. Row order preserved; throws DomainError on
/// log/root of nonpositive values.
Dataset apply_transform(const PiTransform& t, const Dataset& data);

/// Maps predicted q0 values back to the original output scale using the
/// transform's inverse and the original-variable columns of `original`.
Eigen::VectorXd invert_output(const PiTransform& t, const Dataset& original,
                              const Eigen::VectorXd& q0_pred);

// ---------------------------------------------------------------------------
// Input arrangements
// ---------------------------------------------------------------------------

enum class InputArrangement { Raw, Log, ExpandedLog };

const char* arrangement_name(InputArrangement a);  // "raw", "log", "expanded-log"
InputArrangement arrangement_from_name(std::string_view s);

/// raw: unchanged. log: every input column -> ln. expanded-log: logged
/// columns plus ln(xi)+ln(xj) and ln(xi)-ln(xj) for every unordered pair,
/// in pair-lexicographic order. Output column untouched; n_primary marks
/// the unexpanded inputs (trend regressors).
Dataset arrange_inputs(const Dataset& data, InputArrangement kind);

// ---------------------------------------------------------------------------
// FANOVA-driven basis recommendation
// ---------------------------------------------------------------------------

/// Greedy selection: inputs sorted by main-effect percentage descending
/// (ties by declaration order), admitted iff they strictly increase the
/// rank of the selected dimension submatrix, stopping at rank p.
/// Throws Infeasible when no size-p basis exists among varying inputs.
BasisSet recommend_basis(const SystemSpec& sys, const FanovaReport& fanova);

}  // namespace pisur
