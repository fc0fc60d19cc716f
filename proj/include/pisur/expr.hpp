// Expression trees over physical quantities: the algebra behind curated
// dimensionless recipes and output inversion maps. Dimension checking is
// exact (rational exponents); numeric evaluation is per-row over a dataset.
#pragma once

#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

#include "pisur/dimension.hpp"

namespace pisur {

class QuantityExpr {
 public:
  enum class Kind { Var, Const, Add, Sub, Mul, Div, Pow, Log, Exp };

  QuantityExpr() = default;

  static QuantityExpr var(std::string name);
  static QuantityExpr constant(double value);

  bool valid() const { return node_ != nullptr; }
  std::string str() const;

  /// Variable names referenced by the tree (deduplicated, first-use order).
  std::vector<std::string> leaves() const;

  nlohmann::json to_json() const;
  static QuantityExpr from_json(const nlohmann::json& j);

  friend QuantityExpr operator+(const QuantityExpr& a, const QuantityExpr& b);
  friend QuantityExpr operator-(const QuantityExpr& a, const QuantityExpr& b);
  friend QuantityExpr operator*(const QuantityExpr& a, const QuantityExpr& b);
  friend QuantityExpr operator/(const QuantityExpr& a, const QuantityExpr& b);
  friend QuantityExpr pow(const QuantityExpr& a, const Rational& r);
  friend QuantityExpr root(const QuantityExpr& a, long long k);  // pow(1/k)
  friend QuantityExpr log(const QuantityExpr& a);
  friend QuantityExpr exp(const QuantityExpr& a);

  struct Node {
    Kind kind;
    std::string name;        // Var
    double value = 0.0;      // Const
    Rational exponent;       // Pow
    std::shared_ptr<const Node> a, b;
  };
  const Node* node() const { return node_.get(); }

 private:
  explicit QuantityExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Dimension environment: resolves variable names to dimension vectors.
using DimensionEnv = std::function<const DimensionVector*(const std::string&)>;

/// Returns the expression's dimension; throws DimensionMismatch on add/sub
/// of unequal dimensions, NonDimensionlessArg on log/exp of a dimensioned
/// operand, UnknownVariable on unresolved leaves.
DimensionVector check_expr(const QuantityExpr& e, const SystemSpec& env);
DimensionVector check_expr(const QuantityExpr& e, const DimensionEnv& env);

/// Expression bound to column indices of a dataset row for fast repeated
/// evaluation. Throws DomainError on log/root of nonpositive values.
class BoundExpr {
 public:
  BoundExpr() = default;
  BoundExpr(const QuantityExpr& e, const std::unordered_map<std::string, int>& columns);

  double eval(Eigen::Ref<const Eigen::RowVectorXd> row) const;

 private:
  struct Op {
    QuantityExpr::Kind kind;
    int column = -1;       // Var
    double value = 0.0;    // Const
    Rational exponent;     // Pow
  };
  std::vector<Op> program_;  // postfix
  mutable std::vector<double> stack_;
};

/// One-off evaluation against a name -> value map (tests, tiny inversions).
double eval_expr(const QuantityExpr& e, const std::unordered_map<std::string, double>& values);

}  // namespace pisur
