#include "pisur/expr.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "pisur/error.hpp"

namespace pisur {

using Kind = QuantityExpr::Kind;
using NodePtr = std::shared_ptr<const QuantityExpr::Node>;

namespace {

NodePtr make_node(QuantityExpr::Node n) {
  return std::make_shared<const QuantityExpr::Node>(std::move(n));
}

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::Var: return "var";
    case Kind::Const: return "const";
    case Kind::Add: return "add";
    case Kind::Sub: return "sub";
    case Kind::Mul: return "mul";
    case Kind::Div: return "div";
    case Kind::Pow: return "pow";
    case Kind::Log: return "log";
    case Kind::Exp: return "exp";
  }
  return "?";
}

Kind kind_from_name(const std::string& s) {
  for (Kind k : {Kind::Var, Kind::Const, Kind::Add, Kind::Sub, Kind::Mul, Kind::Div, Kind::Pow,
                 Kind::Log, Kind::Exp})
    if (s == kind_name(k)) return k;
  throw ConfigError("unknown expression node kind '" + s + "'");
}

}  // namespace

QuantityExpr QuantityExpr::var(std::string name) {
  return QuantityExpr(make_node({Kind::Var, std::move(name), 0.0, Rational(0), nullptr, nullptr}));
}

QuantityExpr QuantityExpr::constant(double value) {
  return QuantityExpr(make_node({Kind::Const, {}, value, Rational(0), nullptr, nullptr}));
}

QuantityExpr operator+(const QuantityExpr& a, const QuantityExpr& b) {
  return QuantityExpr(make_node({Kind::Add, {}, 0.0, Rational(0), a.node_, b.node_}));
}
QuantityExpr operator-(const QuantityExpr& a, const QuantityExpr& b) {
  return QuantityExpr(make_node({Kind::Sub, {}, 0.0, Rational(0), a.node_, b.node_}));
}
QuantityExpr operator*(const QuantityExpr& a, const QuantityExpr& b) {
  return QuantityExpr(make_node({Kind::Mul, {}, 0.0, Rational(0), a.node_, b.node_}));
}
QuantityExpr operator/(const QuantityExpr& a, const QuantityExpr& b) {
  return QuantityExpr(make_node({Kind::Div, {}, 0.0, Rational(0), a.node_, b.node_}));
}
QuantityExpr pow(const QuantityExpr& a, const Rational& r) {
  return QuantityExpr(make_node({Kind::Pow, {}, 0.0, r, a.node_, nullptr}));
}
QuantityExpr root(const QuantityExpr& a, long long k) { return pow(a, Rational(1, k)); }
QuantityExpr log(const QuantityExpr& a) {
  return QuantityExpr(make_node({Kind::Log, {}, 0.0, Rational(0), a.node_, nullptr}));
}
QuantityExpr exp(const QuantityExpr& a) {
  return QuantityExpr(make_node({Kind::Exp, {}, 0.0, Rational(0), a.node_, nullptr}));
}

namespace {

void collect_leaves(const QuantityExpr::Node* n, std::vector<std::string>& out) {
  if (!n) return;
  if (n->kind == Kind::Var) {
    for (const auto& s : out)
      if (s == n->name) return;
    out.push_back(n->name);
    return;
  }
  collect_leaves(n->a.get(), out);
  collect_leaves(n->b.get(), out);
}

std::string node_str(const QuantityExpr::Node* n) {
  if (!n) return "<empty>";
  switch (n->kind) {
    case Kind::Var: return n->name;
    case Kind::Const: {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%g", n->value);
      return buf;
    }
    case Kind::Add: return "(" + node_str(n->a.get()) + " + " + node_str(n->b.get()) + ")";
    case Kind::Sub: return "(" + node_str(n->a.get()) + " - " + node_str(n->b.get()) + ")";
    case Kind::Mul: return node_str(n->a.get()) + "*" + node_str(n->b.get());
    case Kind::Div: return node_str(n->a.get()) + "/(" + node_str(n->b.get()) + ")";
    case Kind::Pow: return "(" + node_str(n->a.get()) + ")^(" + n->exponent.str() + ")";
    case Kind::Log: return "log(" + node_str(n->a.get()) + ")";
    case Kind::Exp: return "exp(" + node_str(n->a.get()) + ")";
  }
  return "?";
}

DimensionVector check_node(const QuantityExpr::Node* n, const DimensionEnv& env) {
  if (!n) throw Error("expression: empty node");
  switch (n->kind) {
    case Kind::Var: {
      if (const DimensionVector* d = env(n->name)) return *d;
      throw UnknownVariable("expression references unknown variable '" + n->name + "'");
    }
    case Kind::Const:
      return DimensionVector::dimensionless();
    case Kind::Add:
    case Kind::Sub: {
      DimensionVector da = check_node(n->a.get(), env);
      DimensionVector db = check_node(n->b.get(), env);
      if (da != db)
        throw DimensionMismatch("add/sub of unequal dimensions: [" + da.str() + "] vs [" +
                                db.str() + "] in " + node_str(n));
      return da;
    }
    case Kind::Mul:
      return dim_mul(check_node(n->a.get(), env), check_node(n->b.get(), env));
    case Kind::Div:
      return dim_div(check_node(n->a.get(), env), check_node(n->b.get(), env));
    case Kind::Pow:
      return dim_pow(check_node(n->a.get(), env), n->exponent);
    case Kind::Log:
    case Kind::Exp: {
      DimensionVector da = check_node(n->a.get(), env);
      if (!da.is_dimensionless())
        throw NonDimensionlessArg(std::string(n->kind == Kind::Log ? "log" : "exp") +
                                  " of dimensioned operand [" + da.str() + "] in " + node_str(n));
      return DimensionVector::dimensionless();
    }
  }
  throw Error("expression: corrupt node kind");
}

}  // namespace

std::string QuantityExpr::str() const { return node_str(node_.get()); }

std::vector<std::string> QuantityExpr::leaves() const {
  std::vector<std::string> out;
  collect_leaves(node_.get(), out);
  return out;
}

DimensionVector check_expr(const QuantityExpr& e, const SystemSpec& env) {
  return check_expr(e, DimensionEnv([&env](const std::string& name) -> const DimensionVector* {
                      const VariableSpec* v = env.find(name);
                      return v ? &v->dimension : nullptr;
                    }));
}

DimensionVector check_expr(const QuantityExpr& e, const DimensionEnv& env) {
  if (!e.valid()) throw Error("expression: empty");
  return check_node(e.node(), env);
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

// x^(num/den) with den in {1,2,3} mapped to exact sqrt/cbrt composition.
double eval_pow(double x, const Rational& r) {
  if (r.is_zero()) return 1.0;
  long long num = r.num();
  long long den = r.den();
  if (x == 0.0) {
    if (num > 0) return 0.0;
    throw DomainError("pow: zero base with nonpositive exponent");
  }
  if (x < 0.0 && den != 1) throw DomainError("pow: fractional power of negative value");
  bool invert = num < 0;
  unsigned long long e = static_cast<unsigned long long>(invert ? -num : num);
  double y;
  if (e <= 8) {  // exact by repeated squaring for small integer exponents
    y = 1.0;
    double base = x;
    while (e > 0) {
      if (e & 1ull) y *= base;
      base *= base;
      e >>= 1;
    }
  } else {
    y = std::pow(x, static_cast<double>(invert ? -num : num));
  }
  switch (den) {
    case 1: break;
    case 2:
      if (y < 0.0) throw DomainError("root: even root of negative value");
      y = std::sqrt(y);
      break;
    case 3: y = std::cbrt(y); break;
    default:
      if (y < 0.0) throw DomainError("root: fractional power of negative value");
      y = std::pow(y, 1.0 / static_cast<double>(den));
      break;
  }
  return invert ? 1.0 / y : y;
}

}  // namespace

BoundExpr::BoundExpr(const QuantityExpr& e, const std::unordered_map<std::string, int>& columns) {
  if (!e.valid()) throw Error("expression: empty");
  // Postfix flattening.
  std::function<void(const QuantityExpr::Node*)> walk = [&](const QuantityExpr::Node* n) {
    if (!n) throw Error("expression: empty node");
    if (n->a) walk(n->a.get());
    if (n->b) walk(n->b.get());
    Op op;
    op.kind = n->kind;
    op.exponent = n->exponent;
    op.value = n->value;
    if (n->kind == Kind::Var) {
      auto it = columns.find(n->name);
      if (it == columns.end())
        throw ColumnMismatch("expression variable '" + n->name + "' not found among dataset columns");
      op.column = it->second;
    }
    program_.push_back(op);
  };
  walk(e.node());
  stack_.reserve(program_.size());
}

double BoundExpr::eval(Eigen::Ref<const Eigen::RowVectorXd> row) const {
  stack_.clear();
  for (const Op& op : program_) {
    switch (op.kind) {
      case Kind::Var: stack_.push_back(row[op.column]); break;
      case Kind::Const: stack_.push_back(op.value); break;
      case Kind::Add: {
        double b = stack_.back(); stack_.pop_back();
        stack_.back() += b;
        break;
      }
      case Kind::Sub: {
        double b = stack_.back(); stack_.pop_back();
        stack_.back() -= b;
        break;
      }
      case Kind::Mul: {
        double b = stack_.back(); stack_.pop_back();
        stack_.back() *= b;
        break;
      }
      case Kind::Div: {
        double b = stack_.back(); stack_.pop_back();
        if (b == 0.0) throw DomainError("expression: division by zero");
        stack_.back() /= b;
        break;
      }
      case Kind::Pow: stack_.back() = eval_pow(stack_.back(), op.exponent); break;
      case Kind::Log: {
        if (stack_.back() <= 0.0) throw DomainError("expression: log of nonpositive value");
        stack_.back() = std::log(stack_.back());
        break;
      }
      case Kind::Exp: stack_.back() = std::exp(stack_.back()); break;
    }
  }
  if (stack_.size() != 1) throw Error("expression: corrupt program");
  return stack_.back();
}

double eval_expr(const QuantityExpr& e, const std::unordered_map<std::string, double>& values) {
  std::unordered_map<std::string, int> columns;
  Eigen::RowVectorXd row(values.size());
  int i = 0;
  for (const auto& [name, v] : values) {
    columns[name] = i;
    row[i] = v;
    ++i;
  }
  return BoundExpr(e, columns).eval(row);
}

// ---------------------------------------------------------------------------
// JSON (structural; used by model files that embed transform pipelines)
// ---------------------------------------------------------------------------

nlohmann::json QuantityExpr::to_json() const {
  if (!valid()) throw Error("expression: empty");
  std::function<nlohmann::json(const Node*)> walk = [&](const Node* n) -> nlohmann::json {
    nlohmann::json j;
    j["kind"] = kind_name(n->kind);
    switch (n->kind) {
      case Kind::Var: j["name"] = n->name; break;
      case Kind::Const: j["value"] = n->value; break;
      case Kind::Pow:
        j["exponent"] = n->exponent.str();
        j["a"] = walk(n->a.get());
        break;
      case Kind::Log:
      case Kind::Exp: j["a"] = walk(n->a.get()); break;
      default:
        j["a"] = walk(n->a.get());
        j["b"] = walk(n->b.get());
        break;
    }
    return j;
  };
  return walk(node_.get());
}

QuantityExpr QuantityExpr::from_json(const nlohmann::json& j) {
  Kind k = kind_from_name(j.at("kind").get<std::string>());
  switch (k) {
    case Kind::Var: return var(j.at("name").get<std::string>());
    case Kind::Const: return constant(j.at("value").get<double>());
    case Kind::Pow: return pow(from_json(j.at("a")), Rational::parse(j.at("exponent").get<std::string>()));
    case Kind::Log: return log(from_json(j.at("a")));
    case Kind::Exp: return exp(from_json(j.at("a")));
    case Kind::Add: return from_json(j.at("a")) + from_json(j.at("b"));
    case Kind::Sub: return from_json(j.at("a")) - from_json(j.at("b"));
    case Kind::Mul: return from_json(j.at("a")) * from_json(j.at("b"));
    case Kind::Div: return from_json(j.at("a")) / from_json(j.at("b"));
  }
  throw ConfigError("expression: corrupt json");
}

}  // namespace pisur
