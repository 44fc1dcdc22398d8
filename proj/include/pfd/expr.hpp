#pragma once

// Polynomial expressions over a fixed list of variable names, e.g.
// "0.01*x - 2*x*y^2 + (1 - a)^2 / 4". Supported: numbers, variables, + - *,
// division by constants, non-negative integer powers, parentheses.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "pfd/polynomial.hpp"

namespace pfd {

class ExprError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PolyExpr {
 public:
  using Exponents = std::vector<int>;

  PolyExpr() = default;
  explicit PolyExpr(std::vector<std::string> vars) : vars_(std::move(vars)) {}

  static PolyExpr parse(const std::string& text, const std::vector<std::string>& vars);
  static PolyExpr constant(double c, const std::vector<std::string>& vars);
  static PolyExpr from_polynomial(const Polynomial& p, const std::string& var);
  static PolyExpr monomial(const std::vector<std::string>& vars, const Exponents& e, double c = 1.0);

  double eval(const std::vector<double>& values) const;
  /// Univariate view (all other variables must be absent).
  Polynomial to_polynomial(const std::string& var) const;

  /// Canonical text with %.17g coefficients; parse(to_string()) == *this.
  std::string to_string() const;

  const std::vector<std::string>& vars() const { return vars_; }
  const std::map<Exponents, double>& terms() const { return terms_; }
  bool operator==(const PolyExpr& o) const { return vars_ == o.vars_ && terms_ == o.terms_; }

  PolyExpr operator+(const PolyExpr& o) const;
  PolyExpr operator*(const PolyExpr& o) const;
  PolyExpr scaled(double s) const;

 private:
  void prune();
  std::vector<std::string> vars_;
  std::map<Exponents, double> terms_;
};

}  // namespace pfd
