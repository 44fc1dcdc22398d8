#pragma once

#include <initializer_list>
#include <string>
#include <vector>

namespace pfd {

/// Real polynomial in one variable, coefficients stored in ascending order.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(std::initializer_list<double> coeffs) : c_(coeffs) { trim(); }
  explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Polynomial constant(double v) { return Polynomial({v}); }

  const std::vector<double>& coeffs() const { return c_; }
  double coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0.0; }
  int degree() const { return c_.empty() ? -1 : static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }

  double operator()(double x) const;
  Polynomial derivative() const;
  Polynomial antiderivative() const;  // zero constant term

  /// Divided difference (p(a) - p(b)) / (a - b), evaluated without the
  /// subtraction so that a == b returns p'(a).
  double secant(double a, double b) const;

  /// The divided difference as a polynomial in its first argument, for fixed b.
  Polynomial secant_in_first(double b) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double s) const;

  bool operator==(const Polynomial& o) const { return c_ == o.c_; }

  std::string to_string() const;

 private:
  void trim();
  std::vector<double> c_;
};

inline Polynomial operator*(double s, const Polynomial& p) { return p * s; }

}  // namespace pfd
