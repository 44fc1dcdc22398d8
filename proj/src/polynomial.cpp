#include "pfd/polynomial.hpp"

#include <algorithm>
#include <cstdio>

namespace pfd {

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<double> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = static_cast<double>(i) * c_[i];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::antiderivative() const {
  if (c_.empty()) return {};
  std::vector<double> d(c_.size() + 1, 0.0);
  for (std::size_t i = 0; i < c_.size(); ++i) d[i + 1] = c_[i] / static_cast<double>(i + 1);
  return Polynomial(std::move(d));
}

// sum_n c_n * sum_{i<n} a^i b^(n-1-i)
double Polynomial::secant(double a, double b) const { return secant_in_first(b)(a); }

Polynomial Polynomial::secant_in_first(double b) const {
  if (c_.size() <= 1) return {};
  const std::size_t n = c_.size();
  std::vector<double> q(n - 1, 0.0);
  // q_i = sum_{m > i} c_m b^(m-1-i), accumulated Horner-style from the top.
  double acc = 0.0;
  for (std::size_t i = n - 1; i-- > 0;) {
    acc = acc * b + c_[i + 1];
    q[i] = acc;
  }
  return Polynomial(std::move(q));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<double> r(std::max(c_.size(), o.c_.size()), 0.0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) + o.coeff(i);
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * -1.0; }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (c_.empty() || o.c_.empty()) return {};
  std::vector<double> r(c_.size() + o.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator*(double s) const {
  std::vector<double> r = c_;
  for (double& v : r) v *= s;
  return Polynomial(std::move(r));
}

std::string Polynomial::to_string() const {
  if (c_.empty()) return "0";
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < c_.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", c_[i]);
    if (i) out += ' ';
    out += buf;
  }
  return out;
}

}  // namespace pfd
