#include "pfd/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace pfd {

void PolyExpr::prune() {
  for (auto it = terms_.begin(); it != terms_.end();) it = it->second == 0.0 ? terms_.erase(it) : std::next(it);
}

PolyExpr PolyExpr::constant(double c, const std::vector<std::string>& vars) {
  PolyExpr p(vars);
  if (c != 0.0) p.terms_[Exponents(vars.size(), 0)] = c;
  return p;
}

PolyExpr PolyExpr::monomial(const std::vector<std::string>& vars, const Exponents& e, double c) {
  PolyExpr p(vars);
  if (c != 0.0) p.terms_[e] = c;
  return p;
}

PolyExpr PolyExpr::from_polynomial(const Polynomial& poly, const std::string& var) {
  PolyExpr p({var});
  for (std::size_t i = 0; i < poly.coeffs().size(); ++i)
    if (poly.coeffs()[i] != 0.0) p.terms_[{static_cast<int>(i)}] = poly.coeffs()[i];
  return p;
}

PolyExpr PolyExpr::operator+(const PolyExpr& o) const {
  PolyExpr r = *this;
  for (const auto& [e, c] : o.terms_) r.terms_[e] += c;
  r.prune();
  return r;
}

PolyExpr PolyExpr::operator*(const PolyExpr& o) const {
  PolyExpr r(vars_);
  for (const auto& [ea, ca] : terms_)
    for (const auto& [eb, cb] : o.terms_) {
      Exponents e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      r.terms_[e] += ca * cb;
    }
  r.prune();
  return r;
}

PolyExpr PolyExpr::scaled(double s) const {
  PolyExpr r = *this;
  for (auto& kv : r.terms_) kv.second *= s;
  r.prune();
  return r;
}

double PolyExpr::eval(const std::vector<double>& values) const {
  if (values.size() != vars_.size()) throw ExprError("expression evaluated with the wrong number of variables");
  double s = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c;
    for (std::size_t i = 0; i < e.size(); ++i) t *= std::pow(values[i], e[i]);
    s += t;
  }
  return s;
}

Polynomial PolyExpr::to_polynomial(const std::string& var) const {
  std::size_t k = vars_.size();
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i] == var) k = i;
  std::vector<double> c;
  for (const auto& [e, v] : terms_) {
    for (std::size_t i = 0; i < e.size(); ++i)
      if (i != k && e[i] != 0) throw ExprError("expression depends on '" + vars_[i] + "'");
    const int d = k < e.size() ? e[k] : 0;
    if (static_cast<int>(c.size()) <= d) c.resize(d + 1, 0.0);
    c[d] += v;
  }
  return Polynomial(std::move(c));
}

std::string PolyExpr::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  char buf[64];
  bool first = true;
  for (const auto& [e, c] : terms_) {
    std::snprintf(buf, sizeof buf, "%.17g", c);
    if (!first) out += " + ";
    first = false;
    out += buf;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      out += "*" + vars_[i];
      if (e[i] > 1) out += "^" + std::to_string(e[i]);
    }
  }
  return out;
}

namespace {

class Parser {
 public:
  Parser(const std::string& s, const std::vector<std::string>& vars) : s_(s), vars_(vars) {}

  PolyExpr run() {
    PolyExpr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ExprError("in expression '" + s_ + "': " + what + " at position " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  PolyExpr expr() {
    PolyExpr e = term();
    for (;;) {
      if (eat('+'))
        e = e + term();
      else if (eat('-'))
        e = e + term().scaled(-1.0);
      else
        return e;
    }
  }

  PolyExpr term() {
    PolyExpr e = power();
    for (;;) {
      if (eat('*')) {
        e = e * power();
      } else if (eat('/')) {
        const PolyExpr d = power();
        if (d.terms().size() > 1 || (d.terms().size() == 1 && d.terms().begin()->first != PolyExpr::Exponents(vars_.size(), 0)))
          fail("division by a non-constant");
        if (d.terms().empty()) fail("division by zero");
        e = e.scaled(1.0 / d.terms().begin()->second);
      } else {
        return e;
      }
    }
  }

  PolyExpr power() {
    PolyExpr base = unary();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("exponent must be a non-negative integer");
      const int n = std::atoi(s_.substr(start, pos_ - start).c_str());
      PolyExpr r = PolyExpr::constant(1.0, vars_);
      for (int i = 0; i < n; ++i) r = r * base;
      return r;
    }
    return base;
  }

  PolyExpr unary() {
    if (eat('-')) return unary().scaled(-1.0);
    if (eat('+')) return unary();
    return primary();
  }

  PolyExpr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (eat('(')) {
      PolyExpr e = expr();
      if (!eat(')')) fail("missing ')'");
      return e;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      return PolyExpr::constant(v, vars_);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) {
          PolyExpr::Exponents e(vars_.size(), 0);
          e[i] = 1;
          return PolyExpr::monomial(vars_, e);
        }
      pos_ = start;
      fail("unknown variable '" + name + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace

PolyExpr PolyExpr::parse(const std::string& text, const std::vector<std::string>& vars) {
  return Parser(text, vars).run();
}

}  // namespace pfd
