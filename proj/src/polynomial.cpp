#include "cde/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cde {

namespace {
constexpr const char* kNames[kNumVars] = {"x", "y", "a", "b", "c", "d"};

double ipow(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}
}  // namespace

const char* var_name(int v) { return (v >= 0 && v < kNumVars) ? kNames[v] : "?"; }

int var_from_name(const std::string& name) {
  for (int i = 0; i < kNumVars; ++i)
    if (name == kNames[i]) return i;
  return -1;
}

Polynomial Polynomial::constant(double c) {
  Polynomial p;
  p.add_term(Exponents{}, c);
  return p;
}

Polynomial Polynomial::var(int v, double coeff) {
  Exponents e{};
  e[v] = 1;
  return monomial(e, coeff);
}

Polynomial Polynomial::monomial(const Exponents& e, double coeff) {
  Polynomial p;
  p.add_term(e, coeff);
  return p;
}

double Polynomial::operator()(const VarValues& v) const {
  double s = 0.0;
  for (const auto& [e, c] : terms_) {
    double m = c;
    for (int i = 0; i < kNumVars; ++i)
      if (e[i] != 0) m *= ipow(v[i], e[i]);
    s += m;
  }
  return s;
}

void Polynomial::add_term(const Exponents& e, double coeff) {
  if (coeff == 0.0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, coeff);
  } else {
    it->second += coeff;
    if (it->second == 0.0) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      Exponents e;
      for (int i = 0; i < kNumVars; ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  return r;
}

Polynomial Polynomial::pow(int k) const {
  Polynomial r = constant(1.0);
  for (int i = 0; i < k; ++i) r = r * *this;
  return r;
}

Polynomial Polynomial::derivative(int v) const {
  Polynomial r;
  for (const auto& [e, c] : terms_) {
    if (e[v] == 0) continue;
    Exponents d = e;
    d[v] -= 1;
    r.add_term(d, c * e[v]);
  }
  return r;
}

void Polynomial::prune(double eps) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= eps)
      it = terms_.erase(it);
    else
      ++it;
  }
}

int Polynomial::total_degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int x : e) s += x;
    d = std::max(d, s);
  }
  return d;
}

bool Polynomial::depends_on(int v) const {
  for (const auto& [e, c] : terms_)
    if (e[v] > 0) return true;
  return false;
}

double Polynomial::constant_term() const {
  auto it = terms_.find(Exponents{});
  return it == terms_.end() ? 0.0 : it->second;
}

int Polynomial::min_exponent(int v) const {
  if (terms_.empty()) return 0;
  int m = terms_.begin()->first[v];
  for (const auto& [e, c] : terms_) m = std::min(m, e[v]);
  return m;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    os << std::abs(c);
    for (int i = 0; i < kNumVars; ++i) {
      if (e[i] == 0) continue;
      os << "*" << kNames[i];
      if (e[i] > 1) os << "^" << e[i];
    }
  }
  return os.str();
}

}  // namespace cde
