#pragma once

#include <array>
#include <map>
#include <string>

namespace cde {

// Variables of a CDE polynomial, in evaluation order.
enum Var : int { kX = 0, kY = 1, kA = 2, kB = 3, kC = 4, kD = 5 };
inline constexpr int kNumVars = 6;

using Exponents = std::array<int, kNumVars>;
using VarValues = std::array<double, kNumVars>;

const char* var_name(int v);
int var_from_name(const std::string& name);  // -1 if unknown

// Sparse multivariate polynomial over (x, y, a, b, c, d).
class Polynomial {
 public:
  Polynomial() = default;

  static Polynomial constant(double c);
  static Polynomial var(int v, double coeff = 1.0);
  static Polynomial monomial(const Exponents& e, double coeff);

  double operator()(const VarValues& v) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(double s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  friend Polynomial operator-(Polynomial a) { return a *= -1.0; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  Polynomial pow(int k) const;
  Polynomial derivative(int v) const;

  void add_term(const Exponents& e, double coeff);
  void prune(double eps = 0.0);

  int total_degree() const;
  bool depends_on(int v) const;
  bool is_zero() const { return terms_.empty(); }
  double constant_term() const;
  // Smallest exponent of v over all terms (0 for the zero polynomial).
  int min_exponent(int v) const;

  const std::map<Exponents, double>& terms() const { return terms_; }

  std::string to_string() const;

 private:
  std::map<Exponents, double> terms_;
};

}  // namespace cde
