#pragma once

// Real polynomials and rational functions in one variable with symbolic
// differentiation. Coefficients are stored in ascending order.

#include <initializer_list>
#include <string>
#include <vector>

namespace berg {

class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> ascending);
  Polynomial(std::initializer_list<double> ascending);

  static Polynomial constant(double c) { return Polynomial({c}); }
  static Polynomial x() { return Polynomial({0.0, 1.0}); }
  // (a + b x)^k
  static Polynomial linear_power(double a, double b, int k);

  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<double>& coefficients() const { return c_; }
  double operator[](int i) const { return i < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(i)] : 0.0; }

  double operator()(double x) const;
  Polynomial derivative() const;
  // Number of leading zero coefficients (power of x dividing this).
  int x_valuation() const;
  // Divides by x^k; the low coefficients must be zero.
  Polynomial shift_down(int k) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double s) const;
  Polynomial operator-() const { return *this * -1.0; }
  bool operator==(const Polynomial& o) const = default;

  std::string to_string() const;

 private:
  void trim();
  std::vector<double> c_;
};

class RationalFunction {
 public:
  RationalFunction() : num_(), den_(Polynomial::constant(1.0)) {}
  RationalFunction(Polynomial num);  // NOLINT: polynomials embed implicitly
  // Throws DivisionBySingularJet for a zero denominator.
  RationalFunction(Polynomial num, Polynomial den);

  const Polynomial& numerator() const { return num_; }
  const Polynomial& denominator() const { return den_; }

  // Throws DomainViolation where the denominator vanishes.
  double operator()(double x) const;
  RationalFunction derivative() const;
  RationalFunction derivative(int k) const;

  RationalFunction operator+(const RationalFunction& o) const;
  RationalFunction operator-(const RationalFunction& o) const;
  RationalFunction operator*(const RationalFunction& o) const;
  RationalFunction operator/(const RationalFunction& o) const;

  std::string to_string() const;

 private:
  // Removes common powers of x and identical denominators.
  void normalize();
  Polynomial num_, den_;
};

}  // namespace berg
