#include "berg/rational_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "berg/errors.hpp"

namespace berg {

Polynomial::Polynomial(std::vector<double> ascending) : c_(std::move(ascending)) { trim(); }

Polynomial::Polynomial(std::initializer_list<double> ascending) : c_(ascending) { trim(); }

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

Polynomial Polynomial::linear_power(double a, double b, int k) {
  if (k < 0) throw DomainViolation("negative power of a linear factor");
  Polynomial out = constant(1.0);
  const Polynomial lin({a, b});
  for (int i = 0; i < k; ++i) out = out * lin;
  return out;
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

int Polynomial::x_valuation() const {
  int k = 0;
  while (k < static_cast<int>(c_.size()) && c_[static_cast<std::size_t>(k)] == 0.0) ++k;
  return k;
}

Polynomial Polynomial::shift_down(int k) const {
  if (k > x_valuation()) throw DomainViolation("polynomial is not divisible by the requested power of x");
  if (k >= static_cast<int>(c_.size())) return {};
  return Polynomial(std::vector<double>(c_.begin() + k, c_.end()));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<double> r(std::max(c_.size(), o.c_.size()), 0.0);
  for (std::size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (is_zero() || o.is_zero()) return {};
  std::vector<double> r(c_.size() + o.c_.size() - 1, 0.0);
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  return Polynomial(std::move(r));
}

Polynomial Polynomial::operator*(double s) const {
  std::vector<double> r(c_);
  for (auto& v : r) v *= s;
  return Polynomial(std::move(r));
}

std::string Polynomial::to_string() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0.0) continue;
    if (!first) os << (c_[i] < 0 ? " - " : " + ");
    else if (c_[i] < 0) os << "-";
    first = false;
    const double a = std::abs(c_[i]);
    if (i == 0 || a != 1.0) os << a;
    if (i >= 1) os << (i == 0 || a != 1.0 ? "*x" : "x");
    if (i >= 2) os << "^" << i;
  }
  return os.str();
}

RationalFunction::RationalFunction(Polynomial num) : num_(std::move(num)), den_(Polynomial::constant(1.0)) {}

RationalFunction::RationalFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw DivisionBySingularJet("rational function with zero denominator");
  normalize();
}

void RationalFunction::normalize() {
  if (num_.is_zero()) {
    den_ = Polynomial::constant(1.0);
    return;
  }
  if (num_ == den_) {
    num_ = den_ = Polynomial::constant(1.0);
    return;
  }
  const int k = std::min(num_.x_valuation(), den_.x_valuation());
  if (k > 0) {
    num_ = num_.shift_down(k);
    den_ = den_.shift_down(k);
  }
  // monic-ish: make the leading denominator coefficient 1
  const double lead = den_.coefficients().back();
  if (lead != 1.0) {
    num_ = num_ * (1.0 / lead);
    den_ = den_ * (1.0 / lead);
  }
}

double RationalFunction::operator()(double x) const {
  const double d = den_(x);
  if (d == 0.0) throw DomainViolation("rational function evaluated at a pole");
  return num_(x) / d;
}

RationalFunction RationalFunction::derivative() const {
  // (n/d)' = (n'd - nd')/d^2
  if (den_.degree() == 0) return RationalFunction(num_.derivative(), den_);
  return RationalFunction(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

RationalFunction RationalFunction::derivative(int k) const {
  RationalFunction r = *this;
  for (int i = 0; i < k; ++i) r = r.derivative();
  return r;
}

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
  if (den_ == o.den_) return RationalFunction(num_ + o.num_, den_);
  return RationalFunction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RationalFunction RationalFunction::operator-(const RationalFunction& o) const {
  if (den_ == o.den_) return RationalFunction(num_ - o.num_, den_);
  return RationalFunction(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RationalFunction RationalFunction::operator*(const RationalFunction& o) const {
  return RationalFunction(num_ * o.num_, den_ * o.den_);
}

RationalFunction RationalFunction::operator/(const RationalFunction& o) const {
  if (o.num_.is_zero()) throw DivisionBySingularJet("division by the zero rational function");
  return RationalFunction(num_ * o.den_, den_ * o.num_);
}

std::string RationalFunction::to_string() const {
  if (den_.degree() == 0) return num_.to_string();
  return "(" + num_.to_string() + ")/(" + den_.to_string() + ")";
}

}  // namespace berg
