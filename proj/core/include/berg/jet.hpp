#pragma once

// Truncated multivariate Taylor series ("jets") over complex coefficients.
//
// A Jet in `n` variables of order `m` stores every coefficient c_a of the
// monomial x^a with |a| <= m, in graded-lexicographic order. All arithmetic is
// truncated at total degree m and exact through that degree, so mixed partial
// derivatives of any analytic expression built from jet operations come out
// exact up to floating-point rounding.

#include <complex>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace berg {

using cplx = std::complex<double>;

// Exponent vector, one entry per variable.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exponents);
  MultiIndex(std::initializer_list<int> exponents);

  // e_var in `num_vars` variables.
  static MultiIndex unit(int num_vars, int var);

  int num_vars() const { return static_cast<int>(exps_.size()); }
  int total_degree() const;
  int operator[](int var) const { return exps_[static_cast<std::size_t>(var)]; }
  const std::vector<int>& exponents() const { return exps_; }

  // Product of factorials of the exponents.
  double factorial_weight() const;

  MultiIndex operator+(const MultiIndex& other) const;
  bool operator==(const MultiIndex&) const = default;

 private:
  std::vector<int> exps_;
};

// Index tables shared by all jets with the same (num_vars, order). Obtained
// through JetSpace::get, which caches instances; the tables are immutable once
// built and safe to share between threads.
class JetSpace {
 public:
  static std::shared_ptr<const JetSpace> get(int num_vars, int order);

  int num_vars() const { return num_vars_; }
  int order() const { return order_; }
  std::size_t size() const { return degree_offset_.back(); }

  // Rank of a multi-index in graded-lex order; throws OrderExceeded if the
  // degree is above `order`.
  std::size_t rank(const MultiIndex& index) const;
  const MultiIndex& index(std::size_t rank) const { return indices_[rank]; }
  int degree(std::size_t rank) const { return degrees_[rank]; }
  // First rank of each total degree; degree_offset(order + 1) == size().
  std::size_t degree_offset(int degree) const {
    return degree_offset_[static_cast<std::size_t>(degree)];
  }

  struct ProductTerm {
    std::uint32_t lhs, rhs, out;
  };
  // Every (lhs, rhs) pair whose degrees sum to at most `order`. Built lazily.
  std::span<const ProductTerm> product_table() const;

  struct DerivativeTerm {
    std::uint32_t src, dst;
    double factor;
  };
  // Maps coefficients of this space to d/dx_var in the space of order-1.
  std::span<const DerivativeTerm> derivative_table(int var) const;

  JetSpace(int num_vars, int order);

 private:
  int num_vars_;
  int order_;
  std::vector<MultiIndex> indices_;
  std::vector<int> degrees_;
  std::vector<std::size_t> degree_offset_;
  std::vector<std::vector<std::size_t>> binom_;  // binom_[n][k]

  mutable std::once_flag product_once_;
  mutable std::vector<ProductTerm> product_;
  mutable std::once_flag derivative_once_;
  mutable std::vector<std::vector<DerivativeTerm>> derivative_;
};

class Jet {
 public:
  // Zero jet.
  Jet(int num_vars, int order);
  explicit Jet(std::shared_ptr<const JetSpace> space);

  static Jet constant(int num_vars, int order, cplx value);
  // Seed for variable `var`: value + x_var.
  static Jet variable(int num_vars, int order, int var, cplx value);

  int num_vars() const { return space_->num_vars(); }
  int order() const { return space_->order(); }
  const JetSpace& space() const { return *space_; }
  const std::shared_ptr<const JetSpace>& space_ptr() const { return space_; }

  cplx constant_term() const { return coeffs_[0]; }
  std::span<const cplx> coefficients() const { return coeffs_; }
  std::span<cplx> coefficients() { return coeffs_; }
  cplx& operator[](std::size_t rank) { return coeffs_[rank]; }
  cplx operator[](std::size_t rank) const { return coeffs_[rank]; }

  // Taylor coefficient of x^a (not the derivative).
  cplx coefficient(const MultiIndex& a) const;
  // True partial derivative d^|a| / dx^a at the seed point.
  cplx mixed_partial(const MultiIndex& a) const;

  // d/dx_var, a jet of order - 1.
  Jet derivative(int var) const;
  Jet truncated(int new_order) const;
  // Same coefficients with the constant term replaced by zero.
  Jet nonconstant_part() const;

  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(const Jet& rhs);
  Jet& operator/=(const Jet& rhs);
  Jet& operator+=(cplx rhs);
  Jet& operator-=(cplx rhs);
  Jet& operator*=(cplx rhs);
  Jet& operator/=(cplx rhs);
  Jet operator-() const;

 private:
  void require_same_space(const Jet& rhs) const;

  std::shared_ptr<const JetSpace> space_;
  std::vector<cplx> coeffs_;
};

Jet operator+(Jet lhs, const Jet& rhs);
Jet operator-(Jet lhs, const Jet& rhs);
Jet operator*(const Jet& lhs, const Jet& rhs);
Jet operator/(const Jet& lhs, const Jet& rhs);
Jet operator+(Jet lhs, cplx rhs);
Jet operator+(cplx lhs, Jet rhs);
Jet operator-(Jet lhs, cplx rhs);
Jet operator-(cplx lhs, const Jet& rhs);
Jet operator*(Jet lhs, cplx rhs);
Jet operator*(cplx lhs, Jet rhs);
Jet operator/(Jet lhs, cplx rhs);
Jet operator/(cplx lhs, const Jet& rhs);

// f(a) = sum_k taylor[k] * (a - a0)^k, where a0 is a's constant term. Terms
// beyond a.order() are ignored.
Jet compose(const Jet& a, std::span<const cplx> taylor);

Jet reciprocal(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
// Principal branch at the constant term.
Jet sqrt(const Jet& a);
Jet pow(const Jet& a, int exponent);
Jet cos(const Jet& a);
Jet sin(const Jet& a);

// One jet per coordinate: value point[i] plus x_i, all in `point.size()`
// variables.
std::vector<Jet> jet_seed(std::span<const cplx> point, int order);

}  // namespace berg
