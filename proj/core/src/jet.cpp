#include "berg/jet.hpp"

#include <map>
#include <numeric>
#include <string>
#include <utility>

#include "berg/errors.hpp"

namespace berg {

// ---------------------------------------------------------------------------
// MultiIndex

MultiIndex::MultiIndex(std::vector<int> exponents) : exps_(std::move(exponents)) {
  for (int e : exps_) {
    if (e < 0) throw ShapeMismatch("negative exponent in multi-index");
  }
}

MultiIndex::MultiIndex(std::initializer_list<int> exponents)
    : MultiIndex(std::vector<int>(exponents)) {}

MultiIndex MultiIndex::unit(int num_vars, int var) {
  std::vector<int> e(static_cast<std::size_t>(num_vars), 0);
  e.at(static_cast<std::size_t>(var)) = 1;
  return MultiIndex(std::move(e));
}

int MultiIndex::total_degree() const {
  return std::accumulate(exps_.begin(), exps_.end(), 0);
}

double MultiIndex::factorial_weight() const {
  double w = 1.0;
  for (int e : exps_) {
    for (int k = 2; k <= e; ++k) w *= k;
  }
  return w;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (other.num_vars() != num_vars()) {
    throw ShapeMismatch("multi-index variable counts differ");
  }
  std::vector<int> e(exps_);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += other.exps_[i];
  return MultiIndex(std::move(e));
}

// ---------------------------------------------------------------------------
// JetSpace

namespace {

// Appends every exponent vector of the given total degree, lex-descending
// (x_0^degree first).
void enumerate_degree(int num_vars, int degree, std::vector<int>& scratch, int pos,
                      std::vector<MultiIndex>& out) {
  if (pos == num_vars - 1) {
    scratch[static_cast<std::size_t>(pos)] = degree;
    out.emplace_back(scratch);
    return;
  }
  for (int v = degree; v >= 0; --v) {
    scratch[static_cast<std::size_t>(pos)] = v;
    enumerate_degree(num_vars, degree - v, scratch, pos + 1, out);
  }
}

}  // namespace

JetSpace::JetSpace(int num_vars, int order) : num_vars_(num_vars), order_(order) {
  if (num_vars < 1) throw ShapeMismatch("jet needs at least one variable");
  if (order < 0) throw OrderExceeded("negative jet order");

  const int nmax = num_vars + order + 1;
  binom_.assign(static_cast<std::size_t>(nmax + 1), {});
  for (int n = 0; n <= nmax; ++n) {
    auto& row = binom_[static_cast<std::size_t>(n)];
    row.assign(static_cast<std::size_t>(n + 1), 1);
    for (int k = 1; k < n; ++k) {
      row[static_cast<std::size_t>(k)] = binom_[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k - 1)] +
                                         binom_[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k)];
    }
  }

  std::vector<int> scratch(static_cast<std::size_t>(num_vars), 0);
  degree_offset_.push_back(0);
  for (int deg = 0; deg <= order; ++deg) {
    enumerate_degree(num_vars, deg, scratch, 0, indices_);
    degree_offset_.push_back(indices_.size());
  }
  degrees_.reserve(indices_.size());
  for (const auto& idx : indices_) degrees_.push_back(idx.total_degree());
}

std::shared_ptr<const JetSpace> JetSpace::get(int num_vars, int order) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const JetSpace>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{num_vars, order}];
  if (!slot) slot = std::make_shared<const JetSpace>(num_vars, order);
  return slot;
}

std::size_t JetSpace::rank(const MultiIndex& index) const {
  if (index.num_vars() != num_vars_) {
    throw ShapeMismatch("multi-index has " + std::to_string(index.num_vars()) +
                        " variables, jet has " + std::to_string(num_vars_));
  }
  const int deg = index.total_degree();
  if (deg > order_) {
    throw OrderExceeded("degree " + std::to_string(deg) + " exceeds jet order " +
                        std::to_string(order_));
  }
  // Number of monomials of exact degree s in m variables.
  auto count = [this](int m, int s) -> std::size_t {
    if (m == 0) return s == 0 ? 1 : 0;
    return binom_[static_cast<std::size_t>(s + m - 1)][static_cast<std::size_t>(m - 1)];
  };
  std::size_t r = degree_offset_[static_cast<std::size_t>(deg)];
  int remaining = deg;
  for (int i = 0; i < num_vars_ - 1; ++i) {
    const int a = index[i];
    for (int v = remaining; v > a; --v) r += count(num_vars_ - i - 1, remaining - v);
    remaining -= a;
  }
  return r;
}

std::span<const JetSpace::ProductTerm> JetSpace::product_table() const {
  std::call_once(product_once_, [this] {
    for (std::size_t i = 0; i < indices_.size(); ++i) {
      const int da = degrees_[i];
      const std::size_t end = degree_offset_[static_cast<std::size_t>(order_ - da + 1)];
      for (std::size_t j = 0; j < end; ++j) {
        product_.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                            static_cast<std::uint32_t>(rank(indices_[i] + indices_[j]))});
      }
    }
  });
  return product_;
}

std::span<const JetSpace::DerivativeTerm> JetSpace::derivative_table(int var) const {
  if (order_ == 0) throw OrderExceeded("cannot differentiate an order-0 jet");
  std::call_once(derivative_once_, [this] {
    derivative_.resize(static_cast<std::size_t>(num_vars_));
    for (int v = 0; v < num_vars_; ++v) {
      auto& table = derivative_[static_cast<std::size_t>(v)];
      for (std::size_t r = 0; r < indices_.size(); ++r) {
        const int e = indices_[r][v];
        if (e == 0) continue;
        auto lowered = indices_[r].exponents();
        lowered[static_cast<std::size_t>(v)] -= 1;
        // Graded-lex ranks do not depend on the truncation order, so the rank
        // in this space is also the rank in the order-1 space.
        table.push_back({static_cast<std::uint32_t>(r),
                         static_cast<std::uint32_t>(rank(MultiIndex(std::move(lowered)))),
                         static_cast<double>(e)});
      }
    }
  });
  return derivative_.at(static_cast<std::size_t>(var));
}

// ---------------------------------------------------------------------------
// Jet

Jet::Jet(int num_vars, int order) : Jet(JetSpace::get(num_vars, order)) {}

Jet::Jet(std::shared_ptr<const JetSpace> space)
    : space_(std::move(space)), coeffs_(space_->size(), cplx{}) {}

Jet Jet::constant(int num_vars, int order, cplx value) {
  Jet j(num_vars, order);
  j.coeffs_[0] = value;
  return j;
}

Jet Jet::variable(int num_vars, int order, int var, cplx value) {
  if (var < 0 || var >= num_vars) throw ShapeMismatch("seed variable out of range");
  Jet j = constant(num_vars, order, value);
  if (order >= 1) j.coeffs_[1 + static_cast<std::size_t>(var)] = 1.0;
  return j;
}

cplx Jet::coefficient(const MultiIndex& a) const { return coeffs_[space_->rank(a)]; }

cplx Jet::mixed_partial(const MultiIndex& a) const {
  return coefficient(a) * a.factorial_weight();
}

Jet Jet::derivative(int var) const {
  if (var < 0 || var >= num_vars()) throw ShapeMismatch("derivative variable out of range");
  Jet out(num_vars(), order() - 1);
  for (const auto& t : space_->derivative_table(var)) {
    out.coeffs_[t.dst] += t.factor * coeffs_[t.src];
  }
  return out;
}

Jet Jet::truncated(int new_order) const {
  if (new_order > order()) {
    throw OrderExceeded("cannot raise jet order from " + std::to_string(order()) + " to " +
                        std::to_string(new_order));
  }
  if (new_order == order()) return *this;
  Jet out(num_vars(), new_order);
  std::copy_n(coeffs_.begin(), out.coeffs_.size(), out.coeffs_.begin());
  return out;
}

Jet Jet::nonconstant_part() const {
  Jet out(*this);
  out.coeffs_[0] = 0.0;
  return out;
}

void Jet::require_same_space(const Jet& rhs) const {
  if (space_ != rhs.space_ &&
      (num_vars() != rhs.num_vars() || order() != rhs.order())) {
    throw ShapeMismatch("jet shapes differ: (" + std::to_string(num_vars()) + "," +
                        std::to_string(order()) + ") vs (" + std::to_string(rhs.num_vars()) +
                        "," + std::to_string(rhs.order()) + ")");
  }
}

Jet& Jet::operator+=(const Jet& rhs) {
  require_same_space(rhs);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  require_same_space(rhs);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  return *this;
}

Jet& Jet::operator*=(const Jet& rhs) {
  *this = *this * rhs;
  return *this;
}

Jet& Jet::operator/=(const Jet& rhs) {
  *this = *this / rhs;
  return *this;
}

Jet& Jet::operator+=(cplx rhs) {
  coeffs_[0] += rhs;
  return *this;
}

Jet& Jet::operator-=(cplx rhs) {
  coeffs_[0] -= rhs;
  return *this;
}

Jet& Jet::operator*=(cplx rhs) {
  for (auto& c : coeffs_) c *= rhs;
  return *this;
}

Jet& Jet::operator/=(cplx rhs) {
  if (rhs == cplx{}) throw DivisionBySingularJet("division of a jet by zero");
  for (auto& c : coeffs_) c /= rhs;
  return *this;
}

Jet Jet::operator-() const {
  Jet out(*this);
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

Jet operator+(Jet lhs, const Jet& rhs) { return lhs += rhs; }
Jet operator-(Jet lhs, const Jet& rhs) { return lhs -= rhs; }

Jet operator*(const Jet& lhs, const Jet& rhs) {
  if (lhs.num_vars() != rhs.num_vars() || lhs.order() != rhs.order()) {
    throw ShapeMismatch("jet shapes differ in product");
  }
  Jet out(lhs.space_ptr());
  const auto a = lhs.coefficients();
  const auto b = rhs.coefficients();
  auto c = out.coefficients();
  for (const auto& t : lhs.space().product_table()) c[t.out] += a[t.lhs] * b[t.rhs];
  return out;
}

Jet operator/(const Jet& lhs, const Jet& rhs) { return lhs * reciprocal(rhs); }
Jet operator+(Jet lhs, cplx rhs) { return lhs += rhs; }
Jet operator+(cplx lhs, Jet rhs) { return rhs += lhs; }
Jet operator-(Jet lhs, cplx rhs) { return lhs -= rhs; }
Jet operator-(cplx lhs, const Jet& rhs) { return (-rhs) += lhs; }
Jet operator*(Jet lhs, cplx rhs) { return lhs *= rhs; }
Jet operator*(cplx lhs, Jet rhs) { return rhs *= lhs; }
Jet operator/(Jet lhs, cplx rhs) { return lhs /= rhs; }
Jet operator/(cplx lhs, const Jet& rhs) { return reciprocal(rhs) *= lhs; }

// ---------------------------------------------------------------------------
// Univariate compositions

Jet compose(const Jet& a, std::span<const cplx> taylor) {
  const int m = a.order();
  const Jet h = a.nonconstant_part();
  const int top = std::min(m, static_cast<int>(taylor.size()) - 1);
  Jet result = Jet::constant(a.num_vars(), m, top >= 0 ? taylor[static_cast<std::size_t>(top)] : 0.0);
  for (int k = top - 1; k >= 0; --k) {
    result = result * h;
    result += taylor[static_cast<std::size_t>(k)];
  }
  return result;
}

Jet reciprocal(const Jet& a) {
  const cplx a0 = a.constant_term();
  if (a0 == cplx{}) throw DivisionBySingularJet("reciprocal of a jet with zero constant term");
  std::vector<cplx> t(static_cast<std::size_t>(a.order() + 1));
  cplx p = 1.0 / a0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    t[k] = p;
    p *= -1.0 / a0;
  }
  return compose(a, t);
}

Jet exp(const Jet& a) {
  std::vector<cplx> t(static_cast<std::size_t>(a.order() + 1));
  cplx p = std::exp(a.constant_term());
  for (std::size_t k = 0; k < t.size(); ++k) {
    t[k] = p;
    p /= static_cast<double>(k + 1);
  }
  return compose(a, t);
}

Jet log(const Jet& a) {
  const cplx a0 = a.constant_term();
  if (a0 == cplx{}) throw LogOfZero("logarithm of a jet with zero constant term");
  std::vector<cplx> t(static_cast<std::size_t>(a.order() + 1));
  t[0] = std::log(a0);
  cplx p = 1.0 / a0;
  for (std::size_t k = 1; k < t.size(); ++k) {
    t[k] = p / static_cast<double>(k);
    p *= -1.0 / a0;
  }
  return compose(a, t);
}

Jet sqrt(const Jet& a) {
  const cplx a0 = a.constant_term();
  if (a0 == cplx{}) throw DivisionBySingularJet("square root of a jet with zero constant term");
  std::vector<cplx> t(static_cast<std::size_t>(a.order() + 1));
  // binom(1/2, k) * a0^(1/2 - k)
  cplx p = std::sqrt(a0);
  double binom = 1.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    t[k] = binom * p;
    binom *= (0.5 - static_cast<double>(k)) / static_cast<double>(k + 1);
    p /= a0;
  }
  return compose(a, t);
}

Jet pow(const Jet& a, int exponent) {
  if (exponent == 0) return Jet::constant(a.num_vars(), a.order(), 1.0);
  if (exponent > 0) {
    Jet result = a;
    for (int i = 1; i < exponent; ++i) result = result * a;
    return result;
  }
  return reciprocal(pow(a, -exponent));
}

Jet cos(const Jet& a) {
  std::vector<cplx> t(static_cast<std::size_t>(a.order() + 1));
  const cplx c = std::cos(a.constant_term());
  const cplx s = std::sin(a.constant_term());
  double fact = 1.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    // d^k cos = cos, -sin, -cos, sin, ...
    const cplx dk = (k % 4 == 0) ? c : (k % 4 == 1) ? -s : (k % 4 == 2) ? -c : s;
    t[k] = dk / fact;
  }
  return compose(a, t);
}

Jet sin(const Jet& a) {
  std::vector<cplx> t(static_cast<std::size_t>(a.order() + 1));
  const cplx c = std::cos(a.constant_term());
  const cplx s = std::sin(a.constant_term());
  double fact = 1.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k > 0) fact *= static_cast<double>(k);
    const cplx dk = (k % 4 == 0) ? s : (k % 4 == 1) ? c : (k % 4 == 2) ? -s : -c;
    t[k] = dk / fact;
  }
  return compose(a, t);
}

std::vector<Jet> jet_seed(std::span<const cplx> point, int order) {
  if (order < 0) throw OrderExceeded("negative jet order");
  const int n = static_cast<int>(point.size());
  std::vector<Jet> seeds;
  seeds.reserve(point.size());
  for (int i = 0; i < n; ++i) seeds.push_back(Jet::variable(n, order, i, point[static_cast<std::size_t>(i)]));
  return seeds;
}

}  // namespace berg
