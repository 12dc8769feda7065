#include "berg/cartan.hpp"

#include <cmath>
#include <sstream>

#include "berg/errors.hpp"

namespace berg {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void set_from_abr(CartanDomain& dom) {
  // The type-specific (d, p) were set by the caller; the multiplicities must
  // reproduce them.
  const int p = (dom.r - 1) * dom.a + dom.b + 2;
  const int d = dom.r * (dom.r - 1) * dom.a / 2 + dom.b * dom.r + dom.r;
  if (p != dom.p || d != dom.d) {
    throw UnsupportedDomain("catalog entry " + dom.name() + " is inconsistent with its multiplicities");
  }
}

// Index pairs of the raw coordinates in matrix form.
struct Slot {
  int i, j;
};

std::vector<Slot> slots(const CartanDomain& dom) {
  std::vector<Slot> s;
  switch (dom.kind) {
    case CartanKind::TypeI:
      for (int i = 0; i < dom.m; ++i)
        for (int j = 0; j < dom.n; ++j) s.push_back({i, j});
      break;
    case CartanKind::TypeII:
      for (int i = 0; i < dom.n; ++i)
        for (int j = i + 1; j < dom.n; ++j) s.push_back({i, j});
      break;
    case CartanKind::TypeIII:
      for (int i = 0; i < dom.n; ++i)
        for (int j = i; j < dom.n; ++j) s.push_back({i, j});
      break;
    default:
      break;
  }
  return s;
}

int rows(const CartanDomain& dom) { return dom.kind == CartanKind::TypeI ? dom.m : dom.n; }
int cols(const CartanDomain& dom) { return dom.n; }

// Raw coordinates as a dense matrix (numeric).
CMatrix raw_matrix(const CartanDomain& dom, std::span<const cplx> z) {
  CMatrix Z = CMatrix::Zero(rows(dom), cols(dom));
  const auto sl = slots(dom);
  for (std::size_t k = 0; k < sl.size(); ++k) {
    const auto [i, j] = sl[k];
    Z(i, j) = z[k];
    if (dom.kind == CartanKind::TypeII) Z(j, i) = -z[k];
    if (dom.kind == CartanKind::TypeIII) Z(j, i) = z[k];
  }
  return Z;
}

void require_supported(const CartanDomain& dom) {
  if (!dom.supported()) throw UnsupportedDomain(dom.name() + " has no generic norm in this catalog");
}

void require_dim(const CartanDomain& dom, std::size_t got) {
  if (static_cast<int>(got) != dom.d) {
    throw ShapeMismatch(dom.name() + " expects " + std::to_string(dom.d) + " coordinates, got " + std::to_string(got));
  }
}

// Constant terms c of the linear factors (mu alpha + c).
std::vector<Rational> factor_constants(const CartanDomain& dom) {
  std::vector<Rational> c;
  for (int j = 1; j <= dom.r; ++j) {
    const int len = 1 + dom.b + (dom.r - j) * dom.a;
    const Rational base = Rational(1 - dom.p) + Rational((j - 1) * dom.a, 2);
    for (int i = 0; i < len; ++i) c.push_back(base + i);
  }
  return c;
}

template <class T>
std::vector<T> expand_monic(const std::vector<T>& roots_shift) {
  // prod (alpha + s_i), ascending coefficients
  std::vector<T> poly{T(1)};
  for (const auto& s : roots_shift) {
    std::vector<T> next(poly.size() + 1, T(0));
    for (std::size_t k = 0; k < poly.size(); ++k) {
      next[k] += poly[k] * s;
      next[k + 1] += poly[k];
    }
    poly = std::move(next);
  }
  return poly;
}

template <class T>
T a2_bracket(const CartanDomain& dom) {
  const T a = dom.a, r = dom.r, p = dom.p, d = dom.d;
  return d * d * p * p / 4 - r * (p - 1) * p * (2 * p - 1) / 6 + r * (r - 1) * a * (3 * p * p - 3 * p + 1) / 12 -
         (r - 1) * r * (2 * r - 1) * a * a * (p - 1) / 24 + r * r * (r - 1) * (r - 1) * a * a * a / 48;
}

}  // namespace

CartanDomain CartanDomain::type_I(int m, int n) {
  if (m < 1 || m > n) throw UnsupportedDomain("TypeI needs 1 <= m <= n");
  CartanDomain dom{CartanKind::TypeI, m, n, 2, n - m, m, m * n, m + n};
  set_from_abr(dom);
  return dom;
}

CartanDomain CartanDomain::type_II(int size) {
  if (size < 5) throw UnsupportedDomain("TypeII needs size >= 5");
  const int h = size / 2;
  CartanDomain dom{CartanKind::TypeII, 0, size, 4, size % 2 == 0 ? 0 : 2, h, size * (size - 1) / 2, 2 * (size - 1)};
  set_from_abr(dom);
  return dom;
}

CartanDomain CartanDomain::type_III(int n) {
  if (n < 2) throw UnsupportedDomain("TypeIII needs n >= 2");
  CartanDomain dom{CartanKind::TypeIII, 0, n, 1, 0, n, n * (n + 1) / 2, n + 1};
  set_from_abr(dom);
  return dom;
}

CartanDomain CartanDomain::type_IV(int n) {
  if (n < 5) throw UnsupportedDomain("TypeIV needs n >= 5");
  CartanDomain dom{CartanKind::TypeIV, 0, n, n - 2, 0, 2, n, n};
  set_from_abr(dom);
  return dom;
}

CartanDomain CartanDomain::exceptional_16() {
  CartanDomain dom{CartanKind::ExceptionalV, 0, 16, 6, 4, 2, 16, 12};
  set_from_abr(dom);
  return dom;
}

CartanDomain CartanDomain::exceptional_27() {
  CartanDomain dom{CartanKind::ExceptionalVI, 0, 27, 8, 0, 3, 27, 18};
  set_from_abr(dom);
  return dom;
}

std::string CartanDomain::name() const {
  switch (kind) {
    case CartanKind::TypeI:
      return m == 1 ? "Ball(" + std::to_string(n) + ")" : "TypeI(" + std::to_string(m) + "," + std::to_string(n) + ")";
    case CartanKind::TypeII:
      return "TypeII(" + std::to_string(n) + ")";
    case CartanKind::TypeIII:
      return "TypeIII(" + std::to_string(n) + ")";
    case CartanKind::TypeIV:
      return "TypeIV(" + std::to_string(n) + ")";
    case CartanKind::ExceptionalV:
      return "ExceptionalV(16)";
    case CartanKind::ExceptionalVI:
      return "ExceptionalVI(27)";
  }
  return "?";
}

std::vector<CartanDomain> catalog_up_to(int dmax) {
  std::vector<CartanDomain> out;
  for (int m = 1; m <= dmax; ++m)
    for (int n = m; m * n <= dmax; ++n) out.push_back(CartanDomain::type_I(m, n));
  for (int k = 5; k * (k - 1) / 2 <= dmax; ++k) out.push_back(CartanDomain::type_II(k));
  for (int n = 2; n * (n + 1) / 2 <= dmax; ++n) out.push_back(CartanDomain::type_III(n));
  for (int n = 5; n <= dmax; ++n) out.push_back(CartanDomain::type_IV(n));
  if (dmax >= 16) out.push_back(CartanDomain::exceptional_16());
  if (dmax >= 27) out.push_back(CartanDomain::exceptional_27());
  return out;
}

// ---------------------------------------------------------------------------
// Norms and potentials

Jet generic_norm(const CartanDomain& dom, std::span<const Jet> z, std::span<const Jet> zbar) {
  require_supported(dom);
  require_dim(dom, z.size());
  require_dim(dom, zbar.size());
  const auto space = z[0].space_ptr();
  const int nv = z[0].num_vars(), ord = z[0].order();

  if (dom.kind == CartanKind::TypeIV) {
    Jet zz(space), ww(space), zw(space);
    for (int i = 0; i < dom.d; ++i) {
      const auto k = static_cast<std::size_t>(i);
      zz += z[k] * z[k];
      ww += zbar[k] * zbar[k];
      zw += z[k] * zbar[k];
    }
    return 1.0 - 2.0 * zw + zz * ww;
  }

  const int R = rows(dom), C = cols(dom);
  const Jet zero(space);
  std::vector<Jet> Z(static_cast<std::size_t>(R * C), zero), W(static_cast<std::size_t>(R * C), zero);
  const auto sl = slots(dom);
  for (std::size_t k = 0; k < sl.size(); ++k) {
    const auto [i, j] = sl[k];
    Z[static_cast<std::size_t>(i * C + j)] = z[k];
    W[static_cast<std::size_t>(i * C + j)] = zbar[k];
    if (dom.kind == CartanKind::TypeII) {
      Z[static_cast<std::size_t>(j * C + i)] = -z[k];
      W[static_cast<std::size_t>(j * C + i)] = -zbar[k];
    } else if (dom.kind == CartanKind::TypeIII && i != j) {
      Z[static_cast<std::size_t>(j * C + i)] = z[k];
      W[static_cast<std::size_t>(j * C + i)] = zbar[k];
    }
  }
  // I - Z conj(Z)^t with conj(Z) replaced by the copy W
  JetMatrix M(R, space);
  for (int i = 0; i < R; ++i)
    for (int k = 0; k < R; ++k) {
      Jet s = Jet::constant(nv, ord, i == k ? 1.0 : 0.0);
      for (int j = 0; j < C; ++j) s -= Z[static_cast<std::size_t>(i * C + j)] * W[static_cast<std::size_t>(k * C + j)];
      M(i, k) = s;
    }
  const Jet det = jet_det(M);
  if (dom.kind == CartanKind::TypeII) {
    if (!(det.constant_term().real() > 0.0)) throw OutsideDomain("TypeII determinant has non-positive real part");
    return sqrt(det);
  }
  return det;
}

cplx generic_norm(const CartanDomain& dom, std::span<const cplx> z) {
  std::vector<cplx> seed(z.begin(), z.end());
  for (const auto& v : z) seed.push_back(std::conj(v));
  const auto jets = jet_seed(seed, 0);
  std::span<const Jet> all(jets);
  return generic_norm(dom, all.subspan(0, z.size()), all.subspan(z.size())).constant_term();
}

std::vector<cplx> raw_coordinates(const CartanDomain& dom, std::span<const cplx> u) {
  require_dim(dom, u.size());
  std::vector<cplx> z(u.begin(), u.end());
  if (dom.kind == CartanKind::TypeIV) {
    for (auto& v : z) v *= kInvSqrt2;
  } else if (dom.kind == CartanKind::TypeIII) {
    const auto sl = slots(dom);
    for (std::size_t k = 0; k < sl.size(); ++k)
      if (sl[k].i != sl[k].j) z[k] *= kInvSqrt2;
  }
  return z;
}

bool in_domain(const CartanDomain& dom, std::span<const cplx> u) {
  require_supported(dom);
  const auto z = raw_coordinates(dom, u);
  if (dom.kind == CartanKind::TypeIV) {
    double n2 = 0;
    cplx q = 0;
    for (const auto& v : z) {
      n2 += std::norm(v);
      q += v * v;
    }
    const double lie = n2 + std::sqrt(std::max(0.0, n2 * n2 - std::norm(q)));
    return lie < 1.0;
  }
  Eigen::JacobiSVD<CMatrix> svd(raw_matrix(dom, z));
  return svd.singularValues()(0) < 1.0;
}

std::vector<cplx> random_point(const CartanDomain& dom, double radius, std::mt19937_64& rng) {
  require_supported(dom);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<cplx> z(static_cast<std::size_t>(dom.d));
  for (auto& v : z) v = {g(rng), g(rng)};
  double norm;
  if (dom.kind == CartanKind::TypeIV) {
    double n2 = 0;
    cplx q = 0;
    for (const auto& v : z) {
      n2 += std::norm(v);
      q += v * v;
    }
    norm = std::sqrt(n2 + std::sqrt(std::max(0.0, n2 * n2 - std::norm(q))));
  } else {
    norm = Eigen::JacobiSVD<CMatrix>(raw_matrix(dom, z)).singularValues()(0);
  }
  const double scale = radius * std::pow(u01(rng), 1.0 / (2.0 * dom.d)) / norm;
  for (auto& v : z) v *= scale;
  // back to normalized coordinates
  if (dom.kind == CartanKind::TypeIV) {
    for (auto& v : z) v /= kInvSqrt2;
  } else if (dom.kind == CartanKind::TypeIII) {
    const auto sl = slots(dom);
    for (std::size_t k = 0; k < sl.size(); ++k)
      if (sl[k].i != sl[k].j) z[k] /= kInvSqrt2;
  }
  return z;
}

PolarizedPotential base_potential(const CartanDomain& dom, double mu) {
  require_supported(dom);
  if (!(mu > 0.0)) throw DomainViolation("mu must be positive");
  return {dom.d, [dom, mu](std::span<const Jet> args) {
            const auto d = static_cast<std::size_t>(dom.d);
            std::vector<Jet> z(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(d));
            std::vector<Jet> w(args.begin() + static_cast<std::ptrdiff_t>(d), args.end());
            if (dom.kind == CartanKind::TypeIV) {
              for (auto& v : z) v *= kInvSqrt2;
              for (auto& v : w) v *= kInvSqrt2;
            } else if (dom.kind == CartanKind::TypeIII) {
              const auto sl = slots(dom);
              for (std::size_t k = 0; k < sl.size(); ++k)
                if (sl[k].i != sl[k].j) {
                  z[k] *= kInvSqrt2;
                  w[k] *= kInvSqrt2;
                }
            }
            const Jet N = generic_norm(dom, z, w);
            if (!(N.constant_term().real() > 0.0)) throw OutsideDomain("generic norm is not positive at this point");
            return -mu * log(N);
          }};
}

// ---------------------------------------------------------------------------
// Coefficients

double cartan_a1(const CartanDomain& dom, double mu) { return -static_cast<double>(dom.d) * dom.p / (2.0 * mu); }

double cartan_a2(const CartanDomain& dom, double mu) { return a2_bracket<double>(dom) / (2.0 * mu * mu); }

std::optional<Rational> rational_mu(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) return std::nullopt;
  // continued fraction convergents with denominators up to 1000
  long long h0 = 1, h1 = 0, k0 = 0, k1 = 1;
  double x = mu;
  for (int iter = 0; iter < 40; ++iter) {
    const double fl = std::floor(x);
    const long long a = static_cast<long long>(fl);
    const long long h = a * h0 + h1, k = a * k0 + k1;
    if (k > 1000) break;
    if (std::abs(static_cast<double>(h) / static_cast<double>(k) - mu) <= 4e-16 * mu) return Rational(h, k);
    h1 = h0;
    h0 = h;
    k1 = k0;
    k0 = k;
    const double frac = x - fl;
    if (frac == 0.0) break;
    x = 1.0 / frac;
  }
  return std::nullopt;
}

Rational cartan_a1_exact(const CartanDomain& dom, const Rational& mu) {
  return -Rational(dom.d * dom.p) / (2 * mu);
}

Rational cartan_a2_exact(const CartanDomain& dom, const Rational& mu) {
  return a2_bracket<Rational>(dom) / (2 * mu * mu);
}

BaseInvariants cartan_base_invariants(const CartanDomain& dom, double mu) {
  const double k = -static_cast<double>(dom.d) * dom.p / mu;
  const double ric2 = static_cast<double>(dom.d) * dom.p * dom.p / (mu * mu);
  // |R|^2 from the a2 identity with Lap k = 0
  const double riem2 = 24.0 * (cartan_a2(dom, mu) + ric2 / 6.0 - k * k / 8.0);
  return BaseInvariants::make(k, ric2, riem2, 0.0);
}

double pochhammer(double x, int k) {
  if (k < 0) throw DomainViolation("negative Pochhammer length");
  double out = 1.0;
  for (int i = 0; i < k; ++i) out *= x + i;
  return out;
}

double bergman_function(const CartanDomain& dom, double mu, double alpha) {
  if (!(mu > 0.0)) throw DomainViolation("mu must be positive");
  if (!(alpha > (dom.p - 1) / mu)) {
    std::ostringstream os;
    os << "alpha = " << alpha << " must exceed (p-1)/mu = " << (dom.p - 1) / mu;
    throw AlphaTooSmall(os.str());
  }
  double out = std::pow(mu, -dom.d);
  for (int j = 1; j <= dom.r; ++j)
    out *= pochhammer(mu * alpha - dom.p + 1 + (j - 1) * dom.a / 2.0, 1 + dom.b + (dom.r - j) * dom.a);
  return out;
}

int BergmanPolynomial::degree() const {
  return static_cast<int>(exact ? rational.size() : extended.size()) - 1;
}

std::vector<double> BergmanPolynomial::coefficients() const {
  std::vector<double> out;
  if (exact)
    for (const auto& c : rational) out.push_back(static_cast<double>(c));
  else
    for (const auto& c : extended) out.push_back(static_cast<double>(c));
  return out;
}

double BergmanPolynomial::evaluate(double alpha) const {
  if (exact) {
    const Rational x(alpha);  // exact binary value
    Rational acc = 0;
    for (auto it = rational.rbegin(); it != rational.rend(); ++it) acc = acc * x + *it;
    return static_cast<double>(acc);
  }
  const Extended x(alpha);
  Extended acc = 0;
  for (auto it = extended.rbegin(); it != extended.rend(); ++it) acc = acc * x + *it;
  return static_cast<double>(acc);
}

std::string BergmanPolynomial::coefficient_string(int j) const {
  const int idx = degree() - j;
  if (idx < 0) throw DomainViolation("coefficient index out of range");
  if (exact) return rational[static_cast<std::size_t>(idx)].str();
  return extended[static_cast<std::size_t>(idx)].str(30);
}

BergmanPolynomial bergman_poly(const CartanDomain& dom, double mu) {
  if (!(mu > 0.0)) throw DomainViolation("mu must be positive");
  const auto consts = factor_constants(dom);
  BergmanPolynomial out;
  if (auto q = rational_mu(mu)) {
    std::vector<Rational> shifts;
    for (const auto& c : consts) shifts.push_back(c / *q);
    out.exact = true;
    out.rational = expand_monic(shifts);
  } else {
    std::vector<Extended> shifts;
    const Extended m(mu);
    for (const auto& c : consts) {
      const Extended num(numerator(c).str()), den(denominator(c).str());
      shifts.push_back(num / den / m);
    }
    out.extended = expand_monic(shifts);
  }
  if (out.degree() != dom.d) throw UnsupportedDomain("Bergman polynomial degree mismatch for " + dom.name());
  return out;
}

std::vector<double> extract_coeffs(const BergmanPolynomial& poly) {
  const auto c = poly.coefficients();
  std::vector<double> a(c.rbegin(), c.rend());
  if (a.empty() || a[0] != 1.0) throw UnsupportedDomain("Bergman polynomial is not monic");
  // the expansion terminates at j = d, so higher coefficients vanish
  if (a.size() < 3) a.resize(3, 0.0);
  return a;
}

}  // namespace berg
