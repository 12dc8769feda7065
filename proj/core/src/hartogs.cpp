#include "berg/hartogs.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <sstream>

#include "berg/errors.hpp"

namespace berg {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

// p_k(s) for the log family: F^(k) = p_k(s)/A with s = 1/(1 - c e^t).
// p_1 = s - 1 and p_{k+1} = (s^2 - s) p_k'.
std::vector<double> log_family_derivs(const LogType& f, double t, int kmax) {
  const double u = f.c * std::exp(t);
  if (!(u < 1.0)) throw DomainViolation("log family needs c e^t < 1, got t = " + num(t));
  const double s = 1.0 / (1.0 - u);
  std::vector<double> out{std::log(s) / f.A};
  Polynomial p({-1.0, 1.0});
  const Polynomial lift({0.0, -1.0, 1.0});
  for (int k = 1; k <= kmax; ++k) {
    out.push_back(p(s) / f.A);
    p = lift * p.derivative();
  }
  return out;
}

std::vector<double> cos_family_derivs(const CosType& f, double t, int kmax) {
  const double theta = f.mu * f.A * t + f.c;
  const double cs = std::cos(theta);
  if (cs == 0.0) throw DomainViolation("cos family is singular at t = " + num(t));
  const double T = std::tan(theta);
  std::vector<double> out{-std::log(std::abs(cs)) / f.A + f.lambda * t};
  // F^(k) = mu q_k(T), q_1 = T, q_{k+1} = mu A (1 + T^2) q_k'
  Polynomial q({0.0, 1.0});
  const Polynomial lift = Polynomial({1.0, 0.0, 1.0}) * (f.mu * f.A);
  for (int k = 1; k <= kmax; ++k) {
    out.push_back(f.mu * q(T) + (k == 1 ? f.lambda : 0.0));
    q = lift * q.derivative();
  }
  return out;
}

// Univariate jet from Taylor coefficients.
Jet series(std::span<const double> taylor, int order) {
  Jet j(1, order);
  for (int k = 0; k <= order && k < static_cast<int>(taylor.size()); ++k) j[static_cast<std::size_t>(k)] = taylor[static_cast<std::size_t>(k)];
  return j;
}

double re(const Jet& j, std::size_t k = 0) { return j[k].real(); }

// Jets in x of the pieces shared by the closed formulas.
struct XJets {
  int order;
  Jet X, phi, P, Q;
};

constexpr int kXOrder = 5;

XJets make_x_jets(const MomentumProfile& p, int d, int d0, double x) {
  if (d < 1 || d0 < 1) throw DomainViolation("dimensions must be positive");
  if (d0 > 1 && x < 1e-3) throw SingularAtZero("x = " + num(x) + " is too close to the pole at 0 for d0 > 1");
  if (!(x > -1.0)) throw DomainViolation("x must exceed -1");
  const auto tay = p.taylor(x, kXOrder);
  XJets j{kXOrder, Jet::variable(1, kXOrder, 0, x), series(tay, kXOrder), Jet(1, kXOrder), Jet(1, kXOrder)};
  j.P = pow(1.0 + j.X, d);
  if (d0 > 1) j.P = j.P * pow(j.X, d0 - 1);
  j.Q = j.P * j.phi;
  return j;
}

Jet sigma_jet(const XJets& j) { return j.Q.derivative(0) / j.P.truncated(j.order - 1); }

Jet chi_jet(const XJets& j, int d0) {
  const Jet q2 = j.Q.derivative(0).derivative(0);
  Jet c = -(q2 / j.P.truncated(j.order - 2));
  if (d0 > 1) c += static_cast<double>(d0 * (d0 - 1)) / j.X.truncated(j.order - 2);
  return c;
}

double sq(double v) { return v * v; }

}  // namespace

// ---------------------------------------------------------------------------
// FSpec

std::vector<double> FSpec::derivatives(double t, int kmax) const {
  return std::visit(
      [&](const auto& f) -> std::vector<double> {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, LogType>) {
          return log_family_derivs(f, t, kmax);
        } else if constexpr (std::is_same_v<T, ExpType>) {
          return std::vector<double>(static_cast<std::size_t>(kmax + 1), f.c * std::exp(t));
        } else if constexpr (std::is_same_v<T, CosType>) {
          return cos_family_derivs(f, t, kmax);
        } else if constexpr (std::is_same_v<T, QuadraticType>) {
          std::vector<double> out(static_cast<std::size_t>(kmax + 1), 0.0);
          out[0] = f.lambda * t * t + f.c * t;
          if (kmax >= 1) out[1] = 2.0 * f.lambda * t + f.c;
          if (kmax >= 2) out[2] = 2.0 * f.lambda;
          return out;
        } else {
          if (!f.deriv) throw UnsupportedFamily("custom F has no derivative callable");
          std::vector<double> out;
          for (int k = 0; k <= kmax; ++k) out.push_back(f.deriv(t, k));
          return out;
        }
      },
      family);
}

std::string FSpec::describe() const {
  return std::visit(
      [](const auto& f) -> std::string {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, LogType>) return "log:A=" + num(f.A) + ",c=" + num(f.c);
        else if constexpr (std::is_same_v<T, ExpType>) return "exp:c=" + num(f.c);
        else if constexpr (std::is_same_v<T, CosType>)
          return "cos:A=" + num(f.A) + ",mu=" + num(f.mu) + ",c=" + num(f.c) + ",lambda=" + num(f.lambda);
        else if constexpr (std::is_same_v<T, QuadraticType>) return "quad:lambda=" + num(f.lambda) + ",c=" + num(f.c);
        else return f.name;
      },
      family);
}

void check_parameters(const FSpec& f) {
  if (f.d0 < 1) throw DomainViolation("fiber dimension must be at least 1");
  if (const auto* l = std::get_if<LogType>(&f.family)) {
    if (!(l->c * l->A > 0.0) || !(l->c <= 1.0)) throw DomainViolation("log family needs c A > 0 and c <= 1");
  } else if (const auto* e = std::get_if<ExpType>(&f.family)) {
    if (!(e->c > 0.0)) throw DomainViolation("exp family needs c > 0");
  }
}

void check_positivity(const FSpec& f, double t) {
  const auto F = f.derivatives(t, 2);
  if (!(F[2] > 0.0)) throw PositivityViolation("F'' = " + num(F[2]) + " is not positive at t = " + num(t));
  if (f.d0 > 1 && !(F[1] > 0.0)) throw PositivityViolation("F' = " + num(F[1]) + " is not positive at t = " + num(t));
  if (f.d0 == 1 && !(1.0 + F[1] > 0.0))
    throw PositivityViolation("1 + F' = " + num(1.0 + F[1]) + " is not positive at t = " + num(t));
}

// ---------------------------------------------------------------------------
// Profiles

std::vector<double> MomentumProfile::taylor(double x, int order) const {
  // Taylor shift of both polynomials, then series division.
  auto shift = [x, order](const Polynomial& p) {
    std::vector<double> out(static_cast<std::size_t>(order + 1), 0.0);
    Polynomial cur = p;
    double fact = 1.0;
    for (int k = 0; k <= order; ++k) {
      if (k > 0) fact *= k;
      out[static_cast<std::size_t>(k)] = cur(x) / fact;
      cur = cur.derivative();
    }
    return out;
  };
  const auto n = shift(phi.numerator());
  const auto d = shift(phi.denominator());
  if (d[0] == 0.0) throw DomainViolation("profile has a pole at x = " + num(x));
  std::vector<double> q(static_cast<std::size_t>(order + 1), 0.0);
  for (int k = 0; k <= order; ++k) {
    double s = n[static_cast<std::size_t>(k)];
    for (int i = 1; i <= k; ++i) s -= d[static_cast<std::size_t>(i)] * q[static_cast<std::size_t>(k - i)];
    q[static_cast<std::size_t>(k)] = s / d[0];
  }
  return q;
}

MomentumProfile profile_from_F(const FSpec& f) {
  check_parameters(f);
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(
      [&](const auto& g) -> MomentumProfile {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, LogType>) {
          const double xmax = g.c < 1.0 ? g.c / (g.A * (1.0 - g.c)) : inf;
          return {RationalFunction(Polynomial({0.0, 1.0, g.A})), 0.0, xmax};
        } else if constexpr (std::is_same_v<T, ExpType>) {
          return {RationalFunction(Polynomial::x()), 0.0, g.c};
        } else if constexpr (std::is_same_v<T, CosType>) {
          const double a = g.A, l = g.lambda, m = g.mu;
          return {RationalFunction(Polynomial({a * (l * l + m * m), -2.0 * a * l, a})), -inf,
                  m * std::tan(g.c) + l};
        } else if constexpr (std::is_same_v<T, QuadraticType>) {
          return {RationalFunction(Polynomial::constant(2.0 * g.lambda)), -inf, g.c};
        } else {
          throw UnsupportedFamily("profile of a custom F has no closed form; integrate numerically");
        }
      },
      f.family);
}

MomentumProfile profile_xx1() { return {RationalFunction(Polynomial({0.0, 1.0, 1.0})), 0.0,
                                        std::numeric_limits<double>::infinity()}; }

MomentumProfile profile_general_d01(int d, double A, double B, double C1, double C2) {
  const Polynomial y({1.0, 1.0});
  const Polynomial head = (y * y * A - y * B) * Polynomial::linear_power(1.0, 1.0, d);
  const Polynomial numer = head + y * C1 + Polynomial::constant(C2);
  return {RationalFunction(numer, Polynomial::linear_power(1.0, 1.0, d)), 0.0,
          std::numeric_limits<double>::infinity()};
}

MomentumProfile profile_d1_fiber(int d0, double a1, double C) {
  const double lead = (d0 - a1) / (d0 + 1.0) + 0.5 * d0 * C;
  const Polynomial quad({-C, C + 1.0, lead});
  const Polynomial y({1.0, 1.0});
  return {RationalFunction(quad * y + Polynomial::constant(C), y), 0.0, std::numeric_limits<double>::infinity()};
}

// ---------------------------------------------------------------------------
// Potential and blocks

BaseInvariants BaseInvariants::from(const CurvatureInvariants& c) {
  return {c.k, c.ric_norm2, c.riem_norm2, c.lap_k, c.a1, c.a2};
}

BaseInvariants BaseInvariants::make(double k, double ric2, double riem2, double lapk) {
  const auto c = assemble_coefficients(k, ric2, riem2, lapk);
  return from(c);
}

PolarizedPotential hartogs_potential(const PolarizedPotential& base, const FSpec& f) {
  check_parameters(f);
  const int d = base.num_holo;
  const int d0 = f.d0;
  const int n = d + d0;
  return {n, [base, f, d, d0, n](std::span<const Jet> a) {
            std::vector<Jet> barg;
            barg.reserve(static_cast<std::size_t>(2 * d));
            for (int i = 0; i < d; ++i) barg.push_back(a[static_cast<std::size_t>(i)]);
            for (int i = 0; i < d; ++i) barg.push_back(a[static_cast<std::size_t>(n + i)]);
            const Jet phi = base.evaluate(barg);
            Jet r2(a[0].space_ptr());
            for (int k = 0; k < d0; ++k) r2 += a[static_cast<std::size_t>(d + k)] * a[static_cast<std::size_t>(n + d + k)];
            const Jet t = phi + log(r2);
            const double t0 = t.constant_term().real();
            if (!(t0 < 0.0)) throw DomainViolation("point outside the Hartogs domain: t = " + num(t0));
            const auto F = f.derivatives(t0, a[0].order());
            std::vector<cplx> taylor;
            double fact = 1.0;
            for (std::size_t k = 0; k < F.size(); ++k) {
              if (k > 0) fact *= static_cast<double>(k);
              taylor.push_back(F[k] / fact);
            }
            // expand about the real part; the imaginary residue is rounding
            Jet tt = t;
            tt[0] = t0;
            return phi + compose(tt, taylor);
          }};
}

BaseData base_data(const PolarizedPotential& base, std::span<const cplx> z) {
  const int d = base.num_holo;
  const Jet j = polarized_jet(base, z, 2);
  BaseData out{j.constant_term().real(), CVector(d), CMatrix(d, d)};
  for (int i = 0; i < d; ++i) out.dphi(i) = j[1 + static_cast<std::size_t>(i)];
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      std::vector<int> e(static_cast<std::size_t>(2 * d), 0);
      e[static_cast<std::size_t>(i)] += 1;
      e[static_cast<std::size_t>(d + k)] += 1;
      out.H(i, k) = j.mixed_partial(MultiIndex(std::move(e)));
    }
  return out;
}

MetricBlocks metric_blocks(const PolarizedPotential& base, const FSpec& f, std::span<const cplx> z,
                           std::span<const cplx> w) {
  const int d = base.num_holo;
  const int d0 = f.d0;
  if (static_cast<int>(w.size()) != d0) throw ShapeMismatch("w has the wrong length");
  const BaseData b = base_data(base, z);
  MetricBlocks m;
  for (const auto& v : w) m.r2 += std::norm(v);
  if (m.r2 == 0.0) throw PositivityViolation("w = 0 is excluded from the block formulas");
  m.t = b.phi + std::log(m.r2);
  if (!(m.t < 0.0)) throw DomainViolation("point outside the Hartogs domain: t = " + num(m.t));
  check_positivity(f, m.t);
  const auto F = f.derivatives(m.t, 2);
  m.Fp = F[1];
  m.Fpp = F[2];
  const double r2 = m.r2, Fp = m.Fp, Fpp = m.Fpp;

  CMatrix wrow(1, d0), wbar(d0, 1);
  for (int a = 0; a < d0; ++a) {
    wrow(0, a) = w[static_cast<std::size_t>(a)];
    wbar(a, 0) = std::conj(w[static_cast<std::size_t>(a)]);
  }
  const CMatrix dphi = b.dphi;              // column
  const CMatrix dbar = b.dphi.adjoint();    // row of dbar phi
  const CMatrix Hinv = b.H.inverse();
  const CMatrix I0 = CMatrix::Identity(d0, d0);

  m.T1 = (1.0 + Fp) * b.H + Fpp * dphi * dbar;
  m.T2 = (Fpp / r2) * dphi * wrow;
  m.T3 = (Fpp / r2) * wbar * dbar;
  m.T4 = (Fp / r2) * I0 + ((Fpp - Fp) / (r2 * r2)) * wbar * wrow;

  m.Tinv1 = Hinv / (1.0 + Fp);
  m.Tinv2 = -Hinv * dphi * wrow / (1.0 + Fp);
  m.Tinv3 = -wbar * dbar * Hinv / (1.0 + Fp);
  m.Tinv4 = (r2 / Fp) * I0 + (1.0 / Fpp - 1.0 / Fp) * wbar * wrow + wbar * dbar * Hinv * dphi * wrow / (1.0 + Fp);

  const int n = d + d0;
  m.T.resize(n, n);
  m.T << m.T1, m.T2, m.T3, m.T4;
  m.T_inv.resize(n, n);
  m.T_inv << m.Tinv1, m.Tinv2, m.Tinv3, m.Tinv4;
  m.det_T = std::pow(r2, -d0) * std::pow(Fp, d0 - 1) * Fpp * std::pow(1.0 + Fp, d) * b.H.determinant().real();
  return m;
}

// ---------------------------------------------------------------------------
// x-side closed forms

double sigma(const MomentumProfile& p, int d, int d0, double x) {
  return re(sigma_jet(make_x_jets(p, d, d0, x)));
}

double chi(const MomentumProfile& p, int d, int d0, double x) { return re(chi_jet(make_x_jets(p, d, d0, x), d0)); }

CurvatureInvariants invariants_closed(const MomentumProfile& p, int d, int d0, double x, const BaseInvariants& base) {
  const XJets j = make_x_jets(p, d, d0, x);
  const Jet sig = sigma_jet(j);
  const Jet ch = chi_jet(j, d0);
  const double y = 1.0 + x;
  const double s = re(sig), s1 = re(sig, 1);
  const double ph = re(j.phi), ph1 = re(j.phi, 1), ph2 = 2.0 * re(j.phi, 2);

  const double k = base.k / y + re(ch);

  double ric2 = base.ric2 / (y * y) - 2.0 * s * base.k / (y * y) + s1 * s1 + d * sq(s / y);
  if (d0 > 1) ric2 += (d0 - 1) * sq((s - d0) / x);

  // (phi P/(1+x)^2)'/P and (phi chi' P)'/P
  const Jet Pl = j.P.truncated(j.order - 1);
  const Jet mid = (j.phi * j.P / ((1.0 + j.X) * (1.0 + j.X))).derivative(0) / Pl;
  const Jet chi1 = ch.derivative(0);  // order 2
  const Jet tail = (j.phi.truncated(2) * chi1 * j.P.truncated(2)).derivative(0) / j.P.truncated(1);
  const double lapk = base.lapk / (y * y) - re(mid) * base.k + re(tail);

  // (phi/(1+x))' = phi'/(1+x) - phi/(1+x)^2
  const double q1 = ph1 / y - ph / (y * y);
  double riem2 = base.riem2 / (y * y) - 4.0 * ph * base.k / (y * y * y) + 2.0 * d * (d + 1) * sq(ph) / std::pow(y, 4) +
                 4.0 * d * q1 * q1 + ph2 * ph2;
  if (d0 > 1) {
    const double r1 = ph1 / x - ph / (x * x);  // (phi/x)'
    riem2 += (d0 - 1) * (4.0 * d * sq(ph / (x * y)) + 4.0 * r1 * r1 + 2.0 * d0 * sq((ph - x) / (x * x)));
  }
  return assemble_coefficients(k, ric2, riem2, lapk);
}

Coefficients coefficients_closed(const MomentumProfile& p, int d, int d0, double x, double a1, double a2) {
  const XJets j = make_x_jets(p, d, d0, x);
  const Jet sig = sigma_jet(j);
  const Jet ch = chi_jet(j, d0);
  const double y = 1.0 + x;
  const double s = re(sig), s1 = re(sig, 1);
  const double c = re(ch);
  const double ph = re(j.phi), ph1 = re(j.phi, 1), ph2 = 2.0 * re(j.phi, 2);
  const Jet chi1 = ch.derivative(0);
  const double c1 = re(chi1);
  const double phc1_1 = re((j.phi.truncated(2) * chi1).derivative(0));  // (phi chi')'

  Coefficients out;
  out.a1 = a1 / y + 0.5 * c;

  const double q1 = ph1 / y - ph / (y * y);
  double weight = (d + d0 - 1) / y;
  if (d0 > 1) weight += (d0 - 1) / (x * y);
  const double brace = 8.0 * phc1_1 + 3.0 * c * c - 4.0 * s1 * s1 - 4.0 * d * s * s / (y * y) + ph2 * ph2 +
                       4.0 * d * q1 * q1 + 8.0 * weight * ph * c1 + 2.0 * d * (d + 1) * ph * ph / std::pow(y, 4);
  out.a2 = a2 / (y * y) + (c / (2.0 * y) + ph / (y * y * y)) * a1 + brace / 24.0;
  if (d0 > 1) {
    const double r1 = ph1 / x - ph / (x * x);
    out.a2 += (d0 - 1) / 6.0 *
              (d * ph * ph / (x * x * y * y) + r1 * r1 + 0.5 * d0 * sq(ph - x) / std::pow(x, 4) - sq((s - d0) / x));
  }
  return out;
}

// ---------------------------------------------------------------------------
// t-side closed forms

CurvatureInvariants invariants_t_side(const FSpec& f, int d, double t, const BaseInvariants& base, TSideTerms* terms) {
  if (!(t < 0.0)) throw DomainViolation("t must be negative");
  check_positivity(f, t);
  const int d0 = f.d0;
  constexpr int order = 6;
  const auto F = f.derivatives(t, order);
  std::vector<double> tay;
  double fact = 1.0;
  for (int k = 0; k <= order; ++k) {
    if (k > 0) fact *= k;
    tay.push_back(F[static_cast<std::size_t>(k)] / fact);
  }
  const Jet Ft = series(tay, order);
  const Jet F1 = Ft.derivative(0).truncated(4);
  const Jet F2 = Ft.derivative(0).derivative(0);  // order 4
  Jet G = log(F2) + static_cast<double>(d) * log(1.0 + F1);
  if (d0 > 1) G += static_cast<double>(d0 - 1) * log(F1);
  const Jet G1 = G.derivative(0).truncated(2);
  const Jet G2 = G.derivative(0).derivative(0);  // order 2
  const Jet f1 = F1.truncated(2), f2 = F2.truncated(2);

  Jet psi1 = -static_cast<double>(d) * G1 / (1.0 + f1) - G2 / f2;
  if (d0 > 1) psi1 += static_cast<double>(d0 - 1) * (static_cast<double>(d0) - G1) / f1;
  const double g1 = re(G1), g2 = re(G2), fp = re(f1), fpp = re(f2);
  double psi2 = d * sq(g1 / (1.0 + fp)) + sq(g2 / fpp);
  if (d0 > 1) psi2 += (d0 - 1) * sq((g1 - d0) / fp);

  const Jet kj = base.k / (1.0 + f1) + psi1;
  const double k = re(kj), kt = re(kj, 1), ktt = 2.0 * re(kj, 2);
  const double y = 1.0 + fp;
  const double ric2 = base.ric2 / (y * y) - 2.0 * g1 * base.k / (y * y) + psi2;
  double coef = d / y;
  if (d0 > 1) coef += (d0 - 1) / fp;
  const double lapk = base.lapk / (y * y) + ktt / fpp + coef * kt;
  if (terms) *terms = {g1, g2, re(psi1), psi2};

  CurvatureInvariants out;
  out.k = k;
  out.ric_norm2 = ric2;
  out.lap_k = lapk;
  out.a1 = k / 2.0;
  return out;
}

// ---------------------------------------------------------------------------
// Specialized theorem coefficients

TheoremKind parse_theorem_kind(const std::string& s) {
  if (s == "xx1") return TheoremKind::xx1;
  if (s == "quad_d1") return TheoremKind::quad_d1;
  if (s == "general_d01") return TheoremKind::general_d01;
  throw InvalidKind("unknown theorem kind '" + s + "'");
}

MomentumProfile theorem_profile(TheoremKind kind, const TheoremParams& prm, int d) {
  switch (kind) {
    case TheoremKind::xx1:
      return profile_xx1();
    case TheoremKind::quad_d1:
      return {RationalFunction(Polynomial({0.0, 1.0, prm.A})), 0.0, std::numeric_limits<double>::infinity()};
    case TheoremKind::general_d01:
      return profile_general_d01(d, prm.A, prm.B, prm.C1, prm.C2);
  }
  throw InvalidKind("unknown theorem kind");
}

TheoremCoefficients theorem_profile_coeffs(TheoremKind kind, const TheoremParams& prm, double a1, double a2, int d,
                                           int d0, double x) {
  const double y = 1.0 + x;
  TheoremCoefficients out;
  switch (kind) {
    case TheoremKind::xx1: {
      const double n = d + d0;
      const double shift = a1 + d * (d + 1) / 2.0;
      out.a1 = shift / y - n * (n + 1) / 2.0;
      out.a2 = (a2 + (d - 1) * (d + 2) / 2.0 * shift - (d - 1.0) * d * (d + 1) * (3 * d + 2) / 24.0) / (y * y) -
               (n - 1) * (n + 2) / 2.0 * shift / y + (n - 1) * n * (n + 1) * (3 * n + 2) / 24.0;
      return out;
    }
    case TheoremKind::quad_d1: {
      if (d != 1) throw InvalidKind("quad_d1 requires d = 1");
      const double A = prm.A;
      const double n = 1.0 + d0;
      out.a1 = (a1 - d0 + A * (d0 + 1)) / y - n * (n + 1) * A / 2.0;
      if (std::abs(a1 - (d0 - (d0 + 1) * A)) <= 1e-12 * std::max(1.0, std::abs(a1)))
        out.a2 = a2 / (y * y) + (n - 1) * n * (n + 1) * (3 * n + 2) * A * A / 24.0;
      return out;
    }
    case TheoremKind::general_d01: {
      if (d0 != 1) throw InvalidKind("general_d01 requires d0 = 1");
      const double A = prm.A, B = prm.B;
      out.a1 = (a1 + d * (d + 1) * B / 2.0) / y - A * (d + 1) * (d + 2) / 2.0;
      const double tol = 1e-12;
      const bool a1_match = std::abs(a1 + d * (d + 1) * B / 2.0) <= tol * std::max(1.0, std::abs(a1));
      const double a2_want = (d - 1.0) * d * (d + 1) * (3 * d + 2) * B * B / 24.0;
      const bool a2_match = std::abs(a2 - a2_want) <= tol * std::max(1.0, std::abs(a2));
      if (prm.C1 == 0.0 && prm.C2 == 0.0 && a1_match && a2_match)
        out.a2 = d * (d + 1.0) * (d + 2) * (3 * d + 5) * A * A / 24.0;
      return out;
    }
  }
  throw InvalidKind("unknown theorem kind");
}

// ---------------------------------------------------------------------------
// Profile ODE

FTable F_from_profile(const MomentumProfile& p, std::span<const double> t_grid, std::optional<double> x0) {
  if (t_grid.empty()) throw DomainViolation("empty t grid");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1])) throw DomainViolation("t grid must be increasing");
  if (!(t_grid.back() < 0.0)) throw DomainViolation("t grid must be negative");
  if (p.x_lo != 0.0) throw DomainViolation("profile normalization needs x_lo = 0");

  using boost::math::quadrature::exp_sinh;
  using boost::math::quadrature::tanh_sinh;
  const double t0 = t_grid.front();

  // t(x) = -int_x^{x_hi} d xi / phi, in log variables xi = e^u
  auto t_of_x = [&](double x) {
    auto g = [&](double u) {
      const double e = std::exp(u);
      if (!std::isfinite(e)) return 0.0;
      const double v = p(e);
      return std::isfinite(v) ? e / v : 0.0;
    };
    if (std::isinf(p.x_hi)) {
      exp_sinh<double> q;
      return -q.integrate(g, std::log(x), std::numeric_limits<double>::infinity());
    }
    tanh_sinh<double> q;
    return -q.integrate(g, std::log(x), std::log(p.x_hi));
  };

  double xs = 0.0;
  if (x0) {
    xs = *x0;
  } else {
    const double ulo = -700.0;
    const double uhi = std::isinf(p.x_hi) ? 700.0 : std::log(p.x_hi) - 1e-14;
    auto h = [&](double u) { return t_of_x(std::exp(u)) - t0; };
    boost::uintmax_t iters = 200;
    auto tol = boost::math::tools::eps_tolerance<double>(52);
    const auto r = boost::math::tools::toms748_solve(h, ulo, uhi, tol, iters);
    xs = std::exp(0.5 * (r.first + r.second));
  }
  if (!(xs > 0.0) || !(xs < p.x_hi)) throw DomainViolation("starting x is outside the profile interval");

  tanh_sinh<double> q;
  const double F0 = q.integrate([&](double xi) { return xi == 0.0 ? 0.0 : xi / p(xi); }, 0.0, xs);

  using State = std::array<double, 2>;
  namespace ode = boost::numeric::odeint;
  FTable out;
  auto rhs = [&](const State& s, State& ds, double) {
    ds[0] = p(s[0]);
    ds[1] = s[0];
  };
  auto observer = [&](const State& s, double t) {
    if (!std::isfinite(s[0]) || !(s[0] < p.x_hi)) {
      throw IntegrationBlowup("profile solution leaves the interval near t = " + num(t));
    }
    out.t.push_back(t);
    out.x.push_back(s[0]);
    out.F.push_back(s[1]);
  };
  State s{xs, F0};
  auto stepper = ode::make_controlled(1e-13, 1e-12, ode::runge_kutta_dopri5<State>());
  std::vector<double> times(t_grid.begin(), t_grid.end());
  try {
    ode::integrate_times(stepper, rhs, s, times.begin(), times.end(), 1e-3, observer);
  } catch (const ode::step_adjustment_error& e) {
    throw IntegrationBlowup(std::string("step size collapsed: ") + e.what());
  } catch (const ode::no_progress_error& e) {
    throw IntegrationBlowup(std::string("no progress: ") + e.what());
  }
  return out;
}

}  // namespace berg
