#include "berg/classification.hpp"

#include <cmath>
#include <numeric>

#include "berg/errors.hpp"

namespace berg {

namespace {

bool close(double a, double b) { return std::abs(a - b) <= kClassifyTol * std::max({std::abs(a), std::abs(b), 1.0}); }

double ball_a1(int n) { return -n * (n + 1.0) / 2.0; }
double ball_a2(int n) { return (n - 1.0) * n * (n + 1.0) * (3.0 * n + 2.0) / 24.0; }

void summarize(ConstancyReport& rep) {
  const auto n = static_cast<double>(rep.a1.size());
  rep.samples = static_cast<int>(rep.a1.size());
  if (rep.samples == 0) throw DomainViolation("constancy check needs at least one sample");
  auto stats = [n](const std::vector<double>& v, double& mean, double& sd) {
    mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double s = 0;
    for (double x : v) s += (x - mean) * (x - mean);
    sd = std::sqrt(s / n);
  };
  stats(rep.a1, rep.mean_a1, rep.stddev_a1);
  stats(rep.a2, rep.mean_a2, rep.stddev_a2);
  rep.constant = rep.stddev_a1 < kConstancyTol * std::max(std::abs(rep.mean_a1), 1.0) &&
                 rep.stddev_a2 < kConstancyTol * std::max(std::abs(rep.mean_a2), 1.0);
}

double rel_gap(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1.0); }

}  // namespace

ClassificationVerdict classify(int d, int d0, double a1_base, double a2_base) {
  ClassificationVerdict v;
  if (d < 1 || d0 < 1) {
    v.reason = "invalid-dimension";
    return v;
  }
  if (d == 1) {
    if (!close(a2_base, 0.0)) {
      v.reason = "base-a2-nonzero";
      return v;
    }
    const double A = (d0 - a1_base) / (d0 + 1.0);
    if (close(A, 0.0)) {
      // F = c e^t keeps both coefficients constant, but it does not live on a
      // bounded Hartogs domain.
      v.reason = "A-zero-exponential-fiber";
      return v;
    }
    if (A < 0.0) {
      v.reason = "A-nonpositive";
      return v;
    }
    const int n = 1 + d0;
    v.constant = true;
    v.f = FSpec{LogType{A, 1.0}, d0};
    v.expected_a1 = ball_a1(n) * A;
    v.expected_a2 = ball_a2(n) * A * A;
    v.reason = "theorem-d1";
    return v;
  }
  if (!close(a1_base, ball_a1(d)) || !close(a2_base, ball_a2(d))) {
    v.reason = "base-not-unit-ball";
    return v;
  }
  const int n = d + d0;
  v.constant = true;
  v.f = FSpec{LogType{1.0, 1.0}, d0};
  v.expected_a1 = ball_a1(n);
  v.expected_a2 = ball_a2(n);
  v.reason = "theorem-ball";
  return v;
}

ClassificationVerdict cartan_hartogs_verdict(const CartanDomain& dom, double mu, int d0) {
  ClassificationVerdict v;
  if (!dom.is_ball()) {
    v.reason = "not-a-ball";
    return v;
  }
  if (!(mu > 0.0)) {
    v.reason = "mu-nonpositive";
    return v;
  }
  if (dom.d > 1 && !close(mu, 1.0)) {
    v.reason = "mu-not-one";
    return v;
  }
  return classify(dom.d, d0, cartan_a1(dom, mu), cartan_a2(dom, mu));
}

std::pair<double, double> default_x_interval(const MomentumProfile& p, int d0) {
  if (d0 == 1 || !std::isfinite(p.x_hi)) return {0.05, 2.0};
  return {0.05, 0.8 * p.x_hi};
}

ConstancyReport verify_constancy_analytic(const AnalyticConfig& cfg) {
  if (cfg.samples < 2) throw DomainViolation("analytic constancy needs at least two samples");
  const auto [dlo, dhi] = default_x_interval(cfg.profile, cfg.d0);
  const double lo = cfg.x_lo.value_or(dlo), hi = cfg.x_hi.value_or(dhi);
  if (!(lo > 0.0 && hi > lo)) throw DomainViolation("x interval must satisfy 0 < lo < hi");
  ConstancyReport rep;
  for (int i = 0; i < cfg.samples; ++i) {
    const double x = lo + (hi - lo) * i / (cfg.samples - 1);
    const auto c = coefficients_closed(cfg.profile, cfg.d, cfg.d0, x, cfg.a1_base, cfg.a2_base);
    rep.a1.push_back(c.a1);
    rep.a2.push_back(c.a2);
  }
  summarize(rep);
  rep.pass = rep.constant == cfg.expect_constant;
  if (cfg.f) {
    if (const auto* lt = std::get_if<LogType>(&cfg.f->family); lt && lt->c < 1.0) {
      rep.incomplete = true;
      rep.notes.push_back("c < 1: coefficients are constant but the metric is not complete");
    }
  }
  return rep;
}

ConstancyReport verify_constancy_oracle(const OracleGridConfig& cfg) {
  const auto pot = hartogs_potential(cfg.base, cfg.f);
  const int d = cfg.d, d0 = cfg.f.d0;
  std::optional<MomentumProfile> profile;
  if (cfg.base_invariants) {
    try {
      profile = profile_from_F(cfg.f);
    } catch (const UnsupportedFamily&) {
    }
  }
  ConstancyReport rep;
  for (const auto& pt : cfg.points) {
    if (static_cast<int>(pt.size()) != d + d0) throw ShapeMismatch("grid point has the wrong number of coordinates");
    const auto res = evaluate_oracle(pot, pt);
    rep.a1.push_back(res.invariants.a1);
    rep.a2.push_back(res.invariants.a2);
    if (profile) {
      std::span<const cplx> z(pt.data(), static_cast<std::size_t>(d));
      double r2 = 0;
      for (int k = 0; k < d0; ++k) r2 += std::norm(pt[static_cast<std::size_t>(d + k)]);
      const double t = cfg.base.value(z).real() + std::log(r2);
      const double x = cfg.f.derivatives(t, 1)[1];
      const auto cl = invariants_closed(*profile, d, d0, x, *cfg.base_invariants);
      const auto& o = res.invariants;
      rep.max_oracle_closed_gap =
          std::max({rep.max_oracle_closed_gap, rel_gap(o.k, cl.k), rel_gap(o.ric_norm2, cl.ric_norm2),
                    rel_gap(o.riem_norm2, cl.riem_norm2), rel_gap(o.lap_k, cl.lap_k), rel_gap(o.a1, cl.a1),
                    rel_gap(o.a2, cl.a2)});
    }
  }
  summarize(rep);
  rep.pass = rep.constant == cfg.expect_constant && rep.max_oracle_closed_gap < kConstancyTol;
  if (const auto* lt = std::get_if<LogType>(&cfg.f.family); lt && lt->c < 1.0) {
    rep.incomplete = true;
    rep.notes.push_back("c < 1: coefficients are constant but the metric is not complete");
  }
  return rep;
}

std::vector<std::vector<cplx>> hartogs_points(const PolarizedPotential& base, std::span<const std::vector<cplx>> zs,
                                              int d0, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> us(0.05, 0.9);
  std::normal_distribution<double> g;
  std::vector<std::vector<cplx>> out;
  for (const auto& z : zs) {
    const double phi = base.value(z).real();
    const double r2 = us(rng) * std::exp(-phi);
    std::vector<cplx> w(static_cast<std::size_t>(d0));
    double n2 = 0;
    for (auto& v : w) {
      v = {g(rng), g(rng)};
      n2 += std::norm(v);
    }
    std::vector<cplx> pt(z);
    for (auto& v : w) pt.push_back(v * std::sqrt(r2 / n2));
    out.push_back(std::move(pt));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ball automorphisms

namespace {

CMatrix random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = {g(rng), g(rng)};
  Eigen::HouseholderQR<CMatrix> qr(M);
  return qr.householderQ() * CMatrix::Identity(n, n);
}

}  // namespace

BallAutomorphism BallAutomorphism::identity(int d, int d0, double mu) {
  return {CVector::Zero(d), CMatrix::Identity(d, d), CMatrix::Identity(d0, d0), mu};
}

BallAutomorphism BallAutomorphism::random(int d, int d0, double mu, double radius, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  CVector a(d);
  for (int i = 0; i < d; ++i) a(i) = {g(rng), g(rng)};
  a *= radius * std::pow(u01(rng), 1.0 / (2.0 * d)) / a.norm();
  return {a, random_unitary(d, rng), random_unitary(d0, rng), mu};
}

std::vector<cplx> BallAutomorphism::apply(std::span<const cplx> zw) const {
  const int d = static_cast<int>(a.size()), d0 = static_cast<int>(U.rows());
  if (static_cast<int>(zw.size()) != d + d0) throw ShapeMismatch("automorphism applied to a point of wrong size");
  CVector z(d), w(d0);
  for (int i = 0; i < d; ++i) z(i) = zw[static_cast<std::size_t>(i)];
  for (int i = 0; i < d0; ++i) w(i) = zw[static_cast<std::size_t>(d + i)];

  const double a2 = a.squaredNorm();
  const cplx za = a.dot(z);  // sum z_i conj(a_i)
  CVector gz;
  if (a2 == 0.0) {
    gz = z;
  } else {
    const CVector Pz = (za / a2) * a;
    const CVector Qz = z - Pz;
    gz = (a - Pz - std::sqrt(1.0 - a2) * Qz) / (1.0 - za);
  }
  gz = V * gz;
  // psi(z) = N(a, a)^(mu/2) / N(z, a)^mu
  const cplx psi = std::pow(1.0 - a2, mu / 2.0) / std::pow(1.0 - za, mu);
  const CVector gw = (psi * w.transpose() * U).transpose();

  std::vector<cplx> out;
  for (int i = 0; i < d; ++i) out.push_back(gz(i));
  for (int i = 0; i < d0; ++i) out.push_back(gw(i));
  return out;
}

double pullback_invariance_check(const CartanDomain& dom, double mu, const FSpec& f,
                                 std::span<const BallAutomorphism> maps, std::span<const std::vector<cplx>> points) {
  if (!dom.is_ball()) throw UnsupportedDomain("pullback check needs a ball base");
  const auto pot = hartogs_potential(base_potential(dom, mu), f);
  double dev = 0;
  for (const auto& pt : points) {
    const auto p = evaluate_oracle(pot, pt).invariants;
    for (const auto& m : maps) {
      const auto q = evaluate_oracle(pot, m.apply(pt)).invariants;
      dev = std::max({dev, rel_gap(q.k, p.k), rel_gap(q.ric_norm2, p.ric_norm2), rel_gap(q.riem_norm2, p.riem_norm2),
                      rel_gap(q.lap_k, p.lap_k), rel_gap(q.a1, p.a1), rel_gap(q.a2, p.a2)});
    }
  }
  return dev;
}

}  // namespace berg
