#include "berg/geometry.hpp"

#include <cmath>
#include <sstream>

#include "berg/errors.hpp"

namespace berg {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Unit multi-index for d/dZ_i d/dW_j in 2n variables.
MultiIndex zw_index(int n, int i, int j) {
  std::vector<int> e(static_cast<std::size_t>(2 * n), 0);
  e[static_cast<std::size_t>(i)] += 1;
  e[static_cast<std::size_t>(n + j)] += 1;
  return MultiIndex(std::move(e));
}

void check_hermitian(const CMatrix& T) {
  const double scale = std::max(T.cwiseAbs().maxCoeff(), 1.0);
  const double dev = (T - T.adjoint()).cwiseAbs().maxCoeff();
  if (dev > kHermitianTol * scale) {
    throw RealityViolation("metric tensor is not Hermitian (deviation " + fmt(dev) + ")");
  }
}

void check_positive(const CMatrix& T) {
  const CMatrix herm = 0.5 * (T + T.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  if (!(lo > kMinEigenvalue)) {
    throw NotPositiveDefinite("smallest metric eigenvalue " + fmt(lo) + " is below " + fmt(kMinEigenvalue));
  }
}

// Everything downstream of the metric jets, shared by the public entry points.
struct Pipeline {
  MetricAtPoint metric;
  CMatrix ricci;
  Jet k_jet;
  std::vector<cplx> riemann;
};

Pipeline run_pipeline(const PolarizedPotential& pot, std::span<const cplx> point) {
  Pipeline p{metric_tensor(pot, point, kDefaultOrder), {}, Jet(1, 0), {}};
  const int n = p.metric.n;
  const auto& Tj = p.metric.T_jets;  // order 4

  const Jet logdet = log(jet_det(Tj));
  const auto space2 = JetSpace::get(2 * n, 2);
  JetMatrix ric(n, space2);
  p.ricci.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      ric(i, j) = -logdet.derivative(i).derivative(n + j);
      p.ricci(i, j) = ric(i, j).constant_term();
    }

  const JetMatrix tinv = jet_inverse(Tj.truncated(2));
  Jet k(space2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) k += tinv(j, i) * ric(i, j);
  p.k_jet = k;
  p.riemann = riemann_tensor(p.metric);
  return p;
}

}  // namespace

cplx PolarizedPotential::value(std::span<const cplx> z) const {
  return polarized_jet(*this, z, 0).constant_term();
}

double checked_real(cplx v, const char* what) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw RealityViolation(std::string(what) + " is not finite");
  }
  if (std::abs(v.imag()) > kRealityTol * std::max(std::abs(v), 1.0)) {
    throw RealityViolation(std::string(what) + " has imaginary residue " + fmt(v.imag()));
  }
  return v.real();
}

CurvatureInvariants assemble_coefficients(double k, double ric_norm2, double riem_norm2, double lap_k) {
  CurvatureInvariants out{k, ric_norm2, riem_norm2, lap_k, 0, 0};
  out.a1 = k / 2.0;
  out.a2 = lap_k / 3.0 + riem_norm2 / 24.0 - ric_norm2 / 6.0 + k * k / 8.0;
  return out;
}

Jet polarized_jet(const PolarizedPotential& pot, std::span<const cplx> point, int order) {
  const int n = pot.num_holo;
  if (static_cast<int>(point.size()) != n) {
    throw ShapeMismatch("point has " + std::to_string(point.size()) + " coordinates, potential expects " +
                        std::to_string(n));
  }
  std::vector<cplx> seed(point.begin(), point.end());
  for (const auto& z : point) seed.push_back(std::conj(z));
  const auto args = jet_seed(seed, order);
  return pot.evaluate(args);
}

MetricAtPoint metric_tensor(const PolarizedPotential& pot, std::span<const cplx> point, int order) {
  if (order < 2) throw OrderExceeded("metric needs jet order at least 2");
  const int n = pot.num_holo;
  const Jet phi = polarized_jet(pot, point, order);

  MetricAtPoint m{n, CMatrix(n, n), CMatrix(n, n), 0.0, JetMatrix(n, JetSpace::get(2 * n, order - 2))};
  std::vector<Jet> dz;
  dz.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) dz.push_back(phi.derivative(i));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      m.T_jets(i, j) = dz[static_cast<std::size_t>(i)].derivative(n + j);
      m.T(i, j) = m.T_jets(i, j).constant_term();
    }
  check_hermitian(m.T);
  check_positive(m.T);

  Eigen::PartialPivLU<CMatrix> lu(m.T);
  m.det_T = lu.determinant();
  m.T_inv = lu.inverse();
  const double resid = (m.T * m.T_inv - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!(resid < 1e-10 * std::max(1.0, m.T.cwiseAbs().maxCoeff() * m.T_inv.cwiseAbs().maxCoeff()))) {
    throw SingularMatrix("metric inverse residual " + fmt(resid));
  }
  checked_real(m.det_T, "det T");
  return m;
}

std::vector<cplx> riemann_tensor(const MetricAtPoint& m) {
  const int n = m.n;
  if (m.T_jets.order() < 2) throw OrderExceeded("Riemann tensor needs two orders of headroom");
  const auto& M = m.T_inv;
  // dT[k](i,j) = d_k T_ij, dTb[l](i,j) = d_lbar T_ij
  std::vector<CMatrix> dT(static_cast<std::size_t>(n), CMatrix(n, n));
  std::vector<CMatrix> dTb(static_cast<std::size_t>(n), CMatrix(n, n));
  for (int v = 0; v < n; ++v)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        dT[static_cast<std::size_t>(v)](i, j) = m.T_jets(i, j)[1 + static_cast<std::size_t>(v)];
        dTb[static_cast<std::size_t>(v)](i, j) = m.T_jets(i, j)[1 + static_cast<std::size_t>(n + v)];
      }

  const auto N = static_cast<std::size_t>(n);
  std::vector<cplx> R(N * N * N * N);
  auto at = [N](int i, int j, int k, int l) {
    return ((static_cast<std::size_t>(i) * N + static_cast<std::size_t>(j)) * N + static_cast<std::size_t>(k)) * N +
           static_cast<std::size_t>(l);
  };
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      const CMatrix quad = dT[static_cast<std::size_t>(k)] * M * dTb[static_cast<std::size_t>(l)];
      const auto idx = zw_index(n, k, l);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) R[at(i, j, k, l)] = -m.T_jets(i, j).mixed_partial(idx) + quad(i, j);
    }

  double scale = 1.0;
  for (const auto& v : R) scale = std::max(scale, std::abs(v));
  const double tol = kSymmetryTol * scale;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const cplx r = R[at(i, j, k, l)];
          const double dev = std::max({std::abs(r - R[at(k, j, i, l)]), std::abs(r - R[at(i, l, k, j)]),
                                       std::abs(r - R[at(k, l, i, j)]), std::abs(r - std::conj(R[at(j, i, l, k)]))});
          if (dev > tol) {
            throw SymmetryViolation("curvature symmetry fails at (" + std::to_string(i) + "," + std::to_string(j) +
                                    "," + std::to_string(k) + "," + std::to_string(l) + ") by " + fmt(dev));
          }
        }
  return R;
}

RiemannNorm riemann_contraction(const MetricAtPoint& m, const std::vector<cplx>& R) {
  const int n = m.n;
  const auto N = static_cast<std::size_t>(n);
  const auto& M = m.T_inv;
  auto at = [N](int i, int j, int k, int l) {
    return ((static_cast<std::size_t>(i) * N + static_cast<std::size_t>(j)) * N + static_cast<std::size_t>(k)) * N +
           static_cast<std::size_t>(l);
  };

  // S_abcd = sum M_ai M_jb M_ck M_ld R_ijkl, one index at a time.
  std::vector<cplx> A(R.size()), B(R.size());
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          cplx s = 0;
          for (int i = 0; i < n; ++i) s += M(a, i) * R[at(i, j, k, l)];
          A[at(a, j, k, l)] = s;
        }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          cplx s = 0;
          for (int j = 0; j < n; ++j) s += A[at(a, j, k, l)] * M(j, b);
          B[at(a, b, k, l)] = s;
        }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int l = 0; l < n; ++l) {
          cplx s = 0;
          for (int k = 0; k < n; ++k) s += M(c, k) * B[at(a, b, k, l)];
          A[at(a, b, c, l)] = s;
        }
  cplx total = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          cplx s = 0;
          for (int l = 0; l < n; ++l) s += A[at(a, b, c, l)] * M(l, d);
          total += s * std::conj(R[at(a, b, c, d)]);
        }

  RiemannNorm out;
  out.full = checked_real(total, "|R|^2");

  const double tscale = m.T.cwiseAbs().maxCoeff();
  bool diagonal = true;
  for (int i = 0; i < n && diagonal; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && std::abs(m.T(i, j)) > 1e-12 * tscale) {
        diagonal = false;
        break;
      }
  if (diagonal) {
    // sum_ij T^{ii} T^{jj} Tr(T^-1 R_ij T^-1 conj(R_ij)^t), R_ij = (R_{i jbar k lbar})_kl
    cplx acc = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        CMatrix Rij(n, n);
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) Rij(k, l) = R[at(i, j, k, l)];
        const cplx Aij = (M * Rij * M * Rij.adjoint()).trace();
        acc += M(i, i) * M(j, j) * Aij;
      }
    out.diagonal = checked_real(acc, "|R|^2 (diagonal form)");
    out.agree = std::abs(*out.diagonal - out.full) <= kSymmetryTol * std::max(std::abs(out.full), 1.0);
  }
  return out;
}

OracleResult evaluate_oracle(const PolarizedPotential& pot, std::span<const cplx> point) {
  Pipeline p = run_pipeline(pot, point);
  const int n = p.metric.n;
  const auto& M = p.metric.T_inv;

  const CMatrix MR = M * p.ricci;
  const double k = checked_real(MR.trace(), "scalar curvature");
  const double ric2 = checked_real((MR * MR).trace(), "|Ric|^2");
  if (std::abs(k - checked_real(p.k_jet.constant_term(), "scalar curvature jet")) >
      kRealityTol * std::max(std::abs(k), 1.0)) {
    throw RealityViolation("scalar curvature jet disagrees with its matrix form");
  }

  cplx lap = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) lap += M(b, a) * p.k_jet.mixed_partial(zw_index(n, a, b));
  const double lap_k = checked_real(lap, "Laplacian of scalar curvature");

  OracleResult out{std::move(p.metric), std::move(p.ricci), {}, {}};
  out.riemann = riemann_contraction(out.metric, p.riemann);
  out.invariants = assemble_coefficients(k, ric2, out.riemann.full, lap_k);
  return out;
}

CMatrix ricci_tensor(const PolarizedPotential& pot, std::span<const cplx> point) {
  return run_pipeline(pot, point).ricci;
}

double scalar_curvature(const PolarizedPotential& pot, std::span<const cplx> point) {
  return evaluate_oracle(pot, point).invariants.k;
}

double ricci_norm2(const PolarizedPotential& pot, std::span<const cplx> point) {
  return evaluate_oracle(pot, point).invariants.ric_norm2;
}

RiemannNorm riemann_norm2(const PolarizedPotential& pot, std::span<const cplx> point) {
  const auto m = metric_tensor(pot, point, kDefaultOrder);
  return riemann_contraction(m, riemann_tensor(m));
}

double laplacian_scalar(const PolarizedPotential& pot, std::span<const cplx> point) {
  return evaluate_oracle(pot, point).invariants.lap_k;
}

CurvatureInvariants curvature_invariants(const PolarizedPotential& pot, std::span<const cplx> point) {
  return evaluate_oracle(pot, point).invariants;
}

}  // namespace berg
