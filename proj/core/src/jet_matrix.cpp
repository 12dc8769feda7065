#include "berg/jet_matrix.hpp"

#include <cmath>
#include <utility>

#include "berg/errors.hpp"

namespace berg {

JetMatrix::JetMatrix(int n, const std::shared_ptr<const JetSpace>& space)
    : n_(n), data_(static_cast<std::size_t>(n * n), Jet(space)) {
  if (n < 1) throw ShapeMismatch("jet matrix must be at least 1x1");
}

JetMatrix JetMatrix::truncated(int new_order) const {
  JetMatrix out(n_, JetSpace::get(num_vars(), new_order));
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i].truncated(new_order);
  return out;
}

std::vector<cplx> JetMatrix::constants() const {
  std::vector<cplx> out;
  out.reserve(data_.size());
  for (const auto& j : data_) out.push_back(j.constant_term());
  return out;
}

JetLU jet_lu(const JetMatrix& a) {
  const int n = a.size();
  JetLU f{a, {}, 1};
  f.perm.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) f.perm[static_cast<std::size_t>(i)] = i;

  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j).constant_term()));
  if (scale == 0.0) throw SingularMatrix("matrix constant part is zero");

  auto& m = f.lu;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(m(k, k).constant_term());
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(m(i, k).constant_term());
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best <= 1e-14 * scale) throw SingularMatrix("zero pivot in jet LU at column " + std::to_string(k));
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
      std::swap(f.perm[static_cast<std::size_t>(k)], f.perm[static_cast<std::size_t>(piv)]);
      f.sign = -f.sign;
    }
    const Jet inv_pivot = reciprocal(m(k, k));
    for (int i = k + 1; i < n; ++i) {
      m(i, k) = m(i, k) * inv_pivot;
      for (int j = k + 1; j < n; ++j) m(i, j) -= m(i, k) * m(k, j);
    }
  }
  return f;
}

Jet JetLU::determinant() const {
  Jet det = lu(0, 0);
  for (int i = 1; i < lu.size(); ++i) det = det * lu(i, i);
  if (sign < 0) det = -det;
  return det;
}

std::vector<Jet> JetLU::solve(const std::vector<Jet>& b) const {
  const int n = lu.size();
  if (static_cast<int>(b.size()) != n) throw ShapeMismatch("right-hand side length mismatch");
  std::vector<Jet> x;
  x.reserve(b.size());
  for (int i = 0; i < n; ++i) x.push_back(b[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) x[static_cast<std::size_t>(i)] -= lu(i, j) * x[static_cast<std::size_t>(j)];
  for (int i = n - 1; i >= 0; --i) {
    auto& xi = x[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) xi -= lu(i, j) * x[static_cast<std::size_t>(j)];
    xi = xi / lu(i, i);
  }
  return x;
}

Jet jet_det(const JetMatrix& a) { return jet_lu(a).determinant(); }

JetMatrix jet_inverse(const JetMatrix& a) {
  const int n = a.size();
  const auto f = jet_lu(a);
  const auto space = a(0, 0).space_ptr();
  JetMatrix inv(n, space);
  for (int j = 0; j < n; ++j) {
    std::vector<Jet> e(static_cast<std::size_t>(n), Jet(space));
    e[static_cast<std::size_t>(j)] += 1.0;
    const auto col = f.solve(e);
    for (int i = 0; i < n; ++i) inv(i, j) = col[static_cast<std::size_t>(i)];
  }
  return inv;
}

}  // namespace berg
