#pragma once

// Small dense square matrices whose entries are jets. Used for determinants
// and inverses of the metric tensor while keeping higher derivatives.

#include <vector>

#include "berg/jet.hpp"

namespace berg {

class JetMatrix {
 public:
  // n x n zero matrix of jets in the given space.
  JetMatrix(int n, const std::shared_ptr<const JetSpace>& space);

  int size() const { return n_; }
  int num_vars() const { return data_.front().num_vars(); }
  int order() const { return data_.front().order(); }

  Jet& operator()(int i, int j) { return data_[static_cast<std::size_t>(i * n_ + j)]; }
  const Jet& operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i * n_ + j)];
  }

  JetMatrix truncated(int new_order) const;
  // Constant terms as a row-major array.
  std::vector<cplx> constants() const;

 private:
  int n_;
  std::vector<Jet> data_;
};

// LU factorization with partial pivoting chosen on constant terms.
struct JetLU {
  JetMatrix lu;            // unit lower factor below the diagonal, U on and above
  std::vector<int> perm;   // row i of LU is row perm[i] of the input
  int sign = 1;

  Jet determinant() const;
  // Solves A x = b for one column.
  std::vector<Jet> solve(const std::vector<Jet>& b) const;
};

// Throws SingularMatrix when a pivot's constant term is zero relative to the
// largest entry.
JetLU jet_lu(const JetMatrix& a);
Jet jet_det(const JetMatrix& a);
JetMatrix jet_inverse(const JetMatrix& a);

}  // namespace berg
