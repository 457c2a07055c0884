#pragma once

#include <vector>

#include "spectral/dictionary.hpp"

namespace spectral {

// Column-sparse coefficients: per-snapshot support sets and aligned values.
struct SparseCode {
  int n_atoms = 0;
  std::vector<std::vector<int>> supports;  // one list per snapshot
  std::vector<CVector> coeffs;             // coeffs[t](i) pairs with supports[t][i]

  int snapshots() const { return static_cast<int>(supports.size()); }

  // Snapshots whose support contains atom k, in ascending order.
  std::vector<int> row_support(int k) const;

  // Coefficient of atom k in snapshot t, zero when absent.
  Complex coeff_at(int t, int k) const;

  void set_coeff(int t, int k, Complex value);
  void drop_atom_from_supports(int k);  // removes entries, keeps indexing
};

struct OmpResult {
  std::vector<int> support;
  CVector coeffs;
  double residual_norm = 0.0;
  bool ill_conditioned = false;
};

// Greedy OMP with least-squares refits; stops when the residual norm falls
// to eps or the support reaches max_support.
OmpResult omp_encode(const CVector& y_col, const ParametricDictionary& dict, double eps,
                     int max_support);

SparseCode encode_all(const CMatrix& y, const ParametricDictionary& dict, double eps,
                      int max_support);

}  // namespace spectral
