#include "spectral/sparse_coding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace spectral {

ParametricDictionary ParametricDictionary::from_frequencies(std::vector<double> freqs,
                                                            const SensingOperator& sensing) {
  ParametricDictionary dict;
  dict.sensing = sensing;
  dict.frequencies = std::move(freqs);
  dict.atoms.resize(sensing.rows(), dict.frequencies.size());
  for (int j = 0; j < dict.size(); ++j) dict.rebuild_atom(j);
  return dict;
}

std::vector<int> SparseCode::row_support(int k) const {
  std::vector<int> rows;
  for (int t = 0; t < snapshots(); ++t)
    if (std::find(supports[t].begin(), supports[t].end(), k) != supports[t].end())
      rows.push_back(t);
  return rows;
}

Complex SparseCode::coeff_at(int t, int k) const {
  const auto& s = supports[t];
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] == k) return coeffs[t](i);
  return Complex(0.0, 0.0);
}

void SparseCode::set_coeff(int t, int k, Complex value) {
  auto& s = supports[t];
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] == k) {
      coeffs[t](static_cast<int>(i)) = value;
      return;
    }
  throw std::logic_error("SparseCode::set_coeff: atom not in support");
}

void SparseCode::drop_atom_from_supports(int k) {
  for (int t = 0; t < snapshots(); ++t) {
    auto& s = supports[t];
    auto it = std::find(s.begin(), s.end(), k);
    if (it == s.end()) continue;
    const int pos = static_cast<int>(it - s.begin());
    s.erase(it);
    CVector c(s.size());
    for (int i = 0, j = 0; i < static_cast<int>(c.size()) + 1; ++i)
      if (i != pos) c(j++) = coeffs[t](i);
    coeffs[t] = std::move(c);
  }
}

namespace {

// Least squares of y on the selected atoms via the Gram normal equations.
// Returns false when the selected system is too ill-conditioned to trust.
bool ls_fit(const CMatrix& atoms, const std::vector<int>& support, const CVector& y,
            CVector& coeffs) {
  const int s = static_cast<int>(support.size());
  CMatrix sel(atoms.rows(), s);
  for (int i = 0; i < s; ++i) sel.col(i) = atoms.col(support[i]);
  CMatrix gram = sel.adjoint() * sel;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(gram);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || std::sqrt(hi / lo) > 1e12) return false;
  coeffs = Eigen::LLT<CMatrix>(gram).solve(sel.adjoint() * y);
  return true;
}

}  // namespace

OmpResult omp_encode(const CVector& y_col, const ParametricDictionary& dict, double eps,
                     int max_support) {
  if (dict.size() < 1) throw std::invalid_argument("omp_encode: empty dictionary");
  if (!(eps > 0.0)) throw std::invalid_argument("omp_encode: eps must be positive");
  const int m = static_cast<int>(y_col.size());
  if (max_support < 1 || max_support > std::min(m, dict.size()))
    throw std::invalid_argument("omp_encode: max_support out of range");
  if (static_cast<int>(dict.atoms.rows()) != m)
    throw std::invalid_argument("omp_encode: dimension mismatch");

  Eigen::VectorXd atom_norms(dict.size());
  for (int j = 0; j < dict.size(); ++j) {
    atom_norms(j) = dict.atoms.col(j).norm();
    if (atom_norms(j) == 0.0)
      throw std::invalid_argument("omp_encode: dictionary contains a zero-norm atom");
  }

  OmpResult out;
  CVector residual = y_col;
  out.residual_norm = residual.norm();
  const double y_norm = out.residual_norm;
  if (y_norm == 0.0) {
    out.coeffs.resize(0);
    out.residual_norm = 0.0;
    return out;
  }

  std::vector<char> used(dict.size(), 0);
  while (static_cast<int>(out.support.size()) < max_support && out.residual_norm > eps) {
    // Select by normalized correlation; ties keep the smallest index.
    int best = -1;
    double best_corr = 0.0;
    for (int j = 0; j < dict.size(); ++j) {
      if (used[j]) continue;
      double corr = std::abs(dict.atoms.col(j).dot(residual)) / atom_norms(j);
      if (corr > best_corr) {
        best_corr = corr;
        best = j;
      }
    }
    if (best < 0 || best_corr <= 1e-14 * y_norm) break;  // residual orthogonal to dictionary

    out.support.push_back(best);
    used[best] = 1;
    CVector coeffs;
    if (!ls_fit(dict.atoms, out.support, y_col, coeffs)) {
      out.support.pop_back();
      used[best] = 0;
      out.ill_conditioned = true;
      break;
    }
    out.coeffs = std::move(coeffs);
    residual = y_col;
    for (std::size_t i = 0; i < out.support.size(); ++i)
      residual -= dict.atoms.col(out.support[i]) * out.coeffs(static_cast<int>(i));
    out.residual_norm = residual.norm();
  }
  return out;
}

SparseCode encode_all(const CMatrix& y, const ParametricDictionary& dict, double eps,
                      int max_support) {
  SparseCode code;
  code.n_atoms = dict.size();
  const int t = static_cast<int>(y.cols());
  code.supports.resize(t);
  code.coeffs.resize(t);
  for (int i = 0; i < t; ++i) {
    OmpResult r = omp_encode(y.col(i), dict, eps, max_support);
    code.supports[i] = std::move(r.support);
    code.coeffs[i] = std::move(r.coeffs);
  }
  return code;
}

}  // namespace spectral
