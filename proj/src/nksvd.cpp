#include "spectral/nksvd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "spectral/errors.hpp"
#include "spectral/metrics.hpp"
#include "spectral/numerics.hpp"

namespace spectral {

ParametricDictionary initialize(int n, int r, const SensingOperator& sensing) {
  if (r < 1) throw std::invalid_argument("initialize: r must be >= 1");
  std::vector<double> freqs(r);
  for (int k = 0; k < r; ++k) freqs[k] = k * two_pi / r;
  return ParametricDictionary::from_frequencies(std::move(freqs), sensing);
}

double objective(const CMatrix& y, const ParametricDictionary& dict, const SparseCode& code) {
  double sum = 0.0;
  for (int t = 0; t < static_cast<int>(y.cols()); ++t) {
    CVector r = y.col(t);
    const auto& s = code.supports[t];
    for (std::size_t i = 0; i < s.size(); ++i)
      r -= dict.atoms.col(s[i]) * code.coeffs[t](static_cast<int>(i));
    sum += r.squaredNorm();
  }
  return sum;
}

namespace {

// Restrict the residual matrix to the columns in `support`.
CMatrix restrict_columns(const CMatrix& e, const std::vector<int>& support) {
  CMatrix out(e.rows(), support.size());
  for (std::size_t i = 0; i < support.size(); ++i) out.col(i) = e.col(support[i]);
  return out;
}

void remap_after_pruning(ParametricDictionary& dict, SparseCode& code,
                         const std::vector<char>& keep) {
  std::vector<int> remap(keep.size(), -1);
  std::vector<double> freqs;
  int next = 0;
  for (std::size_t k = 0; k < keep.size(); ++k)
    if (keep[k]) {
      remap[k] = next++;
      freqs.push_back(dict.frequencies[k]);
    }
  CMatrix atoms(dict.atoms.rows(), next);
  for (std::size_t k = 0; k < keep.size(); ++k)
    if (remap[k] >= 0) atoms.col(remap[k]) = dict.atoms.col(k);
  dict.frequencies = std::move(freqs);
  dict.atoms = std::move(atoms);
  for (auto& s : code.supports)
    for (int& idx : s) idx = remap[idx];  // pruned atoms have empty supports
  code.n_atoms = next;
}

}  // namespace

EstimationResult run(const ObservationSet& obs, const RunParams& params) {
  if (!(params.eps > 0.0)) throw std::invalid_argument("run: eps must be positive");
  const SensingOperator& sensing = obs.sensing;
  const int n = sensing.n_full;
  const int m = sensing.rows();
  const int t = static_cast<int>(obs.y.cols());
  if (static_cast<int>(obs.y.rows()) != m)
    throw std::invalid_argument("run: observation rows do not match the sensing operator");

  const int grid_r = params.grid_r > 0 ? params.grid_r : n;
  ParametricDictionary dict = initialize(n, grid_r, sensing);

  RefineConfig refine_cfg;
  refine_cfg.lipschitz_floor = params.lipschitz_floor;
  const double merge_tol = two_pi / (4.0 * params.gamma * n);

  ConvergenceTrace trace;
  SparseCode code;
  StopReason reason = StopReason::max_iter;
  double f_prev = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < params.max_iter; ++iter) {
    const int max_support =
        std::min(params.max_support > 0 ? params.max_support : m, std::min(m, dict.size()));
    code = encode_all(obs.y, dict, params.eps, max_support);
    const double f = objective(obs.y, dict, code);
    trace.outer_objectives.push_back(f);
    if (iter > 0 && std::fabs(f_prev - f) < params.tol) {
      reason = StopReason::tol;
      break;
    }
    f_prev = f;

    // Atom update stage (Gauss-Seidel over atoms).
    std::vector<double> stage_objectives;
    std::vector<RefineRecord> records;
    std::vector<char> keep(dict.size(), 1);
    int pruned = 0;
    for (int k = 0; k < dict.size(); ++k) {
      std::vector<int> row = code.row_support(k);
      if (row.empty()) {
        keep[k] = 0;
        ++pruned;
        stage_objectives.push_back(objective(obs.y, dict, code));
        continue;
      }
      CMatrix e_full = residual_without_atom(obs.y, dict, code, k);
      CMatrix e_r = restrict_columns(e_full, row);
      if (e_r.norm() == 0.0) {
        // Atom explains nothing of a zero residual; retire it.
        code.drop_atom_from_supports(k);
        keep[k] = 0;
        ++pruned;
        stage_objectives.push_back(objective(obs.y, dict, code));
        continue;
      }

      CVector current_gains(row.size());
      for (std::size_t i = 0; i < row.size(); ++i)
        current_gains(static_cast<int>(i)) = code.coeff_at(row[i], k);

      // Candidate A: coarse re-estimation from the leading singular vector,
      // then refinement.
      LeadingVector sv =
          leading_left_singular_vector(e_r, params.sv_tol, params.sv_max_iter);
      AtomContext coarse_ctx;
      coarse_ctx.atom_index = k;
      coarse_ctx.theta = coarse_estimate(sv.u, sensing, params.gamma, n);
      coarse_ctx.support = row;
      coarse_ctx.restricted_residual = e_r;
      coarse_ctx.gains_row = gain_update(coarse_ctx.theta, e_r, sensing);
      RefineRecord rec_a;
      AtomContext cand_a = refine_atom(coarse_ctx, sensing, refine_cfg, &rec_a);

      // Candidate B: refine from the current frequency. Its safeguard keeps
      // the stage monotone even when the coarse jump regresses.
      AtomContext current_ctx = coarse_ctx;
      current_ctx.theta = dict.frequencies[k];
      current_ctx.gains_row = gain_update(current_ctx.theta, e_r, sensing);
      RefineRecord rec_b;
      AtomContext cand_b = refine_atom(current_ctx, sensing, refine_cfg, &rec_b);

      const double s_a = objective_S(cand_a.theta, cand_a.gains_row, e_r, sensing);
      const double s_b = objective_S(cand_b.theta, cand_b.gains_row, e_r, sensing);
      const double s_cur = objective_S(dict.frequencies[k], current_gains, e_r, sensing);
      const bool take_a = s_a < s_b && s_a <= s_cur;
      const AtomContext& winner = take_a ? cand_a : cand_b;
      records.push_back(take_a ? rec_a : rec_b);

      dict.frequencies[k] = winner.theta;
      dict.rebuild_atom(k);
      for (std::size_t i = 0; i < row.size(); ++i)
        code.set_coeff(row[i], k, winner.gains_row(static_cast<int>(i)));
      stage_objectives.push_back(objective(obs.y, dict, code));
    }

    // Duplicate handling: empty the row of the smaller-energy atom of any
    // near-coincident pair so it is pruned by the next coding pass.
    for (int a = 0; a < dict.size(); ++a) {
      if (!keep[a]) continue;
      for (int b = a + 1; b < dict.size(); ++b) {
        if (!keep[b]) continue;
        if (wrap_distance(dict.frequencies[a], dict.frequencies[b]) >= merge_tol) continue;
        double ea = 0.0, eb = 0.0;
        for (int tt = 0; tt < t; ++tt) {
          ea += std::norm(code.coeff_at(tt, a));
          eb += std::norm(code.coeff_at(tt, b));
        }
        code.drop_atom_from_supports(eb <= ea ? b : a);
      }
    }

    remap_after_pruning(dict, code, keep);
    trace.atom_stage_objectives.push_back(std::move(stage_objectives));
    trace.pruned_counts.push_back(pruned);
    trace.refine_records.push_back(std::move(records));
    if (dict.size() == 0)
      throw DegenerateResultError("run: every atom was pruned");
  }

  // Surviving atoms are those used by the final code.
  std::vector<int> survivors;
  for (int k = 0; k < dict.size(); ++k)
    if (!code.row_support(k).empty()) survivors.push_back(k);
  if (survivors.empty()) throw DegenerateResultError("run: no atom survived");

  EstimationResult result;
  result.k_hat = static_cast<int>(survivors.size());
  result.frequencies.reserve(survivors.size());
  result.gains.resize(survivors.size(), t);
  for (std::size_t i = 0; i < survivors.size(); ++i) {
    result.frequencies.push_back(dict.frequencies[survivors[i]]);
    for (int tt = 0; tt < t; ++tt)
      result.gains(static_cast<int>(i), tt) = code.coeff_at(tt, survivors[i]);
  }
  result.residual_fro = std::sqrt(objective(obs.y, dict, code));
  result.stop_reason = reason;
  result.trace = std::move(trace);
  return result;
}

}  // namespace spectral
