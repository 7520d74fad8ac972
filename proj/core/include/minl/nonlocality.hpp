#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "minl/measurement.hpp"
#include "minl/qstate.hpp"

namespace minl {

/// Knobs for the multi-start ascent over the invariant-measurement family.
struct OptimizerConfig {
  std::size_t restarts = 16;
  std::size_t max_iters = 200;
  double step_init = 0.1;
  double grad_eps = 1e-5;
  double conv_tol = 1e-9;
  std::uint64_t seed = 0;
  double cluster_tol = kDefaultTolerances.cluster;

  /// Throws ValidationError unless every field is positive and
  /// conv_tol < step_init.
  void validate() const;
};

struct OptimizationReport {
  /// N_RE in bits, or N_G in Hilbert-Schmidt units.
  double value = 0.0;
  InvariantMeasurement measurement;
  /// Best value reached by each restart, in the same units as `value`.
  std::vector<double> objective_trace;
  /// False when the best restart stopped on max_iters.
  bool converged = true;
  /// True when the measurement is unique up to irrelevant freedom (all
  /// blocks one-dimensional or kernel, or a pure input for N_RE); no search ran.
  bool exhaustive = false;
  /// True when a searched block has dimension >= 3: the ascent only
  /// certifies a lower bound there.
  bool lower_bound_only = false;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
};

/// Receives every measurement the ascent visits (restart starting points,
/// line-search trials and extra candidates); finite-difference probes are
/// not reported.
using CandidateObserver = std::function<void(const InvariantMeasurement&)>;

/// sum_k p_k S(rho^A_k) over outcomes with non-negligible probability.
double avg_conditional_entropy(const DensityMatrix& rho, const InvariantMeasurement& m);

/// Relative entropy of nonlocality, S(rho_B) - S(rho_AB) + max sum_k p_k S(rho^A_k).
/// `extra_candidates` join the search pool (evaluated, never ascended from).
OptimizationReport n_re(const DensityMatrix& rho, const OptimizerConfig& cfg = {},
                        std::span<const InvariantMeasurement> extra_candidates = {},
                        const CandidateObserver& observer = {});

/// Geometric nonlocality, max ||rho - pinch(rho, m)||_HS, same search as n_re.
OptimizationReport n_geo(const DensityMatrix& rho, const OptimizerConfig& cfg = {},
                         std::span<const InvariantMeasurement> extra_candidates = {},
                         const CandidateObserver& observer = {});

/// Same searches with the block frame of rho_B supplied by the caller, e.g.
/// spectral_blocks(sigma_B).rotated(V) to mirror a run on a state conjugated
/// by I (x) V. Throws ValidationError if a block vector is not an eigenvector
/// of rho_B with the block eigenvalue (within the commutation tolerance).
OptimizationReport n_re(const DensityMatrix& rho, const SpectralBlocks& frame,
                        const OptimizerConfig& cfg = {},
                        std::span<const InvariantMeasurement> extra_candidates = {},
                        const CandidateObserver& observer = {});
OptimizationReport n_geo(const DensityMatrix& rho, const SpectralBlocks& frame,
                         const OptimizerConfig& cfg = {},
                         std::span<const InvariantMeasurement> extra_candidates = {},
                         const CandidateObserver& observer = {});

/// N_RE of a bipartite pure state: the entropy of its Schmidt weights.
double n_re_pure(const PureState& psi);

/// Binary entropy of (1 +- x)/2, in bits.
double bloch_entropy(double x);

/// Conditional entropy S(A|B) of a Bell-diagonal state: Shannon entropy of
/// its four eigenvalues minus one.
double bell_conditional_entropy(const BellDiagonalParams& p);

/// Closed form f(c_min) - f(c1, c2, c3) for Bell-diagonal states.
double n_re_bell_diagonal(const BellDiagonalParams& p);

enum class GridObjective { AvgConditionalEntropy, HsDistance };

/// Brute-force maximum of the objective over Bloch directions of a qubit
/// measurement on B, on a resolution x resolution (theta, phi) grid.
/// Requires dB = 2 and rho_B within cluster_tol of I/2.
double qubit_grid_oracle(const DensityMatrix& rho, GridObjective objective,
                         std::size_t resolution = 400,
                         double cluster_tol = kDefaultTolerances.cluster);

}  // namespace minl
