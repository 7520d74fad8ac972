#pragma once

#include "minl/measurement.hpp"
#include "minl/nonlocality.hpp"
#include "minl/qstate.hpp"

namespace minl {

/// A measurement on B realized as a unitary coupling to an apparatus M
/// prepared in |0>, with dim M = dim B.
struct DilationResult {
  /// (I_A (x) U_BM)(rho (x) |0><0|)(I_A (x) U_BM)^dagger on A (x) B (x) M.
  DensityMatrix joint_state;
  ComplexMatrix unitary_bm;
};

/// U_BM maps |b>|0> to sum_k (Pi_k |b>)|k>; the remaining columns are a
/// Gram-Schmidt completion of the standard basis.
DilationResult dilate(const DensityMatrix& rho, const InvariantMeasurement& m);

struct CoherentInfoIdentity {
  /// S(rho~_AB) - S(rho~_ABM)
  double lhs = 0.0;
  /// S(rho_AB || rho~_AB)
  double rhs = 0.0;
};

CoherentInfoIdentity coherent_info_identity(const DensityMatrix& rho, const InvariantMeasurement& m);

/// chi({p_k, rho^A_k}) = S(rho_A) - sum_k p_k S(rho^A_k).
double side_information(const DensityMatrix& rho, const InvariantMeasurement& m);

struct SideInformation {
  double chi = 0.0;
  InvariantMeasurement minimizing_measurement;
  /// The N_RE search that produced the minimizer.
  OptimizationReport search;
};

/// Minimal side information over invariant measurements. The maximizer of
/// sum_k p_k S(rho^A_k) found by n_re() is the minimizer here.
SideInformation min_side_information(const DensityMatrix& rho, const OptimizerConfig& cfg = {});

/// S(rho_B) - chi({p_k, rho^A_k}).
double missing_information(const DensityMatrix& rho, const InvariantMeasurement& m);

struct TripartiteTradeoff {
  double n_re_ab = 0.0;
  /// chi({p_k, rho^C_k}) at the N_RE-optimal measurement on B.
  double min_chi_cb = 0.0;
  double s_b = 0.0;
  InvariantMeasurement measurement;
};

/// For a pure state on A (x) B (x) C: N_RE(rho_AB) and the side information of
/// C about the same measurement on B. They sum to S(rho_B).
TripartiteTradeoff tripartite_tradeoff(const PureState& psi, const OptimizerConfig& cfg = {});

struct MixedTradeoffWitness {
  /// chi({p_k, rho^C_k})
  double chi_c = 0.0;
  /// chi({p_k, rho^CD_k}) with D purifying rho_ABC
  double chi_cd = 0.0;
  /// S(rho_AB || pinch(rho_AB, m))
  double relative_entropy_ab = 0.0;
  double s_b = 0.0;
};

/// Per-measurement quantities behind N_RE(AB) + S_chi(CB) <= S(B) for a
/// mixed state on A (x) B (x) C, measuring B.
MixedTradeoffWitness tripartite_mixed_inequality(const DensityMatrix& rho,
                                                 const InvariantMeasurement& m);

}  // namespace minl
