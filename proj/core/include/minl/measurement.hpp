#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "minl/config.hpp"
#include "minl/linalg.hpp"
#include "minl/qstate.hpp"

namespace minl {

struct SpectralBlock {
  double eigenvalue = 0.0;
  /// Orthonormal columns spanning the eigenspace.
  ComplexMatrix basis;

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(basis.cols()); }
};

/// Eigenspaces of a measured marginal after clustering nearly equal eigenvalues.
struct SpectralBlocks {
  std::vector<SpectralBlock> blocks;
  std::size_t source_dim = 0;
  double cluster_tol = kDefaultTolerances.cluster;

  /// Block of (numerically) zero eigenvalue. Its basis never affects the
  /// post-measurement state, so the optimizer gives it no parameters.
  bool is_kernel(std::size_t i) const;

  /// Degenerate non-kernel block: the only place basis freedom matters.
  bool is_free(std::size_t i) const;

  bool has_freedom() const;

  /// Same eigenvalues with every basis replaced by u * basis.
  SpectralBlocks rotated(const ComplexMatrix& u) const;
};

/// Per-block basis rotation exp(i H), H Hermitian from m^2 real
/// coordinates (see hermitian_from_coordinates). An empty generator means
/// the identity rotation.
struct BlockParameters {
  std::vector<std::vector<double>> generators;

  static BlockParameters identity(const SpectralBlocks& blocks);
};

/// Rank-1 projective measurement {|v_k><v_k|} on the measured subsystem.
class InvariantMeasurement {
 public:
  InvariantMeasurement() = default;

  /// Columns of `basis` are the measurement vectors; `block_of[k]` names the
  /// spectral block vector k came from. Throws ValidationError unless the
  /// columns are orthonormal within 1e-10.
  InvariantMeasurement(ComplexMatrix basis, std::vector<std::size_t> block_of);

  /// Measurement in an arbitrary orthonormal basis. Throws ValidationError
  /// unless every projector commutes with `marginal` within tol.commutation.
  static InvariantMeasurement from_basis(const ComplexMatrix& basis, const DensityMatrix& marginal,
                                         const Tolerances& tol = kDefaultTolerances);

  std::size_t size() const noexcept { return static_cast<std::size_t>(basis_.cols()); }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(basis_.rows()); }
  const ComplexMatrix& basis() const noexcept { return basis_; }
  ComplexVector vector(std::size_t k) const { return basis_.col(static_cast<Eigen::Index>(k)); }
  ComplexMatrix projector(std::size_t k) const;
  std::size_t block_of(std::size_t k) const { return block_of_.at(k); }

  /// max_k ||[marginal, Pi_k]||.
  double commutator_norm(const ComplexMatrix& marginal) const;

 private:
  ComplexMatrix basis_;
  std::vector<std::size_t> block_of_;
};

SpectralBlocks spectral_blocks(const DensityMatrix& marginal,
                               double cluster_tol = kDefaultTolerances.cluster);

InvariantMeasurement realize(const SpectralBlocks& blocks, const BlockParameters& params);

/// Same as realize() with explicit per-block unitaries (identity for an
/// empty matrix).
InvariantMeasurement realize_with_unitaries(const SpectralBlocks& blocks,
                                            std::span<const ComplexMatrix> unitaries);

/// sum_k (I (x) Pi_k (x) I) rho (I (x) Pi_k (x) I) with the measurement on
/// subsystem `measured`.
DensityMatrix pinch(const DensityMatrix& rho, const InvariantMeasurement& m, std::size_t measured);

/// Bipartite pinch, measuring the second factor.
DensityMatrix pinch(const DensityMatrix& rho, const InvariantMeasurement& m);

/// Outcome probabilities with the normalized conditional states. Outcomes
/// with p_k <= tol.negligible_probability are flagged and carry a maximally
/// mixed placeholder state.
struct Ensemble {
  std::vector<double> probabilities;
  std::vector<DensityMatrix> states;
  std::vector<bool> negligible;

  std::size_t size() const noexcept { return probabilities.size(); }
  /// sum_k p_k S(rho_k) over non-negligible outcomes.
  double average_entropy() const;
};

/// Conditional states on the subsystems `keep` after measuring `measured`.
Ensemble conditional_ensemble(const DensityMatrix& rho, const InvariantMeasurement& m,
                              std::size_t measured, std::span<const std::size_t> keep,
                              const Tolerances& tol = kDefaultTolerances);

/// Bipartite ensemble {p_k, rho^A_k} from measuring the second factor.
Ensemble ensemble(const DensityMatrix& rho, const InvariantMeasurement& m,
                  const Tolerances& tol = kDefaultTolerances);

}  // namespace minl
