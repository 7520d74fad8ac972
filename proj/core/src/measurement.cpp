#include "minl/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "minl/errors.hpp"

namespace minl {

bool SpectralBlocks::is_kernel(std::size_t i) const {
  return std::abs(blocks.at(i).eigenvalue) <= cluster_tol;
}

bool SpectralBlocks::is_free(std::size_t i) const {
  return blocks.at(i).dimension() >= 2 && !is_kernel(i);
}

bool SpectralBlocks::has_freedom() const {
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (is_free(i)) return true;
  }
  return false;
}

SpectralBlocks SpectralBlocks::rotated(const ComplexMatrix& u) const {
  SpectralBlocks out = *this;
  for (auto& b : out.blocks) b.basis = u * b.basis;
  return out;
}

BlockParameters BlockParameters::identity(const SpectralBlocks& blocks) {
  return BlockParameters{std::vector<std::vector<double>>(blocks.blocks.size())};
}

InvariantMeasurement::InvariantMeasurement(ComplexMatrix basis, std::vector<std::size_t> block_of)
    : basis_(std::move(basis)), block_of_(std::move(block_of)) {
  if (basis_.rows() != basis_.cols() ||
      block_of_.size() != static_cast<std::size_t>(basis_.cols())) {
    throw DimensionError("measurement: basis must be square with one block label per column");
  }
  const auto n = basis_.cols();
  const double err = (basis_.adjoint() * basis_ - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (err > 1e-10) {
    throw ValidationError("measurement completeness violated: max |V^dagger V - I| = " +
                          std::to_string(err));
  }
}

InvariantMeasurement InvariantMeasurement::from_basis(const ComplexMatrix& basis,
                                                      const DensityMatrix& marginal,
                                                      const Tolerances& tol) {
  if (static_cast<std::size_t>(basis.rows()) != marginal.dim()) {
    throw DimensionError("measurement basis dimension does not match the marginal");
  }
  std::vector<std::size_t> labels(static_cast<std::size_t>(basis.cols()));
  for (std::size_t k = 0; k < labels.size(); ++k) labels[k] = k;
  InvariantMeasurement m(basis, std::move(labels));
  const double comm = m.commutator_norm(marginal.matrix());
  if (comm > tol.commutation) {
    throw ValidationError("invariance violated: ||[rho_B, Pi_k]|| = " + std::to_string(comm));
  }
  return m;
}

ComplexMatrix InvariantMeasurement::projector(std::size_t k) const {
  const ComplexVector v = vector(k);
  return v * v.adjoint();
}

double InvariantMeasurement::commutator_norm(const ComplexMatrix& marginal) const {
  double worst = 0.0;
  for (std::size_t k = 0; k < size(); ++k) {
    const ComplexMatrix p = projector(k);
    worst = std::max(worst, hs_norm(marginal * p - p * marginal));
  }
  return worst;
}

SpectralBlocks spectral_blocks(const DensityMatrix& marginal, double cluster_tol) {
  if (!(cluster_tol > 0.0)) {
    throw ValidationError("spectral_blocks: cluster tolerance must be positive");
  }
  const HermitianEigen eig = eigh(marginal.matrix());
  SpectralBlocks out;
  out.source_dim = marginal.dim();
  out.cluster_tol = cluster_tol;

  const Eigen::Index n = eig.values.size();
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i <= n; ++i) {
    if (i == n || eig.values(i) - eig.values(i - 1) > cluster_tol) {
      const Eigen::Index len = i - start;
      SpectralBlock block;
      block.eigenvalue = eig.values.segment(start, len).mean();
      block.basis = eig.vectors.middleCols(start, len);
      out.blocks.push_back(std::move(block));
      start = i;
    }
  }
  return out;
}

InvariantMeasurement realize_with_unitaries(const SpectralBlocks& blocks,
                                            std::span<const ComplexMatrix> unitaries) {
  if (unitaries.size() != blocks.blocks.size()) {
    throw DimensionError("realize: expected " + std::to_string(blocks.blocks.size()) +
                         " block rotations, got " + std::to_string(unitaries.size()));
  }
  const auto d = static_cast<Eigen::Index>(blocks.source_dim);
  ComplexMatrix basis(d, d);
  std::vector<std::size_t> labels;
  labels.reserve(blocks.source_dim);
  Eigen::Index col = 0;
  for (std::size_t b = 0; b < blocks.blocks.size(); ++b) {
    const SpectralBlock& block = blocks.blocks[b];
    const auto m = static_cast<Eigen::Index>(block.dimension());
    const ComplexMatrix& u = unitaries[b];
    if (u.size() == 0) {
      basis.middleCols(col, m) = block.basis;
    } else {
      if (u.rows() != m || u.cols() != m) {
        throw DimensionError("realize: block " + std::to_string(b) + " has dimension " +
                             std::to_string(m) + " but its rotation is " +
                             std::to_string(u.rows()) + "x" + std::to_string(u.cols()));
      }
      basis.middleCols(col, m) = block.basis * u;
    }
    for (Eigen::Index k = 0; k < m; ++k) labels.push_back(b);
    col += m;
  }
  if (col != d) {
    throw DimensionError("realize: block dimensions do not sum to the source dimension");
  }
  return InvariantMeasurement(std::move(basis), std::move(labels));
}

InvariantMeasurement realize(const SpectralBlocks& blocks, const BlockParameters& params) {
  if (params.generators.size() != blocks.blocks.size()) {
    throw DimensionError("realize: expected parameters for " +
                         std::to_string(blocks.blocks.size()) + " blocks, got " +
                         std::to_string(params.generators.size()));
  }
  std::vector<ComplexMatrix> unitaries(blocks.blocks.size());
  for (std::size_t b = 0; b < blocks.blocks.size(); ++b) {
    const auto& g = params.generators[b];
    if (g.empty()) continue;
    const std::size_t m = blocks.blocks[b].dimension();
    if (g.size() != m * m) {
      throw DimensionError("realize: block " + std::to_string(b) + " needs " +
                           std::to_string(m * m) + " generator coordinates, got " +
                           std::to_string(g.size()));
    }
    unitaries[b] = exp_i_hermitian(hermitian_from_coordinates(g, m));
  }
  return realize_with_unitaries(blocks, unitaries);
}

DensityMatrix pinch(const DensityMatrix& rho, const InvariantMeasurement& m, std::size_t measured) {
  if (measured >= rho.arity() || rho.dims()[measured] != m.dimension()) {
    throw DimensionError("pinch: measurement dimension " + std::to_string(m.dimension()) +
                         " does not match the measured subsystem");
  }
  ComplexMatrix out = ComplexMatrix::Zero(rho.matrix().rows(), rho.matrix().cols());
  for (std::size_t k = 0; k < m.size(); ++k) {
    // (I (x) |v><v| (x) I) rho (...) = W W^dagger rho W W^dagger.
    const ComplexMatrix w = slot_isometry(m.vector(k), rho.dims(), measured);
    out += w * (w.adjoint() * rho.matrix() * w) * w.adjoint();
  }
  return DensityMatrix::trusted(std::move(out), rho.dims());
}

DensityMatrix pinch(const DensityMatrix& rho, const InvariantMeasurement& m) {
  if (rho.arity() != 2) {
    throw DimensionError("pinch: expected 2 subsystems, got " + std::to_string(rho.arity()));
  }
  return pinch(rho, m, 1);
}

double Ensemble::average_entropy() const {
  double total = 0.0;
  for (std::size_t k = 0; k < size(); ++k) {
    if (!negligible[k]) total += probabilities[k] * entropy(states[k]);
  }
  return total;
}

Ensemble conditional_ensemble(const DensityMatrix& rho, const InvariantMeasurement& m,
                              std::size_t measured, std::span<const std::size_t> keep,
                              const Tolerances& tol) {
  if (measured >= rho.arity() || rho.dims()[measured] != m.dimension()) {
    throw DimensionError("ensemble: measurement dimension " + std::to_string(m.dimension()) +
                         " does not match the measured subsystem");
  }
  // Subsystem indices after removing `measured`.
  Dims rest_dims;
  for (std::size_t s = 0; s < rho.arity(); ++s) {
    if (s != measured) rest_dims.push_back(rho.dims()[s]);
  }
  std::vector<std::size_t> rest_keep;
  for (std::size_t k : keep) {
    if (k == measured || k >= rho.arity()) {
      throw DimensionError("ensemble: keep set must exclude the measured subsystem");
    }
    rest_keep.push_back(k < measured ? k : k - 1);
  }
  std::sort(rest_keep.begin(), rest_keep.end());
  Dims kept_dims;
  for (std::size_t k : rest_keep) kept_dims.push_back(rest_dims[k]);
  const bool keep_all = rest_keep.size() == rest_dims.size();

  Ensemble out;
  for (std::size_t k = 0; k < m.size(); ++k) {
    const ComplexMatrix w = slot_isometry(m.vector(k), rho.dims(), measured);
    ComplexMatrix unnormalized = w.adjoint() * rho.matrix() * w;
    if (!keep_all) unnormalized = partial_trace(unnormalized, rest_dims, rest_keep);
    const double p = std::max(0.0, unnormalized.trace().real());
    out.probabilities.push_back(p);
    if (p <= tol.negligible_probability) {
      out.negligible.push_back(true);
      const auto n = unnormalized.rows();
      out.states.push_back(DensityMatrix::trusted(ComplexMatrix::Identity(n, n), kept_dims));
    } else {
      out.negligible.push_back(false);
      out.states.push_back(DensityMatrix::trusted(unnormalized / p, kept_dims));
    }
  }
  return out;
}

Ensemble ensemble(const DensityMatrix& rho, const InvariantMeasurement& m, const Tolerances& tol) {
  if (rho.arity() != 2) {
    throw DimensionError("ensemble: expected 2 subsystems, got " + std::to_string(rho.arity()));
  }
  const std::size_t keep[] = {0};
  return conditional_ensemble(rho, m, 1, keep, tol);
}

}  // namespace minl
