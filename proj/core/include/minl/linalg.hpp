#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "minl/config.hpp"

namespace minl {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Subsystem dimensions, leftmost factor slowest-varying (A in A (x) B).
using Dims = std::vector<std::size_t>;

/// Eigenpairs of a Hermitian matrix: eigenvalues ascending, eigenvectors as
/// orthonormal columns in matching order.
struct HermitianEigen {
  RealVector values;
  ComplexMatrix vectors;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Reduced matrix on the subsystems listed in `keep` (ascending order is
/// not required; the output factor order follows increasing index).
ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep);

/// Partial transpose on subsystem `index`.
ComplexMatrix partial_transpose(const ComplexMatrix& m, std::span<const std::size_t> dims,
                                std::size_t index);

/// Largest entrywise |h - h^dagger|.
double max_asymmetry(const ComplexMatrix& h);

ComplexMatrix hermitian_part(const ComplexMatrix& h);

/// Symmetrizes, then diagonalizes. Throws ValidationError when the input is
/// further than `hermiticity_tol` from Hermitian.
HermitianEigen eigh(const ComplexMatrix& h, double hermiticity_tol = kDefaultTolerances.hermiticity);

double hs_norm(const ComplexMatrix& m);

std::size_t product(std::span<const std::size_t> dims);

/// I (x) op (x) I with `op` acting on subsystem `index`.
ComplexMatrix embed(const ComplexMatrix& op, std::span<const std::size_t> dims, std::size_t index);

/// The isometry I (x) |v> (x) I that maps the remaining factors into the
/// full space with subsystem `index` fixed to `v`.
ComplexMatrix slot_isometry(const ComplexVector& v, std::span<const std::size_t> dims,
                            std::size_t index);

/// Hermitian m x m matrix from m^2 real coordinates: m diagonal entries,
/// then (re, im) pairs of the strict upper triangle in row order.
ComplexMatrix hermitian_from_coordinates(std::span<const double> coords, std::size_t m);

/// exp(i H) for Hermitian H, via its eigendecomposition.
ComplexMatrix exp_i_hermitian(const ComplexMatrix& h);

/// Pauli matrix sigma_i, i in {1, 2, 3}; i = 0 gives the 2x2 identity.
ComplexMatrix pauli(int i);

}  // namespace minl
