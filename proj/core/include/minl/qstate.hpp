#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>

#include "minl/config.hpp"
#include "minl/linalg.hpp"

namespace minl {

class PureState {
 public:
  /// Throws ValidationError unless ||amplitudes|| = 1 within tol.normalization.
  PureState(ComplexVector amplitudes, Dims dims, const Tolerances& tol = kDefaultTolerances);

  /// Rescales `amplitudes` to unit norm first.
  static PureState normalized(ComplexVector amplitudes, Dims dims);

  const ComplexVector& amplitudes() const noexcept { return amplitudes_; }
  const Dims& dims() const noexcept { return dims_; }

 private:
  ComplexVector amplitudes_;
  Dims dims_;
};

/// Positive semidefinite unit-trace matrix on a tensor product of subsystems.
class DensityMatrix {
 public:
  /// Validates finiteness, dimensions, Hermiticity, trace and positivity;
  /// stores the Hermitian part. Shape problems throw DimensionError, broken
  /// invariants throw ValidationError naming the invariant.
  DensityMatrix(ComplexMatrix mat, Dims dims, const Tolerances& tol = kDefaultTolerances);

  /// For matrices produced by trace-preserving maps of valid states: takes
  /// the Hermitian part and renormalizes the trace without validating.
  static DensityMatrix trusted(ComplexMatrix mat, Dims dims);

  static DensityMatrix from_pure(const PureState& psi);

  const ComplexMatrix& matrix() const noexcept { return mat_; }
  const Dims& dims() const noexcept { return dims_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(mat_.rows()); }
  std::size_t arity() const noexcept { return dims_.size(); }

  DensityMatrix reduced(std::span<const std::size_t> keep) const;
  DensityMatrix reduced(std::initializer_list<std::size_t> keep) const {
    return reduced(std::span<const std::size_t>(keep.begin(), keep.size()));
  }

  /// Eigenvalues ascending with roundoff negatives clipped to zero.
  RealVector spectrum() const;

 private:
  struct TrustedTag {};
  DensityMatrix(ComplexMatrix mat, Dims dims, TrustedTag);

  ComplexMatrix mat_;
  Dims dims_;
};

/// Correlation coefficients of the two-qubit state (I + sum_i c_i s_i (x) s_i) / 4.
struct BellDiagonalParams {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;

  /// The four eigenvalues in the order (1-c1-c2-c3)/4, (1-c1+c2+c3)/4,
  /// (1+c1-c2+c3)/4, (1+c1+c2-c3)/4.
  std::array<double, 4> spectrum() const;

  /// Throws ValidationError naming the offending eigenvalue when one is
  /// below -1e-12 or a coefficient leaves [-1, 1].
  void validate() const;

  static BellDiagonalParams werner(double p) { return {-p, -p, -p}; }
};

/// -sum p log2 p with 0 log 0 = 0 and negatives clipped.
double shannon_entropy(std::span<const double> probabilities);

/// Von Neumann entropy in bits.
double entropy(const DensityMatrix& rho);

/// S(rho || sigma) in bits; +infinity when supp(rho) is not inside supp(sigma).
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                        const Tolerances& tol = kDefaultTolerances);

/// S(AB) - S(B) for a bipartite state.
double conditional_entropy(const DensityMatrix& rho);

/// S(A) + S(B) - S(AB) for a bipartite state.
double mutual_information(const DensityMatrix& rho);

/// Pure state on the original factors plus one ancilla factor of dimension
/// rank(rho); tracing out the ancilla recovers rho.
PureState purify(const DensityMatrix& rho, const Tolerances& tol = kDefaultTolerances);

DensityMatrix bell_diagonal(const BellDiagonalParams& p);

DensityMatrix product_state(const DensityMatrix& a, const DensityMatrix& b);

/// (U (x) V) rho (U (x) V)^dagger for a bipartite state.
DensityMatrix local_unitary_conjugate(const DensityMatrix& rho, const ComplexMatrix& u,
                                      const ComplexMatrix& v);

/// Sum of |negative eigenvalues| of the partial transpose on the second factor.
double negativity(const DensityMatrix& rho);

/// Local filtering (I (x) M) rho (I (x) M) with M = rho_B^{-1/2} / sqrt(dB):
/// the result has marginal exactly I/dB on B. Requires full-rank rho_B.
DensityMatrix with_uniform_marginal(const DensityMatrix& rho);

/// Unit vector of independent standard complex Gaussians.
PureState random_pure(const Dims& dims, std::uint64_t seed);

/// G G^dagger / Tr(G G^dagger) with G a dim x rank complex Gaussian matrix.
DensityMatrix random_density(std::size_t dim, std::size_t rank, std::uint64_t seed);
DensityMatrix random_density(const Dims& dims, std::size_t rank, std::uint64_t seed);

/// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
ComplexMatrix random_unitary(std::size_t dim, std::uint64_t seed);

}  // namespace minl
