#include "minl/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "minl/errors.hpp"

namespace minl {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

ComplexMatrix gaussian_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im) / std::sqrt(2.0);
    }
  }
  return g;
}

}  // namespace

PureState::PureState(ComplexVector amplitudes, Dims dims, const Tolerances& tol)
    : amplitudes_(std::move(amplitudes)), dims_(std::move(dims)) {
  if (dims_.empty() || product(dims_) != static_cast<std::size_t>(amplitudes_.size())) {
    throw DimensionError("pure state: subsystem dimensions multiply to " +
                         std::to_string(product(dims_)) + " but vector has " +
                         std::to_string(amplitudes_.size()) + " amplitudes");
  }
  if (!amplitudes_.allFinite()) {
    throw ValidationError("normalization invariant violated: non-finite amplitude");
  }
  const double dev = std::abs(amplitudes_.norm() - 1.0);
  if (dev > tol.normalization) {
    throw ValidationError("normalization invariant violated: | ||psi|| - 1 | = " + fmt(dev));
  }
}

PureState PureState::normalized(ComplexVector amplitudes, Dims dims) {
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw ValidationError("normalization invariant violated: zero or non-finite vector");
  }
  amplitudes /= n;
  return PureState(std::move(amplitudes), std::move(dims));
}

DensityMatrix::DensityMatrix(ComplexMatrix mat, Dims dims, const Tolerances& tol)
    : dims_(std::move(dims)) {
  if (mat.rows() != mat.cols()) {
    throw DimensionError("density matrix is " + std::to_string(mat.rows()) + "x" +
                         std::to_string(mat.cols()) + ", expected square");
  }
  if (dims_.empty() || product(dims_) != static_cast<std::size_t>(mat.rows())) {
    throw DimensionError("dims invariant violated: product(dims) = " +
                         std::to_string(product(dims_)) + " but matrix dimension is " +
                         std::to_string(mat.rows()));
  }
  if (!mat.allFinite()) {
    throw ValidationError("finiteness invariant violated: matrix has NaN or Inf entries");
  }
  const double asym = max_asymmetry(mat);
  if (asym > tol.hermiticity) {
    throw ValidationError("hermiticity invariant violated: max |rho - rho^dagger| = " + fmt(asym));
  }
  mat_ = hermitian_part(mat);
  const double tr_dev = std::abs(mat_.trace().real() - 1.0);
  if (tr_dev > tol.trace) {
    throw ValidationError("trace invariant violated: |Tr(rho) - 1| = " + fmt(tr_dev) +
                          " (trace " + fmt(mat_.trace().real()) + ")");
  }
  const double min_eig = eigh(mat_).values(0);
  if (min_eig < -tol.positivity) {
    throw ValidationError("positivity invariant violated: smallest eigenvalue = " + fmt(min_eig));
  }
}

DensityMatrix::DensityMatrix(ComplexMatrix mat, Dims dims, TrustedTag)
    : mat_(std::move(mat)), dims_(std::move(dims)) {}

DensityMatrix DensityMatrix::trusted(ComplexMatrix mat, Dims dims) {
  if (mat.rows() != mat.cols() || product(dims) != static_cast<std::size_t>(mat.rows())) {
    throw DimensionError("trusted density matrix: shape does not match dims");
  }
  ComplexMatrix h = hermitian_part(mat);
  const double tr = h.trace().real();
  if (tr > 0.0) h /= tr;
  return DensityMatrix(std::move(h), std::move(dims), TrustedTag{});
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  const ComplexVector& v = psi.amplitudes();
  return trusted(v * v.adjoint(), psi.dims());
}

DensityMatrix DensityMatrix::reduced(std::span<const std::size_t> keep) const {
  Dims kept_dims;
  std::vector<std::size_t> sorted(keep.begin(), keep.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k : sorted) {
    if (k >= dims_.size()) throw DimensionError("reduced: subsystem index out of range");
    kept_dims.push_back(dims_[k]);
  }
  return trusted(partial_trace(mat_, dims_, sorted), std::move(kept_dims));
}

RealVector DensityMatrix::spectrum() const {
  RealVector values = eigh(mat_).values;
  return values.cwiseMax(0.0);
}

std::array<double, 4> BellDiagonalParams::spectrum() const {
  return {(1.0 - c1 - c2 - c3) / 4.0, (1.0 - c1 + c2 + c3) / 4.0, (1.0 + c1 - c2 + c3) / 4.0,
          (1.0 + c1 + c2 - c3) / 4.0};
}

void BellDiagonalParams::validate() const {
  for (double c : {c1, c2, c3}) {
    if (!std::isfinite(c) || c < -1.0 - 1e-12 || c > 1.0 + 1e-12) {
      throw ValidationError("positivity invariant violated: correlation coefficient " + fmt(c) +
                            " outside [-1, 1]");
    }
  }
  static constexpr const char* kLabels[4] = {"(1-c1-c2-c3)/4", "(1-c1+c2+c3)/4", "(1+c1-c2+c3)/4",
                                             "(1+c1+c2-c3)/4"};
  const auto eig = spectrum();
  for (std::size_t i = 0; i < eig.size(); ++i) {
    if (eig[i] < -1e-12) {
      throw ValidationError(std::string("positivity invariant violated: eigenvalue ") +
                            kLabels[i] + " = " + fmt(eig[i]));
    }
  }
}

double shannon_entropy(std::span<const double> probabilities) {
  double h = 0.0;
  for (double p : probabilities) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

double entropy(const DensityMatrix& rho) {
  const RealVector s = rho.spectrum();
  return std::max(0.0, shannon_entropy(std::span<const double>(s.data(), s.size())));
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma,
                        const Tolerances& tol) {
  if (rho.dim() != sigma.dim()) {
    throw DimensionError("relative_entropy: dimensions " + std::to_string(rho.dim()) + " and " +
                         std::to_string(sigma.dim()) + " differ");
  }
  const HermitianEigen es = eigh(sigma.matrix());
  // Diagonal of rho in the eigenbasis of sigma.
  const ComplexMatrix rotated = es.vectors.adjoint() * rho.matrix() * es.vectors;

  double kernel_overlap = 0.0;
  double cross = 0.0;
  for (Eigen::Index j = 0; j < es.values.size(); ++j) {
    const double weight = rotated(j, j).real();
    if (es.values(j) <= tol.support_eigenvalue) {
      kernel_overlap += weight;
    } else {
      cross += weight * std::log2(es.values(j));
    }
  }
  if (kernel_overlap > tol.support_overlap) {
    return std::numeric_limits<double>::infinity();
  }
  return std::max(0.0, -entropy(rho) - cross);
}

double conditional_entropy(const DensityMatrix& rho) {
  if (rho.arity() != 2) {
    throw DimensionError("conditional_entropy: expected 2 subsystems, got " +
                         std::to_string(rho.arity()));
  }
  return entropy(rho) - entropy(rho.reduced({1}));
}

double mutual_information(const DensityMatrix& rho) {
  if (rho.arity() != 2) {
    throw DimensionError("mutual_information: expected 2 subsystems, got " +
                         std::to_string(rho.arity()));
  }
  return std::max(0.0, entropy(rho.reduced({0})) + entropy(rho.reduced({1})) - entropy(rho));
}

PureState purify(const DensityMatrix& rho, const Tolerances& tol) {
  const HermitianEigen eig = eigh(rho.matrix());
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = eig.values.size(); i-- > 0;) {
    if (eig.values(i) > tol.rank) support.push_back(i);
  }
  const auto rank = static_cast<Eigen::Index>(support.size());
  const auto d = static_cast<Eigen::Index>(rho.dim());
  ComplexVector psi = ComplexVector::Zero(d * rank);
  for (Eigen::Index a = 0; a < rank; ++a) {
    const Eigen::Index i = support[static_cast<std::size_t>(a)];
    const double amp = std::sqrt(eig.values(i));
    for (Eigen::Index r = 0; r < d; ++r) {
      psi(r * rank + a) = amp * eig.vectors(r, i);
    }
  }
  Dims dims = rho.dims();
  dims.push_back(static_cast<std::size_t>(rank));
  return PureState::normalized(std::move(psi), std::move(dims));
}

DensityMatrix bell_diagonal(const BellDiagonalParams& p) {
  p.validate();
  ComplexMatrix m = ComplexMatrix::Identity(4, 4);
  const double c[3] = {p.c1, p.c2, p.c3};
  for (int i = 1; i <= 3; ++i) {
    m += c[i - 1] * kron(pauli(i), pauli(i));
  }
  m /= 4.0;
  return DensityMatrix(std::move(m), Dims{2, 2});
}

DensityMatrix product_state(const DensityMatrix& a, const DensityMatrix& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return DensityMatrix::trusted(kron(a.matrix(), b.matrix()), std::move(dims));
}

DensityMatrix local_unitary_conjugate(const DensityMatrix& rho, const ComplexMatrix& u,
                                      const ComplexMatrix& v) {
  if (rho.arity() != 2 || static_cast<std::size_t>(u.rows()) != rho.dims()[0] ||
      static_cast<std::size_t>(v.rows()) != rho.dims()[1]) {
    throw DimensionError("local_unitary_conjugate: unitaries do not match subsystem dimensions");
  }
  const ComplexMatrix w = kron(u, v);
  return DensityMatrix::trusted(w * rho.matrix() * w.adjoint(), rho.dims());
}

double negativity(const DensityMatrix& rho) {
  if (rho.arity() != 2) {
    throw DimensionError("negativity: expected 2 subsystems");
  }
  const RealVector eig = eigh(partial_transpose(rho.matrix(), rho.dims(), 1)).values;
  double neg = 0.0;
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    if (eig(i) < 0.0) neg -= eig(i);
  }
  return neg;
}

DensityMatrix with_uniform_marginal(const DensityMatrix& rho) {
  if (rho.arity() != 2) {
    throw DimensionError("with_uniform_marginal: expected 2 subsystems");
  }
  const HermitianEigen eb = eigh(rho.reduced({1}).matrix());
  if (eb.values(0) <= 1e-12) {
    throw ValidationError("with_uniform_marginal: marginal on B is rank deficient");
  }
  const auto db = static_cast<Eigen::Index>(rho.dims()[1]);
  RealVector inv_sqrt = eb.values.cwiseSqrt().cwiseInverse() / std::sqrt(static_cast<double>(db));
  const ComplexMatrix filter = eb.vectors * inv_sqrt.cast<Complex>().asDiagonal() *
                               eb.vectors.adjoint();
  const ComplexMatrix w = embed(filter, rho.dims(), 1);
  return DensityMatrix::trusted(w * rho.matrix() * w.adjoint(), rho.dims());
}

PureState random_pure(const Dims& dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ComplexMatrix g = gaussian_matrix(product(dims), 1, rng);
  return PureState::normalized(g.col(0), dims);
}

DensityMatrix random_density(std::size_t dim, std::size_t rank, std::uint64_t seed) {
  return random_density(Dims{dim}, rank, seed);
}

DensityMatrix random_density(const Dims& dims, std::size_t rank, std::uint64_t seed) {
  const std::size_t dim = product(dims);
  if (rank == 0 || rank > dim) {
    throw DimensionError("random_density: rank " + std::to_string(rank) + " not in [1, " +
                         std::to_string(dim) + "]");
  }
  std::mt19937_64 rng(seed);
  const ComplexMatrix g = gaussian_matrix(dim, rank, rng);
  return DensityMatrix::trusted(g * g.adjoint(), dims);
}

ComplexMatrix random_unitary(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const ComplexMatrix g = gaussian_matrix(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < q.cols(); ++i) {
    const Complex d = r(i, i);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(i) *= d / mag;
  }
  return q;
}

}  // namespace minl
