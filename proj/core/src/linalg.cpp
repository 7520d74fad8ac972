#include "minl/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "minl/errors.hpp"

namespace minl {

namespace {

// Digits of a flat index in the mixed radix `dims`, last factor fastest.
std::vector<std::size_t> digits_of(std::size_t index, std::span<const std::size_t> dims) {
  std::vector<std::size_t> digits(dims.size());
  for (std::size_t s = dims.size(); s-- > 0;) {
    digits[s] = index % dims[s];
    index /= dims[s];
  }
  return digits;
}

void check_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(what) + ": matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected square");
  }
}

void check_dims(const ComplexMatrix& m, std::span<const std::size_t> dims, const char* what) {
  check_square(m, what);
  if (dims.empty() || product(dims) != static_cast<std::size_t>(m.rows())) {
    throw DimensionError(std::string(what) + ": subsystem dimensions multiply to " +
                         std::to_string(product(dims)) + " but matrix dimension is " +
                         std::to_string(m.rows()));
  }
}

}  // namespace

std::size_t product(std::span<const std::size_t> dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> keep) {
  check_dims(m, dims, "partial_trace");
  if (keep.empty()) {
    throw DimensionError("partial_trace: keep set is empty");
  }
  std::vector<bool> kept(dims.size(), false);
  for (std::size_t k : keep) {
    if (k >= dims.size()) {
      throw DimensionError("partial_trace: subsystem index " + std::to_string(k) +
                           " out of range for " + std::to_string(dims.size()) + " subsystems");
    }
    kept[k] = true;
  }

  const std::size_t total = product(dims);
  std::vector<std::size_t> kept_index(total), traced_index(total);
  std::size_t kept_dim = 1;
  for (std::size_t s = 0; s < dims.size(); ++s) {
    if (kept[s]) kept_dim *= dims[s];
  }
  for (std::size_t i = 0; i < total; ++i) {
    const auto digits = digits_of(i, dims);
    std::size_t ki = 0, ti = 0;
    for (std::size_t s = 0; s < dims.size(); ++s) {
      if (kept[s]) {
        ki = ki * dims[s] + digits[s];
      } else {
        ti = ti * dims[s] + digits[s];
      }
    }
    kept_index[i] = ki;
    traced_index[i] = ti;
  }

  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(kept_dim),
                                          static_cast<Eigen::Index>(kept_dim));
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = 0; j < total; ++j) {
      if (traced_index[i] == traced_index[j]) {
        out(static_cast<Eigen::Index>(kept_index[i]), static_cast<Eigen::Index>(kept_index[j])) +=
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
  }
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, std::span<const std::size_t> dims,
                                std::size_t index) {
  check_dims(m, dims, "partial_transpose");
  if (index >= dims.size()) {
    throw DimensionError("partial_transpose: subsystem index out of range");
  }
  const std::size_t total = product(dims);
  std::size_t stride = 1;
  for (std::size_t s = index + 1; s < dims.size(); ++s) stride *= dims[s];

  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < total; ++i) {
    const std::size_t di = (i / stride) % dims[index];
    for (std::size_t j = 0; j < total; ++j) {
      const std::size_t dj = (j / stride) % dims[index];
      // Swap the digit of subsystem `index` between row and column.
      const std::size_t ii = i - di * stride + dj * stride;
      const std::size_t jj = j - dj * stride + di * stride;
      out(static_cast<Eigen::Index>(ii), static_cast<Eigen::Index>(jj)) =
          m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  return out;
}

double max_asymmetry(const ComplexMatrix& h) {
  check_square(h, "max_asymmetry");
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

ComplexMatrix hermitian_part(const ComplexMatrix& h) {
  check_square(h, "hermitian_part");
  return 0.5 * (h + h.adjoint());
}

HermitianEigen eigh(const ComplexMatrix& h, double hermiticity_tol) {
  check_square(h, "eigh");
  if (h.size() == 0) {
    return {RealVector(0), ComplexMatrix(0, 0)};
  }
  if (!h.allFinite()) {
    throw ValidationError("eigh: matrix has non-finite entries");
  }
  const double asym = max_asymmetry(h);
  if (asym > hermiticity_tol) {
    throw ValidationError("hermiticity invariant violated: max |H - H^dagger| = " +
                          std::to_string(asym));
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(h));
  if (solver.info() != Eigen::Success) {
    throw ValidationError("eigh: eigendecomposition did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double hs_norm(const ComplexMatrix& m) { return m.norm(); }

ComplexMatrix embed(const ComplexMatrix& op, std::span<const std::size_t> dims, std::size_t index) {
  if (index >= dims.size() || static_cast<std::size_t>(op.rows()) != dims[index]) {
    throw DimensionError("embed: operator does not match subsystem dimension");
  }
  const auto left = static_cast<Eigen::Index>(product(dims.first(index)));
  const auto right = static_cast<Eigen::Index>(product(dims.subspan(index + 1)));
  return kron(ComplexMatrix::Identity(left, left),
              kron(op, ComplexMatrix::Identity(right, right)));
}

ComplexMatrix slot_isometry(const ComplexVector& v, std::span<const std::size_t> dims,
                            std::size_t index) {
  if (index >= dims.size() || static_cast<std::size_t>(v.size()) != dims[index]) {
    throw DimensionError("slot_isometry: vector does not match subsystem dimension");
  }
  const std::size_t left = product(dims.first(index));
  const std::size_t right = product(dims.subspan(index + 1));
  const std::size_t d = dims[index];
  ComplexMatrix w = ComplexMatrix::Zero(static_cast<Eigen::Index>(left * d * right),
                                        static_cast<Eigen::Index>(left * right));
  for (std::size_t l = 0; l < left; ++l) {
    for (std::size_t r = 0; r < right; ++r) {
      const std::size_t col = l * right + r;
      for (std::size_t k = 0; k < d; ++k) {
        const std::size_t row = (l * d + k) * right + r;
        w(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
            v(static_cast<Eigen::Index>(k));
      }
    }
  }
  return w;
}

ComplexMatrix hermitian_from_coordinates(std::span<const double> coords, std::size_t m) {
  if (coords.size() != m * m) {
    throw DimensionError("hermitian_from_coordinates: expected " + std::to_string(m * m) +
                         " coordinates, got " + std::to_string(coords.size()));
  }
  const auto n = static_cast<Eigen::Index>(m);
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  std::size_t c = 0;
  for (Eigen::Index i = 0; i < n; ++i) h(i, i) = coords[c++];
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      h(i, j) = Complex(coords[c], coords[c + 1]);
      h(j, i) = std::conj(h(i, j));
      c += 2;
    }
  }
  return h;
}

ComplexMatrix exp_i_hermitian(const ComplexMatrix& h) {
  const HermitianEigen eig = eigh(h);
  ComplexVector phases(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    phases(i) = std::polar(1.0, eig.values(i));
  }
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

ComplexMatrix pauli(int i) {
  ComplexMatrix s = ComplexMatrix::Zero(2, 2);
  switch (i) {
    case 0:
      s(0, 0) = 1.0;
      s(1, 1) = 1.0;
      break;
    case 1:
      s(0, 1) = 1.0;
      s(1, 0) = 1.0;
      break;
    case 2:
      s(0, 1) = Complex(0.0, -1.0);
      s(1, 0) = Complex(0.0, 1.0);
      break;
    case 3:
      s(0, 0) = 1.0;
      s(1, 1) = -1.0;
      break;
    default:
      throw DimensionError("pauli: index must be 0..3");
  }
  return s;
}

}  // namespace minl
