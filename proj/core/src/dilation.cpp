#include "minl/dilation.hpp"

#include <string>

#include "minl/errors.hpp"

namespace minl {

namespace {

void require_arity(const DensityMatrix& rho, std::size_t n, const char* what) {
  if (rho.arity() != n) {
    throw DimensionError(std::string(what) + ": expected " + std::to_string(n) +
                         " subsystems, got " + std::to_string(rho.arity()));
  }
}

// Ensemble of the subsystems in `keep` from measuring subsystem 1.
double holevo(const DensityMatrix& rho, const InvariantMeasurement& m,
              std::initializer_list<std::size_t> keep) {
  const std::span<const std::size_t> k(keep.begin(), keep.size());
  return entropy(rho.reduced(k)) - conditional_ensemble(rho, m, 1, k).average_entropy();
}

}  // namespace

DilationResult dilate(const DensityMatrix& rho, const InvariantMeasurement& m) {
  require_arity(rho, 2, "dilate");
  const std::size_t db = rho.dims()[1];
  if (m.dimension() != db || m.size() != db) {
    throw DimensionError("dilate: measurement must have one rank-1 projector per dimension of B");
  }
  const auto d = static_cast<Eigen::Index>(db);
  const Eigen::Index dbm = d * d;

  // Defined columns |b>|0> -> sum_k <v_k|b> |v_k>|k>.
  ComplexMatrix u = ComplexMatrix::Zero(dbm, dbm);
  for (Eigen::Index b = 0; b < d; ++b) {
    for (Eigen::Index k = 0; k < d; ++k) {
      const ComplexVector v = m.vector(static_cast<std::size_t>(k));
      const Complex overlap = std::conj(v(b));
      for (Eigen::Index b2 = 0; b2 < d; ++b2) u(b2 * d + k, b * d) += overlap * v(b2);
    }
  }

  // Complete the columns |b>|mu>, mu != 0, by Gram-Schmidt on e_0, e_1, ...
  std::vector<Eigen::Index> filled;
  for (Eigen::Index b = 0; b < d; ++b) filled.push_back(b * d);
  Eigen::Index candidate = 0;
  for (Eigen::Index b = 0; b < d; ++b) {
    for (Eigen::Index mu = 1; mu < d; ++mu) {
      const Eigen::Index col = b * d + mu;
      while (true) {
        ComplexVector e = ComplexVector::Unit(dbm, candidate++);
        for (int pass = 0; pass < 2; ++pass) {
          for (Eigen::Index c : filled) e -= u.col(c) * u.col(c).dot(e);
        }
        const double n = e.norm();
        if (n > 1e-8) {
          u.col(col) = e / n;
          filled.push_back(col);
          break;
        }
      }
    }
  }

  ComplexMatrix ancilla = ComplexMatrix::Zero(d, d);
  ancilla(0, 0) = 1.0;
  Dims joint_dims{rho.dims()[0], db, db};
  const ComplexMatrix w = embed(u, std::vector<std::size_t>{rho.dims()[0], db * db}, 1);
  const ComplexMatrix initial = kron(rho.matrix(), ancilla);
  return DilationResult{DensityMatrix::trusted(w * initial * w.adjoint(), std::move(joint_dims)),
                        std::move(u)};
}

CoherentInfoIdentity coherent_info_identity(const DensityMatrix& rho, const InvariantMeasurement& m) {
  require_arity(rho, 2, "coherent_info_identity");
  const DilationResult dil = dilate(rho, m);
  const DensityMatrix post = dil.joint_state.reduced({0, 1});
  return {entropy(post) - entropy(dil.joint_state), relative_entropy(rho, pinch(rho, m))};
}

double side_information(const DensityMatrix& rho, const InvariantMeasurement& m) {
  require_arity(rho, 2, "side_information");
  return entropy(rho.reduced({0})) - avg_conditional_entropy(rho, m);
}

SideInformation min_side_information(const DensityMatrix& rho, const OptimizerConfig& cfg) {
  require_arity(rho, 2, "min_side_information");
  SideInformation out;
  out.search = n_re(rho, cfg);
  out.minimizing_measurement = out.search.measurement;
  out.chi = side_information(rho, out.minimizing_measurement);
  return out;
}

double missing_information(const DensityMatrix& rho, const InvariantMeasurement& m) {
  require_arity(rho, 2, "missing_information");
  return entropy(rho.reduced({1})) - side_information(rho, m);
}

TripartiteTradeoff tripartite_tradeoff(const PureState& psi, const OptimizerConfig& cfg) {
  if (psi.dims().size() != 3) {
    throw DimensionError("tripartite_tradeoff: expected 3 subsystems, got " +
                         std::to_string(psi.dims().size()));
  }
  const DensityMatrix rho = DensityMatrix::from_pure(psi);
  const DensityMatrix rho_ab = rho.reduced({0, 1});
  const OptimizationReport rep = n_re(rho_ab, cfg);

  TripartiteTradeoff out;
  out.n_re_ab = rep.value;
  out.measurement = rep.measurement;
  out.min_chi_cb = holevo(rho, rep.measurement, {2});
  out.s_b = entropy(rho.reduced({1}));
  return out;
}

MixedTradeoffWitness tripartite_mixed_inequality(const DensityMatrix& rho,
                                                 const InvariantMeasurement& m) {
  require_arity(rho, 3, "tripartite_mixed_inequality");
  const DensityMatrix purified = DensityMatrix::from_pure(purify(rho));
  const DensityMatrix rho_ab = rho.reduced({0, 1});

  MixedTradeoffWitness out;
  out.chi_c = holevo(rho, m, {2});
  out.chi_cd = holevo(purified, m, {2, 3});
  out.relative_entropy_ab = relative_entropy(rho_ab, pinch(rho_ab, m));
  out.s_b = entropy(rho.reduced({1}));
  return out;
}

}  // namespace minl
