#include "minl/nonlocality.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "minl/errors.hpp"
#include "test_support.hpp"

namespace minl {
namespace {

using testing::bell_closed_form_oracle;
using testing::h2;
using testing::h_of;

const double kInvTwoLn2 = 1.0 / (2.0 * std::log(2.0));

InvariantMeasurement axis_measurement(int axis) {
  const HermitianEigen e = eigh(pauli(axis));
  return InvariantMeasurement(e.vectors, {0, 0});
}

TEST(AvgConditionalEntropy, Examples) {
  const DensityMatrix psi = DensityMatrix::from_pure(random_pure(Dims{2, 3}, 4));
  const auto blocks = spectral_blocks(psi.reduced({1}));
  EXPECT_NEAR(avg_conditional_entropy(psi, realize(blocks, BlockParameters::identity(blocks))), 0.0,
              1e-10);

  const DensityMatrix ra = random_density(3, 3, 1);
  const DensityMatrix rb = random_density(2, 2, 2);
  const auto pb = spectral_blocks(rb);
  EXPECT_NEAR(avg_conditional_entropy(product_state(ra, rb), realize(pb, BlockParameters::identity(pb))),
              entropy(ra), 1e-12);

  const BellDiagonalParams c{0.5, -0.3, 0.2};
  const double cs[3] = {0.5, 0.3, 0.2};
  for (int i = 1; i <= 3; ++i) {
    EXPECT_NEAR(avg_conditional_entropy(bell_diagonal(c), axis_measurement(i)),
                h2((1.0 + cs[i - 1]) / 2.0), 1e-12);
  }
}

TEST(NRe, ProductStateIsZero) {
  const DensityMatrix rho = product_state(random_density(2, 2, 3), random_density(3, 3, 4));
  EXPECT_LE(std::abs(n_re(rho).value), 1e-8);
  const DensityMatrix flat = product_state(random_density(2, 2, 5), testing::diag_state({0.5, 0.5}, Dims{2}));
  EXPECT_LE(std::abs(n_re(flat).value), 1e-8);
}

TEST(NRe, SaturatedBellDiagonalLine) {
  for (double c : {0.1, 0.4, 0.5, 0.9}) {
    const OptimizationReport rep = n_re(bell_diagonal({1.0, -c, c}));
    EXPECT_NEAR(rep.value, 1.0, 1e-8) << c;
    EXPECT_FALSE(rep.exhaustive);
  }
}

TEST(NRe, BellDiagonalMatchesClosedFormOracle) {
  const BellDiagonalParams c{0.5, 0.3, 0.2};
  const DensityMatrix rho = bell_diagonal(c);
  const OptimizationReport rep = n_re(rho);
  EXPECT_NEAR(rep.value, bell_closed_form_oracle(0.5, 0.3, 0.2), 1e-6);
  // Independent route to the inner maximum.
  EXPECT_NEAR(qubit_grid_oracle(rho, GridObjective::AvgConditionalEntropy), h2(0.6), 1e-4);
}

TEST(NRe, ReportInvariants) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DensityMatrix rho = with_uniform_marginal(random_density(Dims{2, 2}, 1 + seed % 4, seed));
    OptimizerConfig cfg;
    cfg.seed = seed;
    const OptimizationReport rep = n_re(rho, cfg);
    const DensityMatrix post = pinch(rho, rep.measurement);
    const double at_measurement = entropy(rho.reduced({1})) - entropy(rho) +
                                  avg_conditional_entropy(rho, rep.measurement);
    EXPECT_NEAR(rep.value, at_measurement, 1e-10);
    EXPECT_NEAR(rep.value, relative_entropy(rho, post), 1e-8);
    EXPECT_NEAR(rep.value, entropy(post) - entropy(rho), 1e-8);
    EXPECT_NEAR(rep.value,
                avg_conditional_entropy(rho, rep.measurement) - conditional_entropy(rho), 1e-8);
    EXPECT_LE(rep.value, entropy(rho.reduced({1})) + 1e-9);
    EXPECT_EQ(rep.objective_trace.size(), rep.exhaustive ? 1u : cfg.restarts);
    EXPECT_LE(rep.measurement.commutator_norm(rho.reduced({1}).matrix()), 1e-9);
  }
}

TEST(NRe, NonDegenerateMarginalSkipsSearch) {
  const DensityMatrix rho = random_density(Dims{2, 3}, 6, 8);
  const OptimizationReport rep = n_re(rho);
  EXPECT_TRUE(rep.exhaustive);
  EXPECT_EQ(rep.evaluations, 1u);
  const auto blocks = spectral_blocks(rho.reduced({1}));
  EXPECT_NEAR(rep.value, relative_entropy(rho, pinch(rho, realize(blocks, BlockParameters::identity(blocks)))),
              1e-9);
}

TEST(NRe, PureInputShortCircuits) {
  const OptimizationReport rep = n_re(testing::phi_plus());
  EXPECT_TRUE(rep.exhaustive);
  EXPECT_NEAR(rep.value, 1.0, 1e-10);
}

TEST(NRe, ThreeDimensionalBlockIsFlaggedLowerBound) {
  const DensityMatrix rho = with_uniform_marginal(random_density(Dims{2, 3}, 4, 12));
  OptimizerConfig cfg;
  cfg.restarts = 3;
  const OptimizationReport rep = n_re(rho, cfg);
  EXPECT_TRUE(rep.lower_bound_only);
  EXPECT_LE(rep.value, std::log2(3.0) + 1e-9);
}

TEST(NRe, RejectsBadInput) {
  EXPECT_THROW(n_re(random_density(4, 4, 1)), DimensionError);
  OptimizerConfig cfg;
  cfg.conv_tol = 1.0;
  EXPECT_THROW(n_re(testing::phi_plus(), cfg), ValidationError);
  cfg = {};
  cfg.restarts = 0;
  EXPECT_THROW(n_re(testing::phi_plus(), cfg), ValidationError);
}

TEST(NRePure, Examples) {
  ComplexVector prod = ComplexVector::Zero(4);
  prod(0) = 1.0;
  EXPECT_NEAR(n_re_pure(PureState(prod, Dims{2, 2})), 0.0, 1e-12);

  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(n_re_pure(PureState(bell, Dims{2, 2})), 1.0, 1e-12);

  ComplexVector skew = ComplexVector::Zero(4);
  skew(0) = std::sqrt(0.8);
  skew(3) = std::sqrt(0.2);
  const PureState psi(skew, Dims{2, 2});
  EXPECT_NEAR(n_re_pure(psi), h2(0.8), 1e-12);
  EXPECT_NEAR(n_re_pure(psi), 0.7219280948873623, 1e-12);
  EXPECT_NEAR(n_re(DensityMatrix::from_pure(psi)).value, h2(0.8), 1e-10);

  EXPECT_THROW(n_re_pure(random_pure(Dims{2, 2, 2}, 1)), DimensionError);
}

TEST(NReBellDiagonal, Examples) {
  EXPECT_NEAR(n_re_bell_diagonal({0, 0, 0}), 0.0, 1e-15);
  EXPECT_NEAR(n_re_bell_diagonal({1.0, -0.4, 0.4}), 1.0, 1e-12);
  EXPECT_THROW(n_re_bell_diagonal({1.0, 0.4, 0.4}), ValidationError);
  EXPECT_NEAR(n_re_bell_diagonal({0.5, 0.3, 0.2}), bell_closed_form_oracle(0.5, 0.3, 0.2), 1e-14);
}

TEST(NReBellDiagonal, WernerFamily) {
  for (double p : {0.2, 0.5, 0.9}) {
    const double expected =
        h2((1.0 + p) / 2.0) - (h_of({(1 + 3 * p) / 4, (1 - p) / 4, (1 - p) / 4, (1 - p) / 4}) - 1.0);
    const BellDiagonalParams w = BellDiagonalParams::werner(p);
    EXPECT_NEAR(n_re_bell_diagonal(w), expected, 1e-12) << p;
    EXPECT_NEAR(n_re(bell_diagonal(w)).value, expected, 1e-6) << p;
  }
}

TEST(NGeo, Examples) {
  const DensityMatrix prod = product_state(random_density(2, 2, 1), testing::diag_state({0.5, 0.5}, Dims{2}));
  EXPECT_LE(n_geo(prod).value, 1e-8);
  EXPECT_NEAR(n_geo(testing::phi_plus()).value, 1.0 / std::sqrt(2.0), 1e-8);
  EXPECT_NEAR(qubit_grid_oracle(testing::phi_plus(), GridObjective::HsDistance, 50),
              1.0 / std::sqrt(2.0), 1e-12);
}

TEST(NGeo, MatchesGridOracleOnDegenerateQubits) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const DensityMatrix rho = with_uniform_marginal(random_density(Dims{2, 2}, 2 + seed % 3, seed));
    OptimizerConfig cfg;
    cfg.seed = seed;
    const double ascent = n_geo(rho, cfg).value;
    const double grid = qubit_grid_oracle(rho, GridObjective::HsDistance, 400);
    EXPECT_NEAR(ascent, grid, 1e-4) << seed;
    EXPECT_GE(ascent, grid - 1e-12);
  }
}

TEST(GridOracle, Preconditions) {
  EXPECT_THROW(qubit_grid_oracle(random_density(Dims{2, 2}, 4, 1), GridObjective::HsDistance),
               ValidationError);
  EXPECT_THROW(qubit_grid_oracle(with_uniform_marginal(random_density(Dims{2, 3}, 4, 1)),
                                 GridObjective::HsDistance),
               DimensionError);
  const DensityMatrix prod = product_state(random_density(3, 3, 2), testing::diag_state({0.5, 0.5}, Dims{2}));
  EXPECT_NEAR(qubit_grid_oracle(prod, GridObjective::HsDistance, 40), 0.0, 1e-14);
}

TEST(NRe, UpperBoundProperty) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t da = 2 + seed % 2, db = 2 + (seed / 2) % 2;
    DensityMatrix rho = random_density(Dims{da, db}, 1 + seed % (da * db), seed);
    if (seed % 3 == 0) rho = with_uniform_marginal(random_density(Dims{da, db}, db + seed % da, seed));
    OptimizerConfig cfg;
    cfg.restarts = 4;
    EXPECT_LE(n_re(rho, cfg).value, entropy(rho.reduced({1})) + 1e-9) << seed;
  }
}

TEST(NRe, PerMeasurementPinskerProperty) {
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const DensityMatrix rho = with_uniform_marginal(random_density(Dims{2, 2}, 1 + seed % 4, seed));
    OptimizerConfig cfg;
    cfg.restarts = 3;
    const CandidateObserver check = [&](const InvariantMeasurement& m) {
      const DensityMatrix post = pinch(rho, m);
      EXPECT_LE(kInvTwoLn2 * std::pow(hs_norm(rho.matrix() - post.matrix()), 2),
                relative_entropy(rho, post) + 1e-9);
      ++checked;
    };
    n_re(rho, cfg, {}, check);
    n_geo(rho, cfg, {}, check);
  }
  EXPECT_GT(checked, 50u);
}

TEST(NRe, GeometricBoundWithSharedPoolProperty) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DensityMatrix rho = with_uniform_marginal(random_density(Dims{2, 2}, 1 + seed % 4, seed));
    OptimizerConfig cfg;
    cfg.seed = seed;
    const OptimizationReport geo = n_geo(rho, cfg);
    const InvariantMeasurement pool[] = {geo.measurement};
    const OptimizationReport re = n_re(rho, cfg, pool);
    EXPECT_LE(kInvTwoLn2 * geo.value * geo.value, re.value + 1e-6) << seed;
  }
}

TEST(NRe, LocalUnitaryInvarianceProperty) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const DensityMatrix rho = with_uniform_marginal(random_density(Dims{2, 2}, 1 + seed % 4, seed));
    const ComplexMatrix v = random_unitary(2, seed + 20);
    const DensityMatrix moved = local_unitary_conjugate(rho, random_unitary(2, seed + 10), v);
    OptimizerConfig cfg;
    cfg.seed = seed;
    const SpectralBlocks frame = spectral_blocks(rho.reduced({1}), cfg.cluster_tol);
    EXPECT_NEAR(n_re(rho, frame, cfg).value, n_re(moved, frame.rotated(v), cfg).value, 1e-6)
        << seed;
    EXPECT_NEAR(n_geo(rho, frame, cfg).value, n_geo(moved, frame.rotated(v), cfg).value, 1e-6)
        << seed;
  }
}

TEST(NRe, RejectsFrameThatIsNotAnEigenbasis) {
  const DensityMatrix rho = testing::diag_state({0.6, 0.0, 0.0, 0.4}, Dims{2, 2});
  const SpectralBlocks frame = spectral_blocks(rho.reduced({1}));
  const ComplexMatrix hadamard = (ComplexMatrix(2, 2) << 1, 1, 1, -1).finished() / std::sqrt(2.0);
  EXPECT_THROW(n_re(rho, frame.rotated(hadamard)), ValidationError);
  EXPECT_NO_THROW(n_re(rho, frame));
}

TEST(NRe, EntangledStatesArePositiveProperty) {
  std::size_t tested = 0;
  for (std::uint64_t seed = 0; tested < 10; ++seed) {
    DensityMatrix rho = random_density(Dims{2, 2}, 1 + seed % 3, seed);
    if (seed % 2 == 0) rho = with_uniform_marginal(rho);
    if (negativity(rho) <= 1e-3) continue;
    EXPECT_GT(n_re(rho).value, 1e-6) << seed;
    ++tested;
  }
}

TEST(NRe, ClosedFormConsistencyProperty) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 20; ++i) {
    const BellDiagonalParams c = testing::random_bell_params(rng);
    EXPECT_NEAR(n_re(bell_diagonal(c)).value, n_re_bell_diagonal(c), 1e-6)
        << c.c1 << " " << c.c2 << " " << c.c3;
  }
}

}  // namespace
}  // namespace minl
