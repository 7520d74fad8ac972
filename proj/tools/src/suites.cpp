#include "minl_cli/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "minl/dilation.hpp"
#include "minl/errors.hpp"

namespace minl::cli {

namespace {

const double kInvTwoLn2 = 1.0 / (2.0 * std::log(2.0));

std::uint64_t sample_seed(std::uint64_t base, std::uint64_t tag, std::size_t i) {
  return base * 1000003ULL + tag * 100003ULL + i;
}

class Check {
 public:
  Check(SuiteReport& report, std::string name, std::string anchor, double tolerance)
      : report_(report), index_(report.checks.size()) {
    CheckSummary summary;
    summary.name = std::move(name);
    summary.anchor = std::move(anchor);
    summary.tolerance = tolerance;
    summary.max_violation = -std::numeric_limits<double>::infinity();
    report_.checks.push_back(std::move(summary));
  }

  void record(std::uint64_t seed, double violation) {
    CheckSummary& s = report_.checks[index_];
    ++s.samples;
    ++report_.samples;
    if (std::isnan(violation)) violation = std::numeric_limits<double>::infinity();
    s.max_violation = std::max(s.max_violation, violation);
    if (violation > s.tolerance) {
      ++s.failures;
      report_.failures.push_back({seed, s.name, violation});
    }
  }

 private:
  SuiteReport& report_;
  std::size_t index_;
};

std::size_t count(const SuiteOptions& o, std::size_t fallback) {
  return o.samples.value_or(fallback);
}

Dims bipartite_dims(const SuiteOptions& o, std::size_t i) {
  if (o.dims) return *o.dims;
  static const Dims shapes[] = {{2, 2}, {2, 3}, {3, 2}, {3, 3}};
  return shapes[i % 4];
}

Dims two_qubit_or(const SuiteOptions& o) { return o.dims.value_or(Dims{2, 2}); }

bool full_rank_marginal(const DensityMatrix& rho) {
  return eigh(rho.reduced({1}).matrix()).values(0) > 1e-9;
}

// With `uniform`, rho_B is filtered to a multiple of the identity when it has
// full rank.
DensityMatrix mixed_sample(const Dims& dims, std::size_t rank, std::uint64_t seed, bool uniform) {
  DensityMatrix rho = random_density(dims, rank, seed);
  if (uniform && full_rank_marginal(rho)) return with_uniform_marginal(rho);
  return rho;
}

OptimizerConfig seeded(const SuiteOptions& o, std::uint64_t seed) {
  OptimizerConfig cfg = o.optimizer;
  cfg.seed = seed;
  return cfg;
}

// Reorders a state on (A, C, B) into (A, B, C).
ComplexMatrix acb_to_abc(std::size_t da, std::size_t db, std::size_t dc) {
  const auto n = static_cast<Eigen::Index>(da * db * dc);
  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  for (std::size_t a = 0; a < da; ++a) {
    for (std::size_t b = 0; b < db; ++b) {
      for (std::size_t c = 0; c < dc; ++c) {
        p(static_cast<Eigen::Index>((a * db + b) * dc + c),
          static_cast<Eigen::Index>((a * dc + c) * db + b)) = 1.0;
      }
    }
  }
  return p;
}

DensityMatrix tripartite_mixed(const Dims& ab, std::size_t rank, std::uint64_t seed, bool uniform) {
  const std::size_t da = ab[0], db = ab[1], dc = 2;
  DensityMatrix acb = random_density(Dims{da * dc, db}, rank, seed);
  if (uniform && full_rank_marginal(acb)) acb = with_uniform_marginal(acb);
  const ComplexMatrix p = acb_to_abc(da, db, dc);
  return DensityMatrix::trusted(p * acb.matrix() * p.adjoint(), Dims{da, db, dc});
}

PureState tripartite_pure(const Dims& ab, std::uint64_t seed, bool uniform) {
  const std::size_t da = ab[0], db = ab[1], dc = 2;
  if (!uniform) return random_pure(Dims{da, db, dc}, seed);
  const DensityMatrix acb =
      with_uniform_marginal(DensityMatrix::from_pure(random_pure(Dims{da * dc, db}, seed)));
  const HermitianEigen e = eigh(acb.matrix());
  const ComplexVector v = e.vectors.col(e.vectors.cols() - 1);
  return PureState::normalized(acb_to_abc(da, db, dc) * v, Dims{da, db, dc});
}

template <class Rng>
BellDiagonalParams random_bell(Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  while (true) {
    BellDiagonalParams p{u(rng), u(rng), u(rng)};
    const auto eig = p.spectrum();
    if (*std::min_element(eig.begin(), eig.end()) >= 0.0) return p;
  }
}

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

void bounds_suite(const SuiteOptions& o, SuiteReport& r) {
  {
    Check c(r, "upper-bound", "N_RE <= S(rho_B)", 1e-9);
    for (std::size_t i = 0; i < count(o, 500); ++i) {
      const std::uint64_t seed = sample_seed(o.seed, 1, i);
      const Dims dims = bipartite_dims(o, i);
      const std::size_t rank = 1 + (i / 4) % (dims[0] * dims[1]);
      const DensityMatrix rho = mixed_sample(dims, rank, seed, i % 2 == 1);
      c.record(seed, n_re(rho, seeded(o, seed)).value - entropy(rho.reduced({1})));
    }
  }
  {
    Check c(r, "pure-state", "pure states: N_RE = S(rho_B)", 1e-7);
    static const Dims shapes[] = {{2, 2}, {2, 3}, {3, 3}};
    for (std::size_t i = 0; i < count(o, 200); ++i) {
      const std::uint64_t seed = sample_seed(o.seed, 2, i);
      const Dims dims = o.dims.value_or(shapes[i % 3]);
      const DensityMatrix rho = DensityMatrix::from_pure(random_pure(dims, seed));
      c.record(seed, std::abs(n_re(rho, seeded(o, seed)).value - entropy(rho.reduced({1}))));
    }
  }
  {
    Check c(r, "product-zero", "product states: N_RE = N_G = 0", 1e-8);
    for (std::size_t i = 0; i < count(o, 100); ++i) {
      const std::uint64_t seed = sample_seed(o.seed, 3, i);
      const Dims dims = bipartite_dims(o, i);
      const DensityMatrix a = random_density(dims[0], 1 + i % dims[0], seed);
      DensityMatrix b = random_density(dims[1], dims[1], seed + 1);
      if (i % 2 == 1) {
        const auto d = static_cast<Eigen::Index>(dims[1]);
        b = DensityMatrix::trusted(ComplexMatrix::Identity(d, d), Dims{dims[1]});
      }
      const DensityMatrix rho = product_state(a, b);
      const OptimizerConfig cfg = seeded(o, seed);
      c.record(seed, std::max(std::abs(n_re(rho, cfg).value), std::abs(n_geo(rho, cfg).value)));
    }
  }
  {
    Check c(r, "entangled-positive", "NPT states: N_RE > 1e-6", 0.0);
    const Dims dims = two_qubit_or(o);
    const std::size_t want = count(o, 100);
    std::size_t found = 0;
    for (std::size_t i = 0; found < want && i < 200 * want; ++i) {
      const std::uint64_t seed = sample_seed(o.seed, 4, i);
      const DensityMatrix rho = mixed_sample(dims, 1 + i % 3, seed, i % 2 == 1);
      if (negativity(rho) <= 1e-3) continue;
      ++found;
      c.record(seed, 1e-6 - n_re(rho, seeded(o, seed)).value);
    }
    if (found < want) {
      r.notes.push_back("entangled-positive: only " + std::to_string(found) +
                        " NPT samples found");
    }
  }
}

void pinsker_suite(const SuiteOptions& o, SuiteReport& r) {
  Check per(r, "pinsker-per-measurement",
            "(1/2ln2)||rho - rho~||_HS^2 <= S(rho||rho~) for every visited measurement", 1e-9);
  Check max_level(r, "pinsker-max-level", "(1/2ln2) N_G^2 <= N_RE with a shared pool", 1e-6);
  for (std::size_t i = 0; i < count(o, 200); ++i) {
    const std::uint64_t seed = sample_seed(o.seed, 5, i);
    const Dims dims = o.dims.value_or(Dims{2, 2});
    const DensityMatrix rho = mixed_sample(dims, 1 + i % (dims[0] * dims[1]), seed, i % 4 != 0);
    const CandidateObserver observe = [&](const InvariantMeasurement& m) {
      const DensityMatrix tilde = pinch(rho, m);
      const double d = hs_norm(rho.matrix() - tilde.matrix());
      per.record(seed, kInvTwoLn2 * d * d - relative_entropy(rho, tilde));
    };
    const OptimizerConfig cfg = seeded(o, seed);
    const OptimizationReport geo = n_geo(rho, cfg, {}, observe);
    const InvariantMeasurement pool[] = {geo.measurement};
    const OptimizationReport re = n_re(rho, cfg, pool, observe);
    max_level.record(seed, kInvTwoLn2 * geo.value * geo.value - re.value);
  }
}

void tradeoffs_suite(const SuiteOptions& o, SuiteReport& r) {
  std::size_t literal_mismatch = 0;
  std::size_t literal_total = 0;
  double literal_gap = 0.0;
  {
    Check mi(r, "mutual-information", "N_RE + min side information = I(A:B)", 1e-8);
    Check missing(r, "missing-information",
                  "max missing information = N_RE + S(rho_AB) - S(rho_A) at the shared maximizer",
                  1e-8);
    for (std::size_t i = 0; i < count(o, 200); ++i) {
      const std::uint64_t seed = sample_seed(o.seed, 6, i);
      const Dims dims = o.dims.value_or(Dims{2, 2});
      const DensityMatrix rho = mixed_sample(dims, 1 + i % (dims[0] * dims[1]), seed, i % 2 == 1);
      const SideInformation si = min_side_information(rho, seeded(o, seed));
      mi.record(seed, std::abs(si.search.value + si.chi - mutual_information(rho)));
      const double gap = entropy(rho) - entropy(rho.reduced({0}));
      const double miss = missing_information(rho, si.minimizing_measurement);
      missing.record(seed, std::abs(miss - (si.search.value + gap)));
      ++literal_total;
      if (std::abs(miss - si.search.value) > 1e-6) ++literal_mismatch;
      literal_gap = std::max(literal_gap, std::abs(miss - si.search.value));
    }
  }
  if (literal_total > 0) {
    r.notes.push_back("missing-information: literal 'max missing information = N_RE' differs by more "
                      "than 1e-6 on " +
                      std::to_string(literal_mismatch) + " of " + std::to_string(literal_total) +
                      " samples" + fmt(" (max gap %.6g bits); the gap is S(rho_A) - S(rho_AB)", literal_gap));
  }
  {
    Check c(r, "tripartite-pure", "pure ABC: N_RE(AB) + chi(C) = S(rho_B)", 1e-7);
    for (std::size_t i = 0; i < count(o, 100); ++i) {
      const std::uint64_t seed = sample_seed(o.seed, 7, i);
      const TripartiteTradeoff t =
          tripartite_tradeoff(tripartite_pure(two_qubit_or(o), seed, i % 2 == 1), seeded(o, seed));
      c.record(seed, std::abs(t.n_re_ab + t.min_chi_cb - t.s_b));
    }
  }
  {
    Check dpi(r, "tripartite-data-processing", "chi(C) <= chi(CD) with D purifying ABC", 1e-9);
    Check bound(r, "tripartite-mixed", "N_RE(AB) + chi(C) <= S(rho_B) at the N_RE maximizer", 1e-9);
    for (std::size_t i = 0; i < count(o, 100); ++i) {
      const std::uint64_t seed = sample_seed(o.seed, 8, i);
      const DensityMatrix rho = tripartite_mixed(two_qubit_or(o), 2, seed, i % 2 == 1);
      const OptimizationReport rep = n_re(rho.reduced({0, 1}), seeded(o, seed));
      const MixedTradeoffWitness w = tripartite_mixed_inequality(rho, rep.measurement);
      dpi.record(seed, w.chi_c - w.chi_cd);
      bound.record(seed, rep.value + w.chi_c - w.s_b);
    }
  }
}

void dilation_suite(const SuiteOptions& o, SuiteReport& r) {
  Check identity(r, "coherent-information", "S(rho~_AB) - S(rho~_ABM) = S(rho||rho~)", 1e-8);
  Check round_trip(r, "trace-over-apparatus", "Tr_M of the dilated state = pinched state", 1e-10);
  Check preserved(r, "entropy-preservation", "S(rho~_ABM) = S(rho_AB)", 1e-9);
  Check unitary(r, "record-unitarity", "U_BM^dagger U_BM = I", 1e-10);
  for (std::size_t i = 0; i < count(o, 200); ++i) {
    const std::uint64_t seed = sample_seed(o.seed, 9, i);
    const Dims dims = bipartite_dims(o, i);
    const bool uniform = i % 2 == 1;
    const DensityMatrix rho = mixed_sample(dims, 1 + i % (dims[0] * dims[1]), seed, uniform);
    InvariantMeasurement m;
    const SpectralBlocks blocks = spectral_blocks(rho.reduced({1}), o.optimizer.cluster_tol);
    if (blocks.blocks.size() == 1) {
      m = InvariantMeasurement(random_unitary(dims[1], seed + 1), std::vector<std::size_t>(dims[1], 0));
    } else {
      m = realize(blocks, BlockParameters::identity(blocks));
    }
    const CoherentInfoIdentity ci = coherent_info_identity(rho, m);
    identity.record(seed, std::abs(ci.lhs - ci.rhs));
    const DilationResult d = dilate(rho, m);
    round_trip.record(seed, (d.joint_state.reduced({0, 1}).matrix() - pinch(rho, m).matrix())
                                .cwiseAbs()
                                .maxCoeff());
    preserved.record(seed, std::abs(entropy(d.joint_state) - entropy(rho)));
    const auto n = d.unitary_bm.rows();
    unitary.record(seed, (d.unitary_bm.adjoint() * d.unitary_bm - ComplexMatrix::Identity(n, n))
                             .cwiseAbs()
                             .maxCoeff());
  }
}

void invariance_suite(const SuiteOptions& o, SuiteReport& r) {
  Check c(r, "local-unitary", "N_RE((U (x) V) rho (U (x) V)^dagger) = N_RE(rho)", 1e-6);
  for (std::size_t i = 0; i < count(o, 100); ++i) {
    const std::uint64_t seed = sample_seed(o.seed, 10, i);
    const Dims dims = o.dims.value_or(Dims{2, 2});
    const DensityMatrix rho = mixed_sample(dims, 1 + i % (dims[0] * dims[1]), seed, i % 4 != 0);
    const ComplexMatrix v = random_unitary(dims[1], seed + 2);
    const DensityMatrix moved = local_unitary_conjugate(rho, random_unitary(dims[0], seed + 1), v);
    const OptimizerConfig cfg = seeded(o, seed);
    const SpectralBlocks frame = spectral_blocks(rho.reduced({1}), cfg.cluster_tol);
    c.record(seed, std::abs(n_re(rho, frame, cfg).value - n_re(moved, frame.rotated(v), cfg).value));
  }
}

void oracle_suite(const SuiteOptions& o, SuiteReport& r) {
  {
    Check c(r, "bell-closed-form", "numeric N_RE = f(c_min) - f(c1,c2,c3)", 1e-6);
    std::mt19937_64 rng(sample_seed(o.seed, 11, 0));
    for (std::size_t i = 0; i < count(o, 200); ++i) {
      const std::uint64_t seed = sample_seed(o.seed, 11, i);
      const BellDiagonalParams p = random_bell(rng);
      c.record(seed, std::abs(n_re(bell_diagonal(p), seeded(o, seed)).value - n_re_bell_diagonal(p)));
    }
  }
  {
    Check c(r, "bell-grid", "grid max of S(A|B) after measurement = f(c_min)", 1e-4);
    std::mt19937_64 rng(sample_seed(o.seed, 12, 0));
    for (std::size_t i = 0; i < count(o, 100); ++i) {
      const std::uint64_t seed = sample_seed(o.seed, 12, i);
      const BellDiagonalParams p = random_bell(rng);
      const double grid = qubit_grid_oracle(bell_diagonal(p), GridObjective::AvgConditionalEntropy,
                                            o.grid_resolution);
      const double c_min = std::min({std::abs(p.c1), std::abs(p.c2), std::abs(p.c3)});
      c.record(seed, std::abs(grid - bloch_entropy(c_min)));
    }
  }
  {
    Check c(r, "special-line", "c = (1, -c, c): N_RE = 1", 1e-8);
    for (const double x : {0.1, 0.5, 0.9}) {
      c.record(o.seed, std::abs(n_re(bell_diagonal({1.0, -x, x}), seeded(o, o.seed)).value - 1.0));
    }
  }
}

using SuiteFn = void (*)(const SuiteOptions&, SuiteReport&);

struct Entry {
  const char* name;
  SuiteFn fn;
};

const Entry kSuites[] = {
    {"bounds", bounds_suite},       {"pinsker", pinsker_suite},       {"tradeoffs", tradeoffs_suite},
    {"dilation", dilation_suite},   {"invariance", invariance_suite}, {"oracle", oracle_suite},
};

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n{"all"};
    for (const Entry& e : kSuites) n.emplace_back(e.name);
    return n;
  }();
  return names;
}

SuiteReport run_suite(const std::string& name, const SuiteOptions& options) {
  if (options.samples && *options.samples == 0) {
    throw ValidationError("verify: samples must be at least 1");
  }
  if (options.dims && options.dims->size() != 2) {
    throw DimensionError("verify: --dims must name two subsystems (dAxdB)");
  }
  options.optimizer.validate();
  SuiteReport report;
  report.suite = name;
  const auto start = std::chrono::steady_clock::now();
  bool known = false;
  for (const Entry& e : kSuites) {
    if (name == "all" || name == e.name) {
      e.fn(options, report);
      known = true;
    }
  }
  if (!known) throw UnknownSuiteError("unknown suite '" + name + "'");
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace minl::cli
