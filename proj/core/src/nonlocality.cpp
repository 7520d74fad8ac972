#include "minl/nonlocality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "minl/errors.hpp"

namespace minl {

void OptimizerConfig::validate() const {
  if (restarts == 0) throw ValidationError("optimizer: restarts must be positive");
  if (max_iters == 0) throw ValidationError("optimizer: max_iters must be positive");
  if (!(step_init > 0.0)) throw ValidationError("optimizer: step_init must be positive");
  if (!(grad_eps > 0.0)) throw ValidationError("optimizer: grad_eps must be positive");
  if (!(conv_tol > 0.0)) throw ValidationError("optimizer: conv_tol must be positive");
  if (!(conv_tol < step_init)) throw ValidationError("optimizer: conv_tol must be below step_init");
  if (!(cluster_tol > 0.0)) throw ValidationError("optimizer: cluster_tol must be positive");
}

namespace {

using Objective = std::function<double(const InvariantMeasurement&)>;

constexpr double kArmijo = 1e-4;
constexpr double kMaxStep = 1.0;

struct SearchResult {
  double best = -std::numeric_limits<double>::infinity();
  InvariantMeasurement measurement;
  std::vector<double> trace;
  bool converged = true;
  bool exhaustive = false;
  bool lower_bound_only = false;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
};

// Multi-start quasi-Newton ascent on the product of block unitary groups.
// Moves are right-multiplications U_b <- U_b exp(i H(delta_b)); the gradient
// is taken by central differences in the generator coordinates at delta = 0.
class BlockAscent {
 public:
  BlockAscent(const SpectralBlocks& blocks, const Objective& f, const OptimizerConfig& cfg,
              const CandidateObserver& observer)
      : blocks_(blocks), f_(f), cfg_(cfg), observer_(observer) {
    for (std::size_t b = 0; b < blocks_.blocks.size(); ++b) {
      if (blocks_.is_free(b)) {
        free_.push_back(b);
        const std::size_t m = blocks_.blocks[b].dimension();
        n_params_ += m * m;
        if (m >= 3) lower_bound_only_ = true;
      }
    }
  }

  SearchResult run() {
    SearchResult result;
    result.lower_bound_only = lower_bound_only_;
    for (std::size_t r = 0; r < cfg_.restarts; ++r) {
      Point start = r == 0 ? identity_point() : random_point(cfg_.seed + r);
      Restart out = ascend(std::move(start));
      result.trace.push_back(out.value);
      result.iterations += out.iterations;
      if (out.value > result.best) {
        result.best = out.value;
        result.measurement = realize_with_unitaries(blocks_, out.point);
        result.converged = out.converged;
      }
    }
    result.evaluations = evaluations_;
    return result;
  }

 private:
  using Point = std::vector<ComplexMatrix>;

  struct Restart {
    Point point;
    double value = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
  };

  Point identity_point() const {
    Point p(blocks_.blocks.size());
    for (std::size_t b : free_) {
      const auto m = static_cast<Eigen::Index>(blocks_.blocks[b].dimension());
      p[b] = ComplexMatrix::Identity(m, m);
    }
    return p;
  }

  Point random_point(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, std::numbers::pi / 2.0);
    Point p(blocks_.blocks.size());
    for (std::size_t b : free_) {
      const std::size_t m = blocks_.blocks[b].dimension();
      std::vector<double> g(m * m);
      for (double& x : g) x = normal(rng);
      p[b] = exp_i_hermitian(hermitian_from_coordinates(g, m));
    }
    return p;
  }

  Point moved(const Point& p, const std::vector<double>& delta, double scale) const {
    Point q = p;
    std::size_t offset = 0;
    for (std::size_t b : free_) {
      const std::size_t m = blocks_.blocks[b].dimension();
      std::vector<double> g(delta.begin() + static_cast<std::ptrdiff_t>(offset),
                            delta.begin() + static_cast<std::ptrdiff_t>(offset + m * m));
      for (double& x : g) x *= scale;
      q[b] = p[b] * exp_i_hermitian(hermitian_from_coordinates(g, m));
      offset += m * m;
    }
    return q;
  }

  double evaluate(const Point& p, bool report) {
    ++evaluations_;
    const InvariantMeasurement m = realize_with_unitaries(blocks_, p);
    if (report && observer_) observer_(m);
    return f_(m);
  }

  std::vector<double> gradient(const Point& p) {
    std::vector<double> grad(n_params_, 0.0);
    std::vector<double> e(n_params_, 0.0);
    for (std::size_t j = 0; j < n_params_; ++j) {
      e[j] = 1.0;
      const double up = evaluate(moved(p, e, cfg_.grad_eps), false);
      const double down = evaluate(moved(p, e, -cfg_.grad_eps), false);
      grad[j] = (up - down) / (2.0 * cfg_.grad_eps);
      e[j] = 0.0;
    }
    return grad;
  }

  // Quasi-Newton (BFGS) ascent in the local generator chart. The inverse
  // Hessian estimate starts as a multiple of the identity sized so that the
  // first trial step has length step_init along the gradient.
  Restart ascend(Point start) {
    Restart out;
    out.point = std::move(start);
    out.value = evaluate(out.point, true);
    const auto n = static_cast<Eigen::Index>(n_params_);
    Eigen::VectorXd grad = as_vector(gradient(out.point));
    Eigen::MatrixXd inv_hessian = Eigen::MatrixXd::Zero(n, n);
    bool fresh = true;
    for (std::size_t it = 0; it < cfg_.max_iters; ++it) {
      ++out.iterations;
      const double gnorm = grad.norm();
      if (gnorm < 1e-12) {
        out.converged = true;
        return out;
      }
      if (fresh) inv_hessian = Eigen::MatrixXd::Identity(n, n) * (cfg_.step_init / gnorm);
      Eigen::VectorXd dir = inv_hessian * grad;
      double slope = grad.dot(dir);
      if (!(slope > 0.0)) {
        inv_hessian = Eigen::MatrixXd::Identity(n, n) * (cfg_.step_init / gnorm);
        dir = inv_hessian * grad;
        slope = grad.dot(dir);
      }
      const double dnorm = dir.norm();
      if (dnorm > kMaxStep) {
        dir *= kMaxStep / dnorm;
        slope *= kMaxStep / dnorm;
      }

      // Backtracking by halving with a sufficient-increase (Armijo) test.
      bool accepted = false;
      double improvement = 0.0;
      double step = 0.0;
      for (double t = 1.0; t >= 1e-10; t *= 0.5) {
        Point trial = moved(out.point, as_std(dir), t);
        const double v = evaluate(trial, true);
        if (v - out.value >= kArmijo * t * slope) {
          improvement = v - out.value;
          out.point = std::move(trial);
          out.value = v;
          accepted = true;
          step = t;
          break;
        }
      }
      if (!accepted || improvement < cfg_.conv_tol) {
        if (!fresh) {
          fresh = true;
          continue;
        }
        out.converged = true;
        return out;
      }

      const Eigen::VectorXd next = as_vector(gradient(out.point));
      // BFGS update for -f.
      const Eigen::VectorXd sv = step * dir;
      const Eigen::VectorXd y = grad - next;
      const double sy = sv.dot(y);
      if (sy > 1e-12 * sv.norm() * y.norm()) {
        const double rho = 1.0 / sy;
        const Eigen::MatrixXd left = Eigen::MatrixXd::Identity(n, n) - rho * sv * y.transpose();
        inv_hessian = left * inv_hessian * left.transpose() + rho * sv * sv.transpose();
        fresh = false;
      } else {
        fresh = true;
      }
      grad = next;
    }
    out.converged = false;
    return out;
  }

  static Eigen::VectorXd as_vector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  }
  static std::vector<double> as_std(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  }

  const SpectralBlocks& blocks_;
  const Objective& f_;
  const OptimizerConfig& cfg_;
  const CandidateObserver& observer_;
  std::vector<std::size_t> free_;
  std::size_t n_params_ = 0;
  bool lower_bound_only_ = false;
  std::size_t evaluations_ = 0;
};

SearchResult maximize(const SpectralBlocks& blocks, const Objective& f, const OptimizerConfig& cfg,
                      bool skip_search, std::span<const InvariantMeasurement> extra,
                      const CandidateObserver& observer) {
  SearchResult result;
  if (skip_search || !blocks.has_freedom()) {
    result.measurement = realize(blocks, BlockParameters::identity(blocks));
    if (observer) observer(result.measurement);
    result.best = f(result.measurement);
    result.trace.push_back(result.best);
    result.exhaustive = true;
    result.evaluations = 1;
  } else {
    result = BlockAscent(blocks, f, cfg, observer).run();
  }
  for (const InvariantMeasurement& m : extra) {
    if (observer) observer(m);
    ++result.evaluations;
    const double v = f(m);
    if (v > result.best) {
      result.best = v;
      result.measurement = m;
    }
  }
  return result;
}

void require_bipartite(const DensityMatrix& rho, const char* what) {
  if (rho.arity() != 2) {
    throw DimensionError(std::string(what) + ": expected 2 subsystems, got " +
                         std::to_string(rho.arity()));
  }
}

OptimizationReport to_report(SearchResult r, double offset) {
  OptimizationReport rep;
  rep.value = r.best + offset;
  rep.measurement = std::move(r.measurement);
  rep.objective_trace = std::move(r.trace);
  for (double& v : rep.objective_trace) v += offset;
  rep.converged = r.converged;
  rep.exhaustive = r.exhaustive;
  rep.lower_bound_only = r.lower_bound_only;
  rep.iterations = r.iterations;
  rep.evaluations = r.evaluations;
  return rep;
}

}  // namespace

double avg_conditional_entropy(const DensityMatrix& rho, const InvariantMeasurement& m) {
  return ensemble(rho, m).average_entropy();
}

namespace {

void check_frame(const DensityMatrix& rho, const SpectralBlocks& frame) {
  const ComplexMatrix marginal = rho.reduced({1}).matrix();
  if (static_cast<Eigen::Index>(frame.source_dim) != marginal.rows()) {
    throw DimensionError("block frame dimension " + std::to_string(frame.source_dim) +
                         " does not match rho_B dimension " + std::to_string(marginal.rows()));
  }
  std::size_t total = 0;
  for (const SpectralBlock& b : frame.blocks) {
    total += b.dimension();
    const double residual =
        (marginal * b.basis - b.eigenvalue * b.basis).cwiseAbs().maxCoeff();
    if (residual > kDefaultTolerances.commutation) {
      throw ValidationError("block frame is not an eigenbasis of rho_B (residual " +
                            std::to_string(residual) + ")");
    }
  }
  if (total != frame.source_dim) {
    throw ValidationError("block frame does not span rho_B's space");
  }
}

}  // namespace

OptimizationReport n_re(const DensityMatrix& rho, const SpectralBlocks& frame,
                        const OptimizerConfig& cfg,
                        std::span<const InvariantMeasurement> extra_candidates,
                        const CandidateObserver& observer) {
  require_bipartite(rho, "n_re");
  cfg.validate();
  check_frame(rho, frame);
  const DensityMatrix marginal = rho.reduced({1});
  const RealVector spectrum = rho.spectrum();
  const bool pure = spectrum(spectrum.size() - 1) > 1.0 - kDefaultTolerances.purity;
  const double offset = entropy(marginal) - entropy(rho);

  const Objective f = [&rho](const InvariantMeasurement& m) {
    return avg_conditional_entropy(rho, m);
  };
  return to_report(maximize(frame, f, cfg, pure, extra_candidates, observer), offset);
}

OptimizationReport n_re(const DensityMatrix& rho, const OptimizerConfig& cfg,
                        std::span<const InvariantMeasurement> extra_candidates,
                        const CandidateObserver& observer) {
  require_bipartite(rho, "n_re");
  cfg.validate();
  return n_re(rho, spectral_blocks(rho.reduced({1}), cfg.cluster_tol), cfg, extra_candidates,
              observer);
}

OptimizationReport n_geo(const DensityMatrix& rho, const SpectralBlocks& frame,
                         const OptimizerConfig& cfg,
                         std::span<const InvariantMeasurement> extra_candidates,
                         const CandidateObserver& observer) {
  require_bipartite(rho, "n_geo");
  cfg.validate();
  check_frame(rho, frame);
  const Objective f = [&rho](const InvariantMeasurement& m) {
    return hs_norm(rho.matrix() - pinch(rho, m).matrix());
  };
  return to_report(maximize(frame, f, cfg, false, extra_candidates, observer), 0.0);
}

OptimizationReport n_geo(const DensityMatrix& rho, const OptimizerConfig& cfg,
                         std::span<const InvariantMeasurement> extra_candidates,
                         const CandidateObserver& observer) {
  require_bipartite(rho, "n_geo");
  cfg.validate();
  return n_geo(rho, spectral_blocks(rho.reduced({1}), cfg.cluster_tol), cfg, extra_candidates,
               observer);
}

double n_re_pure(const PureState& psi) {
  if (psi.dims().size() != 2) {
    throw DimensionError("n_re_pure: expected 2 subsystems, got " +
                         std::to_string(psi.dims().size()));
  }
  const auto da = static_cast<Eigen::Index>(psi.dims()[0]);
  const auto db = static_cast<Eigen::Index>(psi.dims()[1]);
  ComplexMatrix coeffs(da, db);
  for (Eigen::Index a = 0; a < da; ++a) {
    for (Eigen::Index b = 0; b < db; ++b) coeffs(a, b) = psi.amplitudes()(a * db + b);
  }
  const RealVector schmidt = Eigen::JacobiSVD<ComplexMatrix>(coeffs).singularValues();
  std::vector<double> weights;
  for (Eigen::Index i = 0; i < schmidt.size(); ++i) weights.push_back(schmidt(i) * schmidt(i));
  return shannon_entropy(weights);
}

double bloch_entropy(double x) {
  const double p[2] = {(1.0 + x) / 2.0, (1.0 - x) / 2.0};
  return shannon_entropy(p);
}

double bell_conditional_entropy(const BellDiagonalParams& p) {
  const auto eig = p.spectrum();
  return shannon_entropy(eig) - 1.0;
}

double n_re_bell_diagonal(const BellDiagonalParams& p) {
  p.validate();
  const double c_min = std::min({std::abs(p.c1), std::abs(p.c2), std::abs(p.c3)});
  return std::clamp(bloch_entropy(c_min) - bell_conditional_entropy(p), 0.0, 1.0);
}

namespace {

// Entropy of a small Hermitian PSD matrix; closed form for 2x2.
double small_entropy(const ComplexMatrix& m) {
  if (m.rows() == 2) {
    const double tr = m(0, 0).real() + m(1, 1).real();
    const double det = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)).real();
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
    const double ev[2] = {(tr + disc) / 2.0, (tr - disc) / 2.0};
    return shannon_entropy(ev);
  }
  const RealVector ev = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(m).eigenvalues();
  return shannon_entropy(std::span<const double>(ev.data(), ev.size()));
}

}  // namespace

double qubit_grid_oracle(const DensityMatrix& rho, GridObjective objective, std::size_t resolution,
                         double cluster_tol) {
  require_bipartite(rho, "qubit_grid_oracle");
  if (rho.dims()[1] != 2) {
    throw DimensionError("qubit_grid_oracle: measured subsystem must be a qubit");
  }
  if (resolution < 2) {
    throw ValidationError("qubit_grid_oracle: resolution must be at least 2");
  }
  const auto da = static_cast<Eigen::Index>(rho.dims()[0]);
  const ComplexMatrix& r = rho.matrix();
  auto at = [&r](Eigen::Index a, Eigen::Index b, Eigen::Index a2, Eigen::Index b2) {
    return r(2 * a + b, 2 * a2 + b2);
  };

  // Marginal on B by direct summation.
  ComplexMatrix marginal = ComplexMatrix::Zero(2, 2);
  for (Eigen::Index a = 0; a < da; ++a) {
    for (Eigen::Index b = 0; b < 2; ++b) {
      for (Eigen::Index b2 = 0; b2 < 2; ++b2) marginal(b, b2) += at(a, b, a, b2);
    }
  }
  const double dev = (marginal - 0.5 * ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff();
  if (dev > cluster_tol) {
    throw ValidationError("qubit_grid_oracle: marginal on B is not degenerate (deviation " +
                          std::to_string(dev) + ")");
  }

  double best = -std::numeric_limits<double>::infinity();
  ComplexMatrix proj[2] = {ComplexMatrix(2, 2), ComplexMatrix(2, 2)};
  ComplexMatrix cond(da, da);
  for (std::size_t i = 0; i < resolution; ++i) {
    const double theta = std::numbers::pi * static_cast<double>(i) / static_cast<double>(resolution - 1);
    for (std::size_t j = 0; j < resolution; ++j) {
      const double phi = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(resolution);
      const double nx = std::sin(theta) * std::cos(phi);
      const double ny = std::sin(theta) * std::sin(phi);
      const double nz = std::cos(theta);
      for (int s = 0; s < 2; ++s) {
        const double sign = s == 0 ? 1.0 : -1.0;
        // (I + s n.sigma) / 2
        proj[s](0, 0) = 0.5 * (1.0 + sign * nz);
        proj[s](1, 1) = 0.5 * (1.0 - sign * nz);
        proj[s](0, 1) = 0.5 * sign * Complex(nx, -ny);
        proj[s](1, 0) = 0.5 * sign * Complex(nx, ny);
      }

      double value = 0.0;
      if (objective == GridObjective::AvgConditionalEntropy) {
        for (const ComplexMatrix& p : proj) {
          // Tr_B[(I (x) P) rho]_{a,a2} = sum_{b,b2} P_{b,b2} rho_{(a,b2),(a2,b)}
          cond.setZero();
          for (Eigen::Index a = 0; a < da; ++a) {
            for (Eigen::Index a2 = 0; a2 < da; ++a2) {
              Complex acc = 0.0;
              for (Eigen::Index b = 0; b < 2; ++b) {
                for (Eigen::Index b2 = 0; b2 < 2; ++b2) acc += p(b, b2) * at(a, b2, a2, b);
              }
              cond(a, a2) = acc;
            }
          }
          const double prob = cond.trace().real();
          if (prob > kDefaultTolerances.negligible_probability) {
            value += prob * small_entropy(cond / prob);
          }
        }
      } else {
        // ||rho - sum_s (I (x) P_s) rho (I (x) P_s)||_HS by explicit index sums.
        double sq = 0.0;
        for (Eigen::Index a = 0; a < da; ++a) {
          for (Eigen::Index a2 = 0; a2 < da; ++a2) {
            for (Eigen::Index b = 0; b < 2; ++b) {
              for (Eigen::Index b2 = 0; b2 < 2; ++b2) {
                Complex pinched = 0.0;
                for (const ComplexMatrix& p : proj) {
                  for (Eigen::Index c = 0; c < 2; ++c) {
                    for (Eigen::Index c2 = 0; c2 < 2; ++c2) {
                      pinched += p(b, c) * at(a, c, a2, c2) * p(c2, b2);
                    }
                  }
                }
                sq += std::norm(at(a, b, a2, b2) - pinched);
              }
            }
          }
        }
        value = std::sqrt(sq);
      }
      best = std::max(best, value);
    }
  }
  return best;
}

}  // namespace minl
