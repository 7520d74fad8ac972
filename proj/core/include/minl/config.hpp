#pragma once

namespace minl {

/// Numerical tolerances shared by every module. Tests read the same record,
/// so a value changed here moves the library and its checks together.
struct Tolerances {
  /// Largest entrywise |H - H^dagger| accepted as Hermitian.
  double hermiticity = 1e-10;
  /// Largest |Tr(rho) - 1| accepted for a density matrix.
  double trace = 1e-10;
  /// Most negative eigenvalue accepted (then clipped to zero).
  double positivity = 1e-10;
  /// Largest | ||psi|| - 1 | accepted for a pure state.
  double normalization = 1e-12;
  /// Overlap of rho with ker(sigma) above which S(rho||sigma) is infinite.
  double support_overlap = 1e-10;
  /// Eigenvalues at or below this are treated as outside the support.
  double support_eigenvalue = 1e-12;
  /// Outcomes with probability at or below this are excluded from averages.
  double negligible_probability = 1e-12;
  /// Adjacent marginal eigenvalues closer than this share a spectral block.
  double cluster = 1e-8;
  /// Largest ||[rho_B, Pi_k]|| accepted for an invariant measurement.
  double commutation = 1e-9;
  /// Purity threshold for the pure-state shortcut: lambda_max > 1 - purity.
  double purity = 1e-10;
  /// Eigenvalues above this count towards the rank in purify().
  double rank = 1e-12;
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace minl
