#pragma once

// Wigner-Yanase skew information and the quantities built from it.

#include <array>
#include <vector>

#include "skewlqu/optimize.hpp"
#include "skewlqu/quantum.hpp"

namespace skewlqu {

inline constexpr double kClampWindow = 1e-10;

/// I(rho, X) = Tr(rho X^2) - Tr(sqrt(rho) X sqrt(rho) X), i.e. -1/2 Tr [sqrt(rho), X]^2.
/// Values in [-1e-10, 0) are reported as 0.
double skew_information(const DensityMatrix& rho, const Observable& x);

/// Same, with sqrt(rho) already known. `rho` need not be normalized; the result
/// is linear in that normalization.
double skew_information_from_sqrt(const CMatrix& rho, const CMatrix& sqrt_rho, const CMatrix& x);

/// V(rho, X) = Tr(rho X^2) - (Tr rho X)^2.
double variance(const DensityMatrix& rho, const Observable& x);

/// Q(rho) = sum_i I(rho, X^i) over an orthonormal observable basis.
double q_total(const DensityMatrix& rho, const ObservableBasis& basis);

/// Q_S(rho_AB) = sum_i I(rho_AB, X^i on side S, identity on the other side).
double q_local(const BipartiteState& rho_ab, Subsystem side, const ObservableBasis& basis);

struct LquOptions {
  int restarts = 16;
  double tol = 1e-8;
  int max_iters = 2000;
  std::uint64_t seed = 0;
  /// Extra starting points; each contributes its eigenbasis as a start.
  std::vector<NondegenerateObservable> seeds;

  UnitarySearchOptions search() const { return {restarts, tol, max_iters, seed}; }
};

struct LquResult {
  double value = 0.0;
  NondegenerateObservable minimizer;
  int restarts_used = 0;
  bool converged = false;
};

/// Local quantum uncertainty: min over K = U diag(spectrum) U^dagger of I(rho_AB, K on `side`).
/// The returned value is attained by the returned minimizer, so it bounds the true
/// minimum from above.
LquResult lqu(const BipartiteState& rho_ab, const RVector& spectrum, Subsystem side, const LquOptions& opts = {});

/// Closed form for n_A = 2 and spectrum {-1, +1}: 1 - lambda_max(W) with
/// W_ij = Tr[sqrt(rho) (s_i x I) sqrt(rho) (s_j x I)] over the Pauli matrices.
double lqu_2xd(const BipartiteState& rho_ab);

/// Pauli matrices x, y, z.
const std::array<CMatrix, 3>& pauli_matrices();

}  // namespace skewlqu
