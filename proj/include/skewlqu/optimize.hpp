#pragma once

// Gradient-free minimization over the unitary group.
//
// Each restart works in a local chart U(theta) = U0 * exp(i H(theta)) around
// its start point U0, where H(theta) is the Hermitian matrix whose n^2 real
// coordinates are theta. The chart is re-centered on the incumbent whenever the
// simplex collapses, so the search never drifts far from theta = 0.

#include <functional>
#include <span>
#include <vector>

#include "skewlqu/matcore.hpp"
#include "skewlqu/rng.hpp"

namespace skewlqu {

struct NelderMeadOptions {
  double tol = 1e-8;          // stop when f_max - f_min <= tol and the simplex is small
  double initial_step = 0.5;  // edge length of the starting simplex
  int max_iters = 2000;
};

struct NelderMeadResult {
  RVector x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Nelder-Mead with dimension-adaptive coefficients (reflection 1,
/// expansion 1 + 2/d, contraction 0.75 - 1/(2d), shrink 1 - 1/d).
NelderMeadResult nelder_mead(const std::function<double(const RVector&)>& f, const RVector& x0,
                             const NelderMeadOptions& opts);

/// Hermitian matrix with the given n^2 real coordinates: the first n are the
/// diagonal, the remaining pairs are real/imaginary parts of the upper triangle.
CMatrix hermitian_from_coordinates(const RVector& theta, Eigen::Index n);

/// exp(i H) for Hermitian H.
CMatrix unitary_exp(const CMatrix& hermitian);

struct UnitarySearchOptions {
  int restarts = 16;
  double tol = 1e-8;
  int max_iters = 2000;  // Nelder-Mead iterations per restart, across re-centerings
  std::uint64_t seed = 0;
};

struct UnitarySearchResult {
  CMatrix unitary;
  double value = 0.0;
  int restarts_used = 0;
  bool converged = false;  // best two restarts agree within 10 * tol
  std::vector<double> restart_values;
};

using UnitaryObjective = std::function<double(const CMatrix&)>;

/// Minimize `f` over n x n unitaries. Starting points are `seeds` first, then
/// Haar-random unitaries drawn from `opts.seed` until `opts.restarts` starts have
/// been used. Each start is evaluated before searching, so the result is never
/// worse than any seed.
UnitarySearchResult minimize_over_unitaries(Eigen::Index n, const UnitaryObjective& f,
                                            std::span<const CMatrix> seeds, const UnitarySearchOptions& opts);

}  // namespace skewlqu
