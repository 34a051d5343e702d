#pragma once

// Steering of B by rank-one projective measurements on A.

#include <vector>

#include "skewlqu/metrics.hpp"

namespace skewlqu {

/// Outcomes with probability below this are dropped and contribute zero.
inline constexpr double kNegligibleProbability = 1e-12;

/// Rank-one projective measurement {|theta_i><theta_i|}; the columns of `unitary` are the |theta_i>.
class MeasurementBasis {
 public:
  explicit MeasurementBasis(CMatrix unitary);

  static MeasurementBasis computational(Eigen::Index n);

  const CMatrix& unitary() const { return unitary_; }
  Eigen::Index dim() const { return unitary_.rows(); }
  CMatrix projector(Eigen::Index i) const { return unitary_.col(i) * unitary_.col(i).adjoint(); }

 private:
  CMatrix unitary_;
};

struct SteeringOutcome {
  Eigen::Index index = 0;
  double probability = 0.0;
  DensityMatrix conditional;
};

struct SkippedOutcome {
  Eigen::Index index = 0;
  double probability = 0.0;
};

struct SteeringEnsemble {
  std::vector<SteeringOutcome> outcomes;
  std::vector<SkippedOutcome> skipped;

  double total_probability() const;
};

/// p_i = Tr[rho_AB (theta_i x I)], rho_B^i = <theta_i| rho_AB |theta_i> / p_i.
SteeringEnsemble steer(const BipartiteState& rho_ab, const MeasurementBasis& basis);

/// sum_i p_i I(rho_B^i, K_B) over the non-negligible outcomes.
double steered_skew_sum(const BipartiteState& rho_ab, const MeasurementBasis& basis,
                        const NondegenerateObservable& k_b);

/// sum_i p_i Q(rho_B^i) with Q taken over `basis_b`.
double steered_q_sum(const BipartiteState& rho_ab, const MeasurementBasis& basis, const ObservableBasis& basis_b);

struct SteeringOptions {
  int restarts = 16;
  double tol = 1e-8;
  int max_iters = 2000;
  std::uint64_t seed = 0;

  UnitarySearchOptions search() const { return {restarts, tol, max_iters, seed}; }
};

struct SteeringMaximum {
  double value = 0.0;  // attained at `maximizer`, hence a lower bound on the true maximum
  MeasurementBasis maximizer;
};

/// Steering-induced skew information: max over measurement bases on A of steered_skew_sum.
SteeringMaximum steering_induced_skew(const BipartiteState& rho_ab, const NondegenerateObservable& k_b,
                                      const SteeringOptions& opts = {});

/// Average steering-induced skew information: max over bases on A of steered_q_sum.
SteeringMaximum average_steering_induced_q(const BipartiteState& rho_ab, const ObservableBasis& basis_b,
                                           const SteeringOptions& opts = {});

}  // namespace skewlqu
