#pragma once

// Monte Carlo verification of the skew-information / LQU bounds.
//
// Every trial draws from its own stream Rng{master_seed, trial_index, ...}, and
// records are gathered by trial index, so reports do not depend on how many
// workers ran them.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "skewlqu/steering.hpp"

namespace skewlqu {

namespace claims {
inline constexpr const char* kClaim1 = "claim1";
inline constexpr const char* kClaim1Monotonicity = "claim1.monotonicity";
inline constexpr const char* kClaim2 = "claim2";
inline constexpr const char* kClaim2Lemma = "claim2.lemma";
inline constexpr const char* kAverage = "avg";
}  // namespace claims

struct TrialRecord {
  std::uint64_t trial_index = 0;
  std::uint64_t master_seed = 0;  // seed tuple is (master_seed, trial_index)
  Eigen::Index n_a = 0;
  Eigen::Index n_b = 0;
  std::string claim_id;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  bool violated = false;
  double wall_time_ms = 0.0;
  std::string error;  // non-empty for a failed trial

  bool failed() const { return !error.empty(); }
  bool operator==(const TrialRecord&) const = default;
};

/// Builds a record with margin and violated derived from lhs, rhs and tol.
TrialRecord make_record(std::uint64_t trial_index, std::uint64_t master_seed, BipartiteDims dims,
                        std::string claim_id, double lhs, double rhs, double tol);

enum class Claim2Mode { ArgminK, RandomK };

std::string to_string(Claim2Mode mode);

struct HarnessConfig {
  Eigen::Index n_a = 2;
  Eigen::Index n_b = 2;
  std::size_t trials = 1000;
  double tol = 1e-7;
  std::uint64_t master_seed = 42;
  int restarts = 16;
  double opt_tol = 1e-8;
  int max_iters = 2000;
  std::size_t kraus_count = 2;
  std::size_t bases_per_trial = 20;
  Claim2Mode mode = Claim2Mode::ArgminK;
  /// 0 means hardware concurrency.
  unsigned workers = 1;
};

struct VerificationReport {
  std::string claim_id;
  HarnessConfig config;
  std::size_t trials = 0;
  std::size_t checks = 0;  // records that produced a comparison
  std::size_t violations = 0;
  std::size_t failed = 0;
  double min_margin = 0.0;

  bool passed() const { return violations == 0 && failed == 0; }
};

struct VerificationRun {
  VerificationReport report;
  std::vector<TrialRecord> records;
};

/// Aggregates records into a report; violations counts violated, non-failed records.
VerificationReport summarize(std::string claim_id, const HarnessConfig& config,
                             const std::vector<TrialRecord>& records);

/// LQU created by a commuting-Kraus channel on rho_A (x) tau_B versus I(rho_A, K_A).
/// Each trial also emits a claim1.monotonicity record comparing I(Phi(sigma), K x I)
/// with I(sigma, K x I).
VerificationRun verify_claim1(const HarnessConfig& config);

/// Steering-induced skew information versus LQU (argmin mode) or versus
/// I(rho_AB, I x K_B) for a random K_B.
VerificationRun verify_claim2(const HarnessConfig& config);

/// Optimization-free check of sum_i p_i I(rho_B^i, K_B) <= I(rho_AB, I x K_B) for
/// random (rho_AB, basis, K_B).
VerificationRun verify_claim2_lemma(const HarnessConfig& config);

/// max over sampled bases of sum_i p_i Q(rho_B^i) versus Q_B(rho_AB).
VerificationRun verify_avg_bound(const HarnessConfig& config);

struct BoundEvaluation {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Single-state evaluation of the claim 2 comparison used by verify_claim2.
BoundEvaluation evaluate_claim2(const BipartiteState& rho_ab, Claim2Mode mode, const HarnessConfig& config, Rng& rng);

/// Single-state evaluation of the averaged bound used by verify_avg_bound.
BoundEvaluation evaluate_avg_bound(const BipartiteState& rho_ab, std::size_t bases, Rng& rng);

/// Runs `fn(t)` for t in [0, count) on up to `workers` threads.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn);

/// Worker count from UQ_THREADS, or `fallback` when unset or invalid.
unsigned workers_from_env(unsigned fallback);

}  // namespace skewlqu
