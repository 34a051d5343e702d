#include "skewlqu/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <optional>
#include <thread>

namespace skewlqu {

namespace {

enum Stream : std::uint64_t {
  kStateA = 1,
  kStateB = 2,
  kObservable = 3,
  kChannel = 4,
  kOptimizer = 5,
  kJointState = 6,
  kBasis = 7,
};

Rng stream(const HarnessConfig& c, std::uint64_t trial, Stream s) { return Rng{c.master_seed, trial, s}; }

std::string sanitize(std::string s) {
  std::replace_if(s.begin(), s.end(), [](char ch) { return ch == ',' || ch == '\n' || ch == '\r' || ch == '"'; }, ';');
  return s;
}

LquOptions lqu_options(const HarnessConfig& c, std::uint64_t seed) {
  LquOptions o;
  o.restarts = c.restarts;
  o.tol = c.opt_tol;
  o.max_iters = c.max_iters;
  o.seed = seed;
  return o;
}

SteeringOptions steering_options(const HarnessConfig& c, std::uint64_t seed) {
  return SteeringOptions{c.restarts, c.opt_tol, c.max_iters, seed};
}

// Runs one trial body, timing it and converting construction errors into a failed record.
template <typename Body>
std::vector<TrialRecord> guarded_trial(const HarnessConfig& c, std::uint64_t trial, const char* claim_id,
                                       Body&& body) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<TrialRecord> out;
  try {
    out = body();
  } catch (const std::exception& e) {
    TrialRecord failed;
    failed.trial_index = trial;
    failed.master_seed = c.master_seed;
    failed.n_a = c.n_a;
    failed.n_b = c.n_b;
    failed.claim_id = claim_id;
    failed.error = sanitize(e.what());
    out = {failed};
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  for (auto& r : out) r.wall_time_ms = ms;
  return out;
}

template <typename TrialFn>
VerificationRun run_harness(const char* claim_id, const HarnessConfig& c, TrialFn&& trial_fn) {
  if (c.trials < 1) throw Error(ErrorKind::UsageError, "trials must be >= 1");
  std::vector<std::vector<TrialRecord>> per_trial(c.trials);
  parallel_for(c.trials, c.workers, [&](std::size_t t) {
    per_trial[t] = guarded_trial(c, t, claim_id, [&] { return trial_fn(static_cast<std::uint64_t>(t)); });
  });
  VerificationRun run;
  for (auto& recs : per_trial) {
    for (auto& r : recs) run.records.push_back(std::move(r));
  }
  run.report = summarize(claim_id, c, run.records);
  return run;
}

}  // namespace

TrialRecord make_record(std::uint64_t trial_index, std::uint64_t master_seed, BipartiteDims dims,
                        std::string claim_id, double lhs, double rhs, double tol) {
  TrialRecord r;
  r.trial_index = trial_index;
  r.master_seed = master_seed;
  r.n_a = dims.n_a;
  r.n_b = dims.n_b;
  r.claim_id = std::move(claim_id);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.violated = r.margin < -tol;
  return r;
}

std::string to_string(Claim2Mode mode) { return mode == Claim2Mode::ArgminK ? "argmin_K" : "random_K"; }

VerificationReport summarize(std::string claim_id, const HarnessConfig& config,
                             const std::vector<TrialRecord>& records) {
  VerificationReport report;
  report.claim_id = std::move(claim_id);
  report.config = config;
  report.trials = config.trials;
  report.min_margin = std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    if (r.failed()) {
      ++report.failed;
      continue;
    }
    ++report.checks;
    if (r.violated) ++report.violations;
    report.min_margin = std::min(report.min_margin, r.margin);
  }
  if (report.checks == 0) report.min_margin = 0.0;
  return report;
}

VerificationRun verify_claim1(const HarnessConfig& c) {
  if (c.n_a < 2 || c.n_b < 1) throw Error(ErrorKind::DimensionMismatch, "claim1 needs n_A >= 2 and n_B >= 1");
  const BipartiteDims dims{c.n_a, c.n_b};
  return run_harness(claims::kClaim1, c, [&](std::uint64_t t) {
    auto rng_a = stream(c, t, kStateA);
    auto rng_b = stream(c, t, kStateB);
    auto rng_k = stream(c, t, kObservable);
    auto rng_phi = stream(c, t, kChannel);
    const DensityMatrix rho_a = ginibre_state(c.n_a, rng_a);
    const DensityMatrix tau_b = ginibre_state(c.n_b, rng_b);
    const NondegenerateObservable k_a = random_nondegenerate_observable(c.n_a, rng_k);
    const KrausChannel phi = commuting_kraus_channel(k_a, c.n_b, c.kraus_count, rng_phi);

    const BipartiteState sigma = BipartiteState::product(rho_a, tau_b);
    const BipartiteState out(apply_channel(phi, sigma.state()), dims);

    LquOptions opts = lqu_options(c, derive_seed({c.master_seed, t, kOptimizer}));
    opts.seeds.push_back(k_a);
    const double lhs = lqu(out, k_a.spectrum(), Subsystem::A, opts).value;
    const double rhs = skew_information(rho_a, k_a.observable());

    const Observable k_joint(embed_local(k_a.matrix(), dims, Subsystem::A));
    const double after = skew_information(out.state(), k_joint);
    const double before = skew_information(sigma.state(), k_joint);
    return std::vector<TrialRecord>{
        make_record(t, c.master_seed, dims, claims::kClaim1, lhs, rhs, c.tol),
        make_record(t, c.master_seed, dims, claims::kClaim1Monotonicity, after, before, c.tol),
    };
  });
}

BoundEvaluation evaluate_claim2(const BipartiteState& rho_ab, Claim2Mode mode, const HarnessConfig& c, Rng& rng) {
  const std::uint64_t lqu_seed = rng.next_u64();
  const std::uint64_t steer_seed = rng.next_u64();
  BoundEvaluation eval;
  std::optional<NondegenerateObservable> k_b;
  if (mode == Claim2Mode::ArgminK) {
    auto found = lqu(rho_ab, default_spectrum(rho_ab.n_b()), Subsystem::B, lqu_options(c, lqu_seed));
    eval.rhs = found.value;
    k_b = std::move(found.minimizer);
  } else {
    k_b = random_nondegenerate_observable(rho_ab.n_b(), rng);
    eval.rhs = skew_information(rho_ab.state(), Observable(embed_local(k_b->matrix(), rho_ab.dims(), Subsystem::B)));
  }
  eval.lhs = steering_induced_skew(rho_ab, *k_b, steering_options(c, steer_seed)).value;
  return eval;
}

VerificationRun verify_claim2(const HarnessConfig& c) {
  if (c.n_a < 2 || c.n_b < 2) throw Error(ErrorKind::DimensionMismatch, "claim2 needs n_A, n_B >= 2");
  const BipartiteDims dims{c.n_a, c.n_b};
  return run_harness(claims::kClaim2, c, [&](std::uint64_t t) {
    auto rng_state = stream(c, t, kJointState);
    auto rng = stream(c, t, kOptimizer);
    const BipartiteState rho(ginibre_state(dims.total(), rng_state), dims);
    const auto e = evaluate_claim2(rho, c.mode, c, rng);
    return std::vector<TrialRecord>{make_record(t, c.master_seed, dims, claims::kClaim2, e.lhs, e.rhs, c.tol)};
  });
}

VerificationRun verify_claim2_lemma(const HarnessConfig& c) {
  if (c.n_a < 2 || c.n_b < 2) throw Error(ErrorKind::DimensionMismatch, "claim2 lemma needs n_A, n_B >= 2");
  const BipartiteDims dims{c.n_a, c.n_b};
  return run_harness(claims::kClaim2Lemma, c, [&](std::uint64_t t) {
    auto rng_state = stream(c, t, kJointState);
    auto rng_basis = stream(c, t, kBasis);
    auto rng_k = stream(c, t, kObservable);
    const BipartiteState rho(ginibre_state(dims.total(), rng_state), dims);
    const MeasurementBasis theta(haar_unitary(c.n_a, rng_basis));
    const auto k_b = random_nondegenerate_observable(c.n_b, rng_k);
    const double lhs = steered_skew_sum(rho, theta, k_b);
    const double rhs = skew_information(rho.state(), Observable(embed_local(k_b.matrix(), dims, Subsystem::B)));
    return std::vector<TrialRecord>{make_record(t, c.master_seed, dims, claims::kClaim2Lemma, lhs, rhs, c.tol)};
  });
}

BoundEvaluation evaluate_avg_bound(const BipartiteState& rho_ab, std::size_t bases, Rng& rng) {
  const ObservableBasis basis_b = gell_mann_basis(rho_ab.n_b());
  BoundEvaluation eval;
  eval.rhs = q_local(rho_ab, Subsystem::B, basis_b);
  eval.lhs = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < std::max<std::size_t>(bases, 1); ++k) {
    const MeasurementBasis theta(haar_unitary(rho_ab.n_a(), rng));
    eval.lhs = std::max(eval.lhs, steered_q_sum(rho_ab, theta, basis_b));
  }
  return eval;
}

VerificationRun verify_avg_bound(const HarnessConfig& c) {
  if (c.n_a < 2 || c.n_b < 2) throw Error(ErrorKind::DimensionMismatch, "averaged bound needs n_A, n_B >= 2");
  const BipartiteDims dims{c.n_a, c.n_b};
  return run_harness(claims::kAverage, c, [&](std::uint64_t t) {
    auto rng_state = stream(c, t, kJointState);
    auto rng_basis = stream(c, t, kBasis);
    const BipartiteState rho(ginibre_state(dims.total(), rng_state), dims);
    const auto e = evaluate_avg_bound(rho, c.bases_per_trial, rng_basis);
    return std::vector<TrialRecord>{make_record(t, c.master_seed, dims, claims::kAverage, e.lhs, e.rhs, c.tol)};
  });
}

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (first_error) std::rethrow_exception(first_error);
}

unsigned workers_from_env(unsigned fallback) {
  const char* value = std::getenv("UQ_THREADS");
  if (value == nullptr) return fallback;
  char* end = nullptr;
  const long n = std::strtol(value, &end, 10);
  if (end == value || *end != '\0' || n < 1) return fallback;
  return static_cast<unsigned>(n);
}

}  // namespace skewlqu
