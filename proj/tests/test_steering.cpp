#include <doctest.h>

#include "oracles.hpp"
#include "skewlqu/steering.hpp"

using namespace skewlqu;

namespace {

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

CMatrix hadamard() {
  CMatrix h(2, 2);
  h << 1, 1, 1, -1;
  return h * M_SQRT1_2;
}

BipartiteState bell() { return BipartiteState(DensityMatrix(oracle::bell_density()), {2, 2}); }

NondegenerateObservable sigma_z() { return NondegenerateObservable::diagonal(default_spectrum(2)); }

CVector ket(Eigen::Index n, Eigen::Index k) {
  CVector v = CVector::Zero(n);
  v(k) = 1.0;
  return v;
}

}  // namespace

TEST_CASE("MeasurementBasis validation") {
  CHECK_THROWS_AS(MeasurementBasis(CMatrix::Identity(2, 2) * 2.0), Error);
  CHECK_NOTHROW(MeasurementBasis(hadamard()));
  CHECK(max_abs(MeasurementBasis::computational(3).projector(1) - ket(3, 1) * ket(3, 1).adjoint()) == 0.0);
}

TEST_CASE("steering a Bell state in the computational basis") {
  const auto ens = steer(bell(), MeasurementBasis::computational(2));
  REQUIRE(ens.outcomes.size() == 2);
  for (const auto& o : ens.outcomes) {
    CHECK(o.probability == doctest::Approx(0.5));
    const CVector k = ket(2, o.index);
    CHECK(max_abs(o.conditional.matrix() - k * k.adjoint()) < 1e-12);
  }
  CHECK(ens.skipped.empty());
}

TEST_CASE("steering a product state leaves B unchanged") {
  Rng rng(21);
  const auto tau = ginibre_state(3, rng);
  const auto prod = BipartiteState::product(ginibre_state(2, rng), tau);
  const auto ens = steer(prod, MeasurementBasis(haar_unitary(2, rng)));
  for (const auto& o : ens.outcomes) CHECK(max_abs(o.conditional.matrix() - tau.matrix()) < 1e-10);
}

TEST_CASE("steering probabilities sum to one") {
  Rng rng(22);
  for (int s = 0; s < 50; ++s) {
    const BipartiteDims dims{2 + s % 2, 2 + (s / 2) % 2};
    const BipartiteState rho(ginibre_state(dims.total(), rng), dims);
    const auto ens = steer(rho, MeasurementBasis(haar_unitary(dims.n_a, rng)));
    CHECK(std::abs(ens.total_probability() - 1.0) < 1e-10);
    // Conditionals average back to the reduced state.
    CMatrix avg = CMatrix::Zero(dims.n_b, dims.n_b);
    for (const auto& o : ens.outcomes) avg += o.probability * o.conditional.matrix();
    CHECK(max_abs(avg - oracle::ptrace(rho.matrix(), int(dims.n_a), int(dims.n_b), true)) < 1e-10);
  }
}

TEST_CASE("negligible outcomes are skipped") {
  // |0><0| (x) tau: outcome 1 in the computational basis has probability 0.
  Rng rng(23);
  const auto prod = BipartiteState::product(DensityMatrix::pure(ket(2, 0)), ginibre_state(2, rng));
  const auto ens = steer(prod, MeasurementBasis::computational(2));
  REQUIRE(ens.outcomes.size() == 1);
  REQUIRE(ens.skipped.size() == 1);
  CHECK(ens.skipped[0].index == 1);
  CHECK(std::isfinite(steered_skew_sum(prod, MeasurementBasis::computational(2), sigma_z())));
}

TEST_CASE("steered skew sum examples") {
  // x-basis on A steers B into |+>, |->: each has I(., sigma_z) = 1.
  CHECK(std::abs(steered_skew_sum(bell(), MeasurementBasis(hadamard()), sigma_z()) - 1.0) < 1e-9);
  // z-basis steers into eigenstates of sigma_z.
  CHECK(std::abs(steered_skew_sum(bell(), MeasurementBasis::computational(2), sigma_z())) < 1e-9);
}

TEST_CASE("steered sums match the explicit conditional states") {
  Rng rng(24);
  std::mt19937_64 gen(24);
  for (int s = 0; s < 30; ++s) {
    const BipartiteDims dims{2 + s % 2, 2 + (s / 2) % 2};
    const BipartiteState rho(ginibre_state(dims.total(), rng), dims);
    const MeasurementBasis theta(haar_unitary(dims.n_a, rng));
    const auto k = random_nondegenerate_observable(dims.n_b, rng);
    double skew = 0.0, q = 0.0;
    for (Eigen::Index i = 0; i < dims.n_a; ++i) {
      const CMatrix proj = oracle::kron(theta.projector(i), CMatrix::Identity(dims.n_b, dims.n_b));
      const CMatrix block = oracle::ptrace(proj * rho.matrix() * proj, int(dims.n_a), int(dims.n_b), true);
      const double p = block.trace().real();
      const CMatrix cond = block / p;
      const CMatrix root = oracle::sqrt_db(cond);
      skew += p * oracle::skew_commutator_form(root, k.matrix());
      q += p * oracle::q_total_closed(cond);
    }
    CHECK(std::abs(steered_skew_sum(rho, theta, k) - skew) < 1e-9);
    CHECK(std::abs(steered_q_sum(rho, theta, gell_mann_basis(dims.n_b)) - q) < 1e-9);
  }
}

TEST_CASE("steered sums are invariant under reordering the basis") {
  Rng rng(25);
  const BipartiteState rho(ginibre_state(9, rng), {3, 3});
  const CMatrix u = haar_unitary(3, rng);
  CMatrix permuted(3, 3);
  permuted << u.col(2), u.col(0), u.col(1);
  const auto k = random_nondegenerate_observable(3, rng);
  CHECK(std::abs(steered_skew_sum(rho, MeasurementBasis(u), k) - steered_skew_sum(rho, MeasurementBasis(permuted), k)) <
        1e-12);
  // Column phases do not change the projectors either.
  CMatrix phased = u;
  phased.col(1) *= std::polar(1.0, 0.7);
  CHECK(std::abs(steered_skew_sum(rho, MeasurementBasis(u), k) - steered_skew_sum(rho, MeasurementBasis(phased), k)) <
        1e-12);
}

TEST_CASE("per-basis steering bound") {
  Rng rng(26);
  for (int s = 0; s < 100; ++s) {
    const BipartiteDims dims{2 + s % 2, 2 + (s / 2) % 2};
    const BipartiteState rho(ginibre_state(dims.total(), rng), dims);
    const MeasurementBasis theta(haar_unitary(dims.n_a, rng));
    const auto k = random_nondegenerate_observable(dims.n_b, rng);
    const double rhs = skew_information(rho.state(), Observable(embed_local(k.matrix(), dims, Subsystem::B)));
    CHECK(steered_skew_sum(rho, theta, k) <= rhs + 1e-9);
    CHECK(steered_q_sum(rho, theta, gell_mann_basis(dims.n_b)) <=
          q_local(rho, Subsystem::B, gell_mann_basis(dims.n_b)) + 1e-9);
  }
}

TEST_CASE("steering-induced maxima") {
  SteeringOptions opts;
  opts.restarts = 6;
  const auto b = steering_induced_skew(bell(), sigma_z(), opts);
  CHECK(std::abs(b.value - 1.0) < 1e-6);
  CHECK(std::abs(steered_skew_sum(bell(), b.maximizer, sigma_z()) - b.value) < 1e-12);

  const auto avg = average_steering_induced_q(bell(), gell_mann_basis(2), opts);
  CHECK(std::abs(avg.value - 1.0) < 1e-6);

  Rng rng(27);
  const auto tau = ginibre_state(2, rng);
  const auto prod = BipartiteState::product(ginibre_state(2, rng), tau);
  const auto k = random_nondegenerate_observable(2, rng);
  CHECK(std::abs(steering_induced_skew(prod, k, opts).value - skew_information(tau, Observable(k.matrix()))) < 1e-9);
  CHECK(std::abs(average_steering_induced_q(prod, gell_mann_basis(2), opts).value -
                 q_total(tau, gell_mann_basis(2))) < 1e-9);
}
