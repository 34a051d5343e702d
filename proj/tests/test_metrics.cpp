#include <doctest.h>

#include "oracles.hpp"
#include "skewlqu/metrics.hpp"

using namespace skewlqu;

namespace {

CVector ket(Eigen::Index n, Eigen::Index k) {
  CVector v = CVector::Zero(n);
  v(k) = 1.0;
  return v;
}

CMatrix diag2(double a, double b) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

Observable random_observable(Eigen::Index n, std::mt19937_64& gen) {
  return Observable(oracle::random_hermitian(static_cast<int>(n), gen));
}

}  // namespace

TEST_CASE("skew information examples") {
  const Observable sx(oracle::pauli('x'));
  const Observable sz(oracle::pauli('z'));
  // I = 1/2 - sqrt(0.09) = 0.4 for diag(0.9, 0.1) against sigma_x.
  CHECK(skew_information(DensityMatrix(diag2(0.9, 0.1)), sx) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(skew_information(DensityMatrix::pure(ket(2, 0)), sx) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(skew_information(DensityMatrix::pure(ket(2, 0)), sz) == 0.0);
  CHECK(skew_information(DensityMatrix::maximally_mixed(2), sx) == 0.0);
  CHECK(variance(DensityMatrix::pure(ket(2, 0)), sx) == doctest::Approx(1.0));
  CHECK(variance(DensityMatrix(diag2(0.9, 0.1)), sz) == doctest::Approx(1.0 - 0.64));
  CHECK(variance(DensityMatrix::maximally_mixed(2), sz) == doctest::Approx(1.0));
}

TEST_CASE("skew information matches the commutator form") {
  std::mt19937_64 gen(11);
  Rng rng(11);
  for (Eigen::Index n = 2; n <= 4; ++n) {
    for (int s = 0; s < 40; ++s) {
      const auto rho = ginibre_state(n, rng);
      const auto x = random_observable(n, gen);
      const CMatrix root = oracle::sqrt_db(rho.matrix());
      CHECK(std::abs(skew_information(rho, x) - oracle::skew_commutator_form(root, x.matrix())) < 1e-9);
      CHECK(std::abs(variance(rho, x) - oracle::variance(rho.matrix(), x.matrix())) < 1e-10);
    }
  }
}

TEST_CASE("skew information bounds") {
  std::mt19937_64 gen(12);
  Rng rng(12);
  for (Eigen::Index n = 2; n <= 4; ++n) {
    for (int s = 0; s < 100; ++s) {
      const auto x = random_observable(n, gen);
      const auto rho = ginibre_state(n, rng);
      const double i = skew_information(rho, x);
      CHECK(i >= 0.0);
      CHECK(i <= variance(rho, x) + 1e-9);

      const auto pure = ginibre_state(n, rng, 1);
      CHECK(std::abs(skew_information(pure, x) - variance(pure, x)) < 1e-8);

      // A state diagonal in the eigenbasis of X commutes with it.
      const auto es = hermitian_eig(x.matrix());
      const RVector w = RVector::Random(n).cwiseAbs() + RVector::Constant(n, 0.01);
      const CMatrix d = es.eigenvectors * (w / w.sum()).cast<Complex>().asDiagonal() * es.eigenvectors.adjoint();
      CHECK(std::abs(skew_information(DensityMatrix(hermitian_part(d)), x)) < 1e-10);
    }
  }
}

TEST_CASE("skew information is convex in the state") {
  std::mt19937_64 gen(13);
  Rng rng(13);
  std::uniform_real_distribution<double> unif;
  for (int s = 0; s < 100; ++s) {
    const Eigen::Index n = 2 + s % 3;
    const auto x = random_observable(n, gen);
    const auto r1 = ginibre_state(n, rng);
    const auto r2 = ginibre_state(n, rng);
    const double t = unif(gen);
    const DensityMatrix mix(hermitian_part(t * r1.matrix() + (1 - t) * r2.matrix()));
    CHECK(skew_information(mix, x) <= t * skew_information(r1, x) + (1 - t) * skew_information(r2, x) + 1e-9);
  }
}

TEST_CASE("partial trace does not increase local skew information") {
  std::mt19937_64 gen(14);
  Rng rng(14);
  for (int s = 0; s < 100; ++s) {
    const BipartiteDims dims{2 + s % 2, 2 + (s / 2) % 2};
    const auto x = random_observable(dims.n_a, gen);
    const BipartiteState rho(ginibre_state(dims.total(), rng), dims);
    const double reduced = skew_information(rho.reduced(Subsystem::B), x);
    const double full = skew_information(rho.state(), Observable(embed_local(x.matrix(), dims, Subsystem::A)));
    CHECK(reduced <= full + 1e-9);
  }
}

TEST_CASE("skew information of a product state reduces to the factor") {
  std::mt19937_64 gen(15);
  Rng rng(15);
  for (int s = 0; s < 30; ++s) {
    const auto rho_a = ginibre_state(2, rng);
    const auto tau = ginibre_state(3, rng);
    const auto x = random_observable(2, gen);
    const auto prod = BipartiteState::product(rho_a, tau);
    const double lifted = skew_information(prod.state(), Observable(embed_local(x.matrix(), prod.dims(), Subsystem::A)));
    CHECK(std::abs(lifted - skew_information(rho_a, x)) < 1e-9);
  }
}

TEST_CASE("commuting Kraus channels do not increase skew information") {
  Rng rng(16);
  for (int s = 0; s < 50; ++s) {
    const BipartiteDims dims{2 + s % 2, 2 + (s / 2) % 2};
    const auto k = random_nondegenerate_observable(dims.n_a, rng);
    const auto phi = commuting_kraus_channel(k, dims.n_b, 1 + s % 3, rng);
    const auto sigma = ginibre_state(dims.total(), rng);
    const Observable kk(embed_local(k.matrix(), dims, Subsystem::A));
    CHECK(skew_information(apply_channel(phi, sigma), kk) <= skew_information(sigma, kk) + 1e-9);
  }
}

TEST_CASE("q_total and q_local against closed forms") {
  Rng rng(17);
  for (Eigen::Index n = 1; n <= 5; ++n) {
    const auto basis = gell_mann_basis(n);
    for (int s = 0; s < 20; ++s) {
      const auto rho = ginibre_state(n, rng);
      CHECK(std::abs(q_total(rho, basis) - oracle::q_total_closed(rho.matrix())) < 1e-8);
    }
  }
  CHECK(q_total(DensityMatrix::maximally_mixed(3), gell_mann_basis(3)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(q_total(ginibre_state(3, rng, 1), gell_mann_basis(3)) - 2.0) < 1e-9);

  for (const BipartiteDims dims : {BipartiteDims{2, 2}, BipartiteDims{2, 3}, BipartiteDims{3, 2}}) {
    const auto ga = gell_mann_basis(dims.n_a);
    const auto gb = gell_mann_basis(dims.n_b);
    for (int s = 0; s < 20; ++s) {
      const BipartiteState rho(ginibre_state(dims.total(), rng), dims);
      const CMatrix root = oracle::sqrt_svd(rho.state().matrix());
      const int na = int(dims.n_a), nb = int(dims.n_b);
      CHECK(std::abs(q_local(rho, Subsystem::A, ga) - oracle::q_local_closed(root, na, nb, true)) < 1e-8);
      CHECK(std::abs(q_local(rho, Subsystem::B, gb) - oracle::q_local_closed(root, na, nb, false)) < 1e-8);
    }
  }

  const BipartiteState bell(DensityMatrix(oracle::bell_density()), {2, 2});
  CHECK(std::abs(q_local(bell, Subsystem::B, gell_mann_basis(2)) - 1.5) < 1e-9);
  CHECK(std::abs(q_local(bell, Subsystem::A, gell_mann_basis(2)) - 1.5) < 1e-9);
  CHECK_THROWS_AS(q_local(bell, Subsystem::A, gell_mann_basis(3)), Error);
}

TEST_CASE("lqu closed form") {
  const BipartiteState bell(DensityMatrix(oracle::bell_density()), {2, 2});
  CHECK(std::abs(lqu_2xd(bell) - 1.0) < 1e-9);
  Rng rng(18);
  const auto prod = BipartiteState::product(ginibre_state(2, rng), ginibre_state(3, rng));
  CHECK(std::abs(lqu_2xd(prod)) < 1e-9);
  CHECK_THROWS_AS(lqu_2xd(BipartiteState(ginibre_state(6, rng), {3, 2})), Error);

  // 0 <= LQU <= skew information along any Pauli direction.
  for (int s = 0; s < 20; ++s) {
    const BipartiteState rho(ginibre_state(4, rng), {2, 2});
    const double value = lqu_2xd(rho);
    CHECK(value >= 0.0);
    for (const auto& p : pauli_matrices()) {
      CHECK(value <= skew_information(rho.state(), Observable(embed_local(p, rho.dims(), Subsystem::A))) + 1e-9);
    }
  }
}

TEST_CASE("numerical lqu") {
  const RVector pm = default_spectrum(2);
  const BipartiteState bell(DensityMatrix(oracle::bell_density()), {2, 2});
  const auto bell_result = lqu(bell, pm, Subsystem::A);
  CHECK(std::abs(bell_result.value - 1.0) < 1e-6);

  Rng rng(19);
  LquOptions opts;
  opts.restarts = 8;
  for (int s = 0; s < 10; ++s) {
    const BipartiteDims dims{2, 2 + s % 2};
    const BipartiteState rho(ginibre_state(dims.total(), rng), dims);
    opts.seed = std::uint64_t(s);
    const auto found = lqu(rho, pm, Subsystem::A, opts);
    CHECK(std::abs(found.value - lqu_2xd(rho)) < 1e-6);
    // The reported value is attained by the minimizer.
    const Observable k(embed_local(found.minimizer.matrix(), dims, Subsystem::A));
    CHECK(std::abs(skew_information(rho.state(), k) - found.value) < 1e-9);
  }

  const auto prod = BipartiteState::product(ginibre_state(3, rng), ginibre_state(2, rng));
  CHECK(lqu(prod, default_spectrum(3), Subsystem::A, opts).value < 1e-7);
  CHECK(lqu(prod, default_spectrum(2), Subsystem::B, opts).value < 1e-7);

  // Classical-quantum: sum_k p_k |k><k| (x) tau_k.
  CMatrix cq = CMatrix::Zero(6, 6);
  cq.block(0, 0, 2, 2) = 0.3 * ginibre_state(2, rng).matrix();
  cq.block(2, 2, 2, 2) = 0.5 * ginibre_state(2, rng).matrix();
  cq.block(4, 4, 2, 2) = 0.2 * ginibre_state(2, rng).matrix();
  const BipartiteState cq_state(DensityMatrix(hermitian_part(cq)), {3, 2});
  CHECK(lqu(cq_state, default_spectrum(3), Subsystem::A, opts).value < 1e-7);

  RVector degenerate(2);
  degenerate << 0.5, 0.5;
  CHECK_THROWS_AS(lqu(bell, degenerate, Subsystem::A), Error);
  CHECK_THROWS_AS(lqu(bell, default_spectrum(3), Subsystem::A), Error);
}
