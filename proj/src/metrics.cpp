#include "skewlqu/metrics.hpp"

#include <algorithm>
#include <array>

namespace skewlqu {

namespace {

double clamp_noise(double v) { return (v < 0.0 && v >= -kClampWindow) ? 0.0 : v; }

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + ": dimensions " + std::to_string(a) + " and " + std::to_string(b));
  }
}

}  // namespace

const std::array<CMatrix, 3>& pauli_matrices() {
  static const std::array<CMatrix, 3> paulis = [] {
    std::array<CMatrix, 3> p;
    p[0] = CMatrix::Zero(2, 2);
    p[0](0, 1) = p[0](1, 0) = 1.0;
    p[1] = CMatrix::Zero(2, 2);
    p[1](0, 1) = Complex(0, -1);
    p[1](1, 0) = Complex(0, 1);
    p[2] = CMatrix::Zero(2, 2);
    p[2](0, 0) = 1.0;
    p[2](1, 1) = -1.0;
    return p;
  }();
  return paulis;
}

double skew_information_from_sqrt(const CMatrix& rho, const CMatrix& sqrt_rho, const CMatrix& x) {
  const CMatrix sx = sqrt_rho * x;
  const double first = trace_of_product(rho, x * x).real();
  const double second = trace_of_product(sx, sx).real();
  return clamp_noise(first - second);
}

double skew_information(const DensityMatrix& rho, const Observable& x) {
  require_same_dim(rho.dim(), x.dim(), "skew_information");
  return skew_information_from_sqrt(rho.matrix(), sqrtm_psd(rho.matrix()), x.matrix());
}

double variance(const DensityMatrix& rho, const Observable& x) {
  require_same_dim(rho.dim(), x.dim(), "variance");
  const double mean = trace_of_product(rho.matrix(), x.matrix()).real();
  const double second = trace_of_product(rho.matrix(), x.matrix() * x.matrix()).real();
  return clamp_noise(second - mean * mean);
}

double q_total(const DensityMatrix& rho, const ObservableBasis& basis) {
  require_same_dim(rho.dim(), basis.dim(), "q_total");
  const CMatrix s = sqrtm_psd(rho.matrix());
  double sum = 0.0;
  for (const auto& x : basis.elements()) sum += skew_information_from_sqrt(rho.matrix(), s, x);
  return sum;
}

double q_local(const BipartiteState& rho_ab, Subsystem side, const ObservableBasis& basis) {
  require_same_dim(rho_ab.dims().of(side), basis.dim(), "q_local");
  const CMatrix s = sqrtm_psd(rho_ab.matrix());
  double sum = 0.0;
  for (const auto& x : basis.elements()) {
    sum += skew_information_from_sqrt(rho_ab.matrix(), s, embed_local(x, rho_ab.dims(), side));
  }
  return sum;
}

LquResult lqu(const BipartiteState& rho_ab, const RVector& spectrum, Subsystem side, const LquOptions& opts) {
  const Eigen::Index n = rho_ab.dims().of(side);
  if (spectrum.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "spectrum has " + std::to_string(spectrum.size()) +
                                                  " values, subsystem dimension is " + std::to_string(n));
  }
  require_nondegenerate(spectrum);

  const CMatrix& rho = rho_ab.matrix();
  const CMatrix s = sqrtm_psd(rho);
  const CMatrix rho_side = partial_trace(rho, rho_ab.dims(), other(side));
  const CMatrix lambda = spectrum.cast<Complex>().asDiagonal();
  const CMatrix lambda_sq = spectrum.array().square().matrix().cast<Complex>().asDiagonal();

  // Tr(rho (K^2 x I)) reduces to the marginal; only the cross term needs the joint space.
  auto objective = [&](const CMatrix& u) {
    const CMatrix k = u * lambda * u.adjoint();
    const double first = trace_of_product(rho_side, u * lambda_sq * u.adjoint()).real();
    const CMatrix sk = s * embed_local(k, rho_ab.dims(), side);
    return first - trace_of_product(sk, sk).real();
  };

  std::vector<CMatrix> seeds;
  seeds.reserve(opts.seeds.size());
  for (const auto& k : opts.seeds) {
    if (k.dim() != n) throw Error(ErrorKind::DimensionMismatch, "seed observable has the wrong dimension");
    seeds.push_back(k.eigenbasis());
  }

  const auto found = minimize_over_unitaries(n, objective, seeds, opts.search());
  NondegenerateObservable minimizer(spectrum, found.unitary);
  const double value = clamp_noise(found.value);
  return LquResult{value, std::move(minimizer), found.restarts_used, found.converged};
}

double lqu_2xd(const BipartiteState& rho_ab) {
  if (rho_ab.n_a() != 2) {
    throw Error(ErrorKind::DimensionMismatch, "closed-form LQU needs n_A = 2, got " + std::to_string(rho_ab.n_a()));
  }
  const CMatrix s = sqrtm_psd(rho_ab.matrix());
  std::array<CMatrix, 3> s_sigma;
  for (int i = 0; i < 3; ++i) s_sigma[i] = s * embed_local(pauli_matrices()[i], rho_ab.dims(), Subsystem::A);
  RMatrix w(3, 3);
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) w(i, j) = w(j, i) = trace_of_product(s_sigma[i], s_sigma[j]).real();
  }
  const double lambda_max = Eigen::SelfAdjointEigenSolver<RMatrix>(w, Eigen::EigenvaluesOnly).eigenvalues()(2);
  return std::clamp(1.0 - lambda_max, 0.0, 1.0 + 1e-9);
}

}  // namespace skewlqu
