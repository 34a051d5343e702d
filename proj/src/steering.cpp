#include "skewlqu/steering.hpp"

#include <functional>

namespace skewlqu {

namespace {

// Unnormalized conditional block <theta| rho_AB |theta> on B.
CMatrix conditional_block(const CMatrix& rho, BipartiteDims dims, const CVector& theta) {
  const Eigen::Index nb = dims.n_b;
  CMatrix out = CMatrix::Zero(nb, nb);
  for (Eigen::Index a = 0; a < dims.n_a; ++a) {
    if (theta(a) == Complex(0.0)) continue;
    for (Eigen::Index ap = 0; ap < dims.n_a; ++ap) {
      if (theta(ap) == Complex(0.0)) continue;
      out.noalias() += (std::conj(theta(a)) * theta(ap)) * rho.block(a * nb, ap * nb, nb, nb);
    }
  }
  return hermitian_part(out);
}

void require_basis_dim(const BipartiteState& rho_ab, const MeasurementBasis& basis) {
  if (basis.dim() != rho_ab.n_a()) {
    throw Error(ErrorKind::DimensionMismatch, "measurement basis has dimension " + std::to_string(basis.dim()) +
                                                  ", subsystem A has " + std::to_string(rho_ab.n_a()));
  }
}

// sum_i f(B_i, sqrt(B_i)) over outcomes with p_i >= kNegligibleProbability, where
// B_i is the unnormalized conditional block. Terms linear in B_i equal p_i times
// the normalized quantity.
template <typename Term>
double weighted_sum(const BipartiteState& rho_ab, const CMatrix& unitary, Term&& term) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < unitary.cols(); ++i) {
    const CMatrix block = conditional_block(rho_ab.matrix(), rho_ab.dims(), unitary.col(i));
    if (block.trace().real() < kNegligibleProbability) continue;
    sum += term(block, sqrtm_psd(block));
  }
  return sum;
}

double skew_sum(const BipartiteState& rho_ab, const CMatrix& unitary, const CMatrix& k_b) {
  return weighted_sum(rho_ab, unitary, [&](const CMatrix& block, const CMatrix& root) {
    return skew_information_from_sqrt(block, root, k_b);
  });
}

double q_sum(const BipartiteState& rho_ab, const CMatrix& unitary, const ObservableBasis& basis_b) {
  return weighted_sum(rho_ab, unitary, [&](const CMatrix& block, const CMatrix& root) {
    double q = 0.0;
    for (const auto& x : basis_b.elements()) q += skew_information_from_sqrt(block, root, x);
    return q;
  });
}

SteeringMaximum maximize(const BipartiteState& rho_ab, const std::function<double(const CMatrix&)>& objective,
                         const SteeringOptions& opts) {
  const auto found = minimize_over_unitaries(
      rho_ab.n_a(), [&](const CMatrix& u) { return -objective(u); }, {}, opts.search());
  return SteeringMaximum{-found.value, MeasurementBasis(found.unitary)};
}

}  // namespace

MeasurementBasis::MeasurementBasis(CMatrix unitary) : unitary_(std::move(unitary)) {
  require_square(unitary_, "measurement basis");
  const auto n = unitary_.rows();
  const double residual = (unitary_.adjoint() * unitary_ - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (!(residual <= 1e-10)) {
    throw Error(ErrorKind::DimensionMismatch, "measurement basis columns are not orthonormal (residual " +
                                                  std::to_string(residual) + ")");
  }
}

MeasurementBasis MeasurementBasis::computational(Eigen::Index n) { return MeasurementBasis(CMatrix::Identity(n, n)); }

double SteeringEnsemble::total_probability() const {
  double total = 0.0;
  for (const auto& o : outcomes) total += o.probability;
  for (const auto& s : skipped) total += s.probability;
  return total;
}

SteeringEnsemble steer(const BipartiteState& rho_ab, const MeasurementBasis& basis) {
  require_basis_dim(rho_ab, basis);
  SteeringEnsemble ensemble;
  for (Eigen::Index i = 0; i < basis.dim(); ++i) {
    const CMatrix block = conditional_block(rho_ab.matrix(), rho_ab.dims(), basis.unitary().col(i));
    const double p = block.trace().real();
    if (p < kNegligibleProbability) {
      ensemble.skipped.push_back({i, p});
      continue;
    }
    ensemble.outcomes.push_back({i, p, DensityMatrix(block / p)});
  }
  return ensemble;
}

double steered_skew_sum(const BipartiteState& rho_ab, const MeasurementBasis& basis,
                        const NondegenerateObservable& k_b) {
  require_basis_dim(rho_ab, basis);
  if (k_b.dim() != rho_ab.n_b()) throw Error(ErrorKind::DimensionMismatch, "K_B does not act on subsystem B");
  return skew_sum(rho_ab, basis.unitary(), k_b.matrix());
}

double steered_q_sum(const BipartiteState& rho_ab, const MeasurementBasis& basis, const ObservableBasis& basis_b) {
  require_basis_dim(rho_ab, basis);
  if (basis_b.dim() != rho_ab.n_b()) throw Error(ErrorKind::DimensionMismatch, "basis does not act on subsystem B");
  return q_sum(rho_ab, basis.unitary(), basis_b);
}

SteeringMaximum steering_induced_skew(const BipartiteState& rho_ab, const NondegenerateObservable& k_b,
                                      const SteeringOptions& opts) {
  if (k_b.dim() != rho_ab.n_b()) throw Error(ErrorKind::DimensionMismatch, "K_B does not act on subsystem B");
  return maximize(rho_ab, [&](const CMatrix& u) { return skew_sum(rho_ab, u, k_b.matrix()); }, opts);
}

SteeringMaximum average_steering_induced_q(const BipartiteState& rho_ab, const ObservableBasis& basis_b,
                                           const SteeringOptions& opts) {
  if (basis_b.dim() != rho_ab.n_b()) throw Error(ErrorKind::DimensionMismatch, "basis does not act on subsystem B");
  return maximize(rho_ab, [&](const CMatrix& u) { return q_sum(rho_ab, u, basis_b); }, opts);
}

}  // namespace skewlqu
