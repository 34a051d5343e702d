#include "skewlqu/quantum.hpp"

#include <cmath>
#include <string>

namespace skewlqu {

namespace {

std::string fmt_residual(double r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", r);
  return buf;
}

void require_dim_limit(Eigen::Index n, const char* what) {
  if (n < 1 || n > kMaxDimension) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + " dimension " + std::to_string(n) + " outside [1, 32]");
  }
}

CMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  CMatrix g(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = Complex(re, im) * M_SQRT1_2;
    }
  }
  return g;
}

}  // namespace

DensityMatrix::DensityMatrix(CMatrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) {
    throw Error(ErrorKind::InvalidState, "matrix is not square");
  }
  require_dim_limit(matrix_.rows(), "state");
  const double herm = hermiticity_residual(matrix_);
  if (!(herm <= kHermitianTol)) {
    throw Error(ErrorKind::InvalidState, "hermiticity residual " + fmt_residual(herm));
  }
  matrix_ = hermitian_part(matrix_);
  const double trace_residual = std::abs(matrix_.trace().real() - 1.0);
  if (!(trace_residual <= kTraceTol)) {
    throw Error(ErrorKind::InvalidState, "trace residual " + fmt_residual(trace_residual));
  }
  const double min_eig = hermitian_eig(matrix_).eigenvalues(0);
  if (min_eig < -kPsdTol) {
    throw Error(ErrorKind::InvalidState, "min eigenvalue " + fmt_residual(min_eig));
  }
}

double DensityMatrix::purity() const { return trace_of_product(matrix_, matrix_).real(); }

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index n) {
  return DensityMatrix(CMatrix::Identity(n, n) / double(n));
}

DensityMatrix DensityMatrix::pure(const CVector& psi) {
  const CVector v = psi.normalized();
  return DensityMatrix(v * v.adjoint());
}

BipartiteState::BipartiteState(DensityMatrix state, BipartiteDims dims) : state_(std::move(state)), dims_(dims) {
  if (dims.n_a < 1 || dims.n_b < 1 || dims.total() != state_.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "state of dimension " + std::to_string(state_.dim()) +
                                                  " does not factor as " + std::to_string(dims.n_a) + "x" +
                                                  std::to_string(dims.n_b));
  }
}

DensityMatrix BipartiteState::reduced(Subsystem traced_out) const {
  return DensityMatrix(partial_trace(matrix(), dims_, traced_out));
}

BipartiteState BipartiteState::product(const DensityMatrix& rho_a, const DensityMatrix& tau_b) {
  return BipartiteState(DensityMatrix(kron(rho_a.matrix(), tau_b.matrix())), {rho_a.dim(), tau_b.dim()});
}

BipartiteState maximally_entangled(Eigen::Index n) {
  CVector psi = CVector::Zero(n * n);
  for (Eigen::Index k = 0; k < n; ++k) psi(k * n + k) = 1.0;
  return BipartiteState(DensityMatrix::pure(psi), {n, n});
}

Observable::Observable(CMatrix matrix) : matrix_(std::move(matrix)) {
  require_square(matrix_, "observable");
  const double herm = hermiticity_residual(matrix_);
  if (!(herm <= kHermitianTol)) {
    throw Error(ErrorKind::NotHermitian, "observable hermiticity residual " + fmt_residual(herm));
  }
}

void require_nondegenerate(const RVector& spectrum) {
  if (spectrum.size() < 1) throw Error(ErrorKind::DegenerateSpectrum, "empty spectrum");
  for (Eigen::Index k = 1; k < spectrum.size(); ++k) {
    const double gap = spectrum(k) - spectrum(k - 1);
    if (!(gap >= kMinSpectralGap)) {
      throw Error(ErrorKind::DegenerateSpectrum,
                  "spectrum must be strictly ascending with gap >= 1e-6 (gap " + fmt_residual(gap) + " at index " +
                      std::to_string(k) + ")");
    }
  }
}

RVector default_spectrum(Eigen::Index n) {
  if (n == 1) return RVector::Zero(1);
  return RVector::LinSpaced(n, -1.0, 1.0);
}

NondegenerateObservable::NondegenerateObservable(RVector spectrum, CMatrix eigenbasis)
    : spectrum_(std::move(spectrum)), eigenbasis_(std::move(eigenbasis)) {
  require_nondegenerate(spectrum_);
  if (eigenbasis_.rows() != spectrum_.size() || eigenbasis_.cols() != spectrum_.size()) {
    throw Error(ErrorKind::DimensionMismatch, "eigenbasis does not match spectrum length");
  }
  const double unitarity =
      (eigenbasis_.adjoint() * eigenbasis_ - CMatrix::Identity(dim(), dim())).cwiseAbs().maxCoeff();
  if (unitarity > 1e-8) {
    throw Error(ErrorKind::DimensionMismatch, "eigenbasis is not unitary (residual " + fmt_residual(unitarity) + ")");
  }
  matrix_ = hermitian_part(eigenbasis_ * spectrum_.cast<Complex>().asDiagonal() * eigenbasis_.adjoint());
}

NondegenerateObservable NondegenerateObservable::diagonal(RVector spectrum) {
  const auto n = spectrum.size();
  return NondegenerateObservable(std::move(spectrum), CMatrix::Identity(n, n));
}

KrausChannel::KrausChannel(std::vector<CMatrix> kraus_ops) : kraus_ops_(std::move(kraus_ops)) {
  if (kraus_ops_.empty()) throw Error(ErrorKind::InvalidChannel, "no Kraus operators");
  const auto n = kraus_ops_.front().rows();
  for (const auto& e : kraus_ops_) {
    if (e.rows() != n || e.cols() != n) {
      throw Error(ErrorKind::DimensionMismatch, "Kraus operators must share one square dimension");
    }
  }
  const double residual = completeness_residual();
  if (!(residual <= kCompletenessTol)) {
    throw Error(ErrorKind::InvalidChannel, "completeness residual " + fmt_residual(residual));
  }
}

double KrausChannel::completeness_residual() const {
  const auto n = dim();
  CMatrix sum = CMatrix::Zero(n, n);
  for (const auto& e : kraus_ops_) sum += e.adjoint() * e;
  return (sum - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

ObservableBasis::ObservableBasis(std::vector<CMatrix> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) throw Error(ErrorKind::DimensionMismatch, "empty observable basis");
  dim_ = elements_.front().rows();
  if (static_cast<Eigen::Index>(elements_.size()) != dim_ * dim_) {
    throw Error(ErrorKind::DimensionMismatch, "basis on dimension " + std::to_string(dim_) + " needs " +
                                                  std::to_string(dim_ * dim_) + " elements");
  }
  for (const auto& x : elements_) {
    if (x.rows() != dim_ || x.cols() != dim_) throw Error(ErrorKind::DimensionMismatch, "ragged observable basis");
    if (hermiticity_residual(x) > kHermitianTol) throw Error(ErrorKind::NotHermitian, "basis element not Hermitian");
  }
}

ObservableBasis ObservableBasis::rotated(const CMatrix& unitary) const {
  std::vector<CMatrix> out;
  out.reserve(elements_.size());
  for (const auto& x : elements_) out.push_back(hermitian_part(unitary * x * unitary.adjoint()));
  return ObservableBasis(std::move(out));
}

DensityMatrix apply_channel(const KrausChannel& channel, const DensityMatrix& rho) {
  if (channel.dim() != rho.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "channel acts on dimension " + std::to_string(channel.dim()) +
                                                  ", state has " + std::to_string(rho.dim()));
  }
  CMatrix out = CMatrix::Zero(rho.dim(), rho.dim());
  for (const auto& e : channel.kraus_ops()) out.noalias() += e * rho.matrix() * e.adjoint();
  return DensityMatrix(hermitian_part(out));
}

CMatrix haar_unitary(Eigen::Index n, Rng& rng) {
  require_dim_limit(n, "unitary");
  const CMatrix z = gaussian_matrix(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix& r = qr.matrixQR();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    const Complex phase = mag > 0.0 ? r(k, k) / mag : Complex(1.0);
    q.col(k) *= phase;
  }
  return q;
}

DensityMatrix ginibre_state(Eigen::Index n, Rng& rng, std::optional<Eigen::Index> rank) {
  require_dim_limit(n, "state");
  const Eigen::Index r = rank.value_or(n);
  if (r < 1 || r > n) throw Error(ErrorKind::DimensionMismatch, "Ginibre rank must lie in [1, n]");
  const CMatrix g = gaussian_matrix(n, r, rng);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(hermitian_part(rho));
}

NondegenerateObservable random_nondegenerate_observable(Eigen::Index n, Rng& rng, std::optional<RVector> spectrum) {
  RVector lambda = spectrum ? std::move(*spectrum) : default_spectrum(n);
  if (lambda.size() != n) throw Error(ErrorKind::DimensionMismatch, "spectrum length differs from dimension");
  require_nondegenerate(lambda);
  return NondegenerateObservable(std::move(lambda), haar_unitary(n, rng));
}

KrausChannel random_cptp(Eigen::Index n, std::size_t kraus_count, Rng& rng) {
  if (kraus_count < 1) throw Error(ErrorKind::InvalidChannel, "kraus_count must be >= 1");
  const auto j_count = static_cast<Eigen::Index>(kraus_count);
  const CMatrix v = haar_unitary(n * j_count, rng);
  std::vector<CMatrix> ops;
  ops.reserve(kraus_count);
  for (Eigen::Index j = 0; j < j_count; ++j) ops.emplace_back(v.block(j * n, 0, n, n));
  return KrausChannel(std::move(ops));
}

KrausChannel commuting_kraus_channel(const NondegenerateObservable& k_a, Eigen::Index n_b, std::size_t kraus_count,
                                     Rng& rng) {
  require_nondegenerate(k_a.spectrum());
  const Eigen::Index n_a = k_a.dim();
  require_dim_limit(n_a * n_b, "channel");
  std::vector<CMatrix> ops(kraus_count, CMatrix::Zero(n_a * n_b, n_a * n_b));
  for (Eigen::Index k = 0; k < n_a; ++k) {
    const CVector u = k_a.eigenbasis().col(k);
    const CMatrix projector = u * u.adjoint();
    const KrausChannel local = random_cptp(n_b, kraus_count, rng);
    for (std::size_t j = 0; j < kraus_count; ++j) ops[j] += kron(projector, local.kraus_ops()[j]);
  }
  return KrausChannel(std::move(ops));
}

ObservableBasis gell_mann_basis(Eigen::Index n) {
  require_dim_limit(n, "basis");
  std::vector<CMatrix> out;
  out.reserve(static_cast<std::size_t>(n * n));
  const Complex i(0.0, 1.0);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j + 1; k < n; ++k) {
      CMatrix x = CMatrix::Zero(n, n);
      x(j, k) = x(k, j) = M_SQRT1_2;
      out.push_back(std::move(x));
    }
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j + 1; k < n; ++k) {
      CMatrix x = CMatrix::Zero(n, n);
      x(j, k) = -i * M_SQRT1_2;
      x(k, j) = i * M_SQRT1_2;
      out.push_back(std::move(x));
    }
  }
  for (Eigen::Index l = 1; l < n; ++l) {
    const double scale = 1.0 / std::sqrt(double(l * (l + 1)));
    CMatrix x = CMatrix::Zero(n, n);
    for (Eigen::Index k = 0; k < l; ++k) x(k, k) = scale;
    x(l, l) = -double(l) * scale;
    out.push_back(std::move(x));
  }
  out.push_back(CMatrix::Identity(n, n) / std::sqrt(double(n)));
  return ObservableBasis(std::move(out));
}

}  // namespace skewlqu
