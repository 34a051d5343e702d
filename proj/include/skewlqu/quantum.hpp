#pragma once

// States, observables and channels on finite-dimensional Hilbert spaces, plus
// seeded random generators for each of them.

#include <optional>
#include <span>
#include <vector>

#include "skewlqu/matcore.hpp"
#include "skewlqu/rng.hpp"

namespace skewlqu {

inline constexpr double kTraceTol = 1e-9;
inline constexpr double kCompletenessTol = 1e-8;
inline constexpr double kMinSpectralGap = 1e-6;

/// Hermitian, positive semidefinite, unit-trace matrix.
class DensityMatrix {
 public:
  /// Validates the invariants; throws InvalidState naming the failed check and its residual.
  explicit DensityMatrix(CMatrix matrix);

  const CMatrix& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }

  /// Purity Tr(rho^2).
  double purity() const;

  static DensityMatrix maximally_mixed(Eigen::Index n);
  static DensityMatrix pure(const CVector& psi);

 private:
  CMatrix matrix_;
};

class BipartiteState {
 public:
  BipartiteState(DensityMatrix state, BipartiteDims dims);

  const DensityMatrix& state() const { return state_; }
  const CMatrix& matrix() const { return state_.matrix(); }
  BipartiteDims dims() const { return dims_; }
  Eigen::Index n_a() const { return dims_.n_a; }
  Eigen::Index n_b() const { return dims_.n_b; }

  /// Reduced state with `traced_out` removed.
  DensityMatrix reduced(Subsystem traced_out) const;

  static BipartiteState product(const DensityMatrix& rho_a, const DensityMatrix& tau_b);

 private:
  DensityMatrix state_;
  BipartiteDims dims_;
};

/// (|00> + |11> + ... ) / sqrt(n) on n x n.
BipartiteState maximally_entangled(Eigen::Index n);

class Observable {
 public:
  explicit Observable(CMatrix matrix);

  const CMatrix& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }

 private:
  CMatrix matrix_;
};

/// Hermitian operator U diag(spectrum) U^dagger with a strictly ascending spectrum.
class NondegenerateObservable {
 public:
  NondegenerateObservable(RVector spectrum, CMatrix eigenbasis);

  /// Diagonal observable in the computational basis.
  static NondegenerateObservable diagonal(RVector spectrum);

  const RVector& spectrum() const { return spectrum_; }
  const CMatrix& eigenbasis() const { return eigenbasis_; }
  const CMatrix& matrix() const { return matrix_; }
  Eigen::Index dim() const { return spectrum_.size(); }
  Observable observable() const { return Observable(matrix_); }

 private:
  RVector spectrum_;
  CMatrix eigenbasis_;
  CMatrix matrix_;
};

/// Throws DegenerateSpectrum unless strictly ascending with gaps >= 1e-6.
void require_nondegenerate(const RVector& spectrum);

/// Equally spaced on [-1, 1]: lambda_k = -1 + 2k/(n-1); {0} for n = 1.
RVector default_spectrum(Eigen::Index n);

class KrausChannel {
 public:
  /// Throws DimensionMismatch on ragged operators, InvalidChannel if sum E^dagger E != I.
  explicit KrausChannel(std::vector<CMatrix> kraus_ops);

  const std::vector<CMatrix>& kraus_ops() const { return kraus_ops_; }
  Eigen::Index dim() const { return kraus_ops_.front().rows(); }
  std::size_t size() const { return kraus_ops_.size(); }

  /// max-abs entry of sum_j E_j^dagger E_j - I.
  double completeness_residual() const;

 private:
  std::vector<CMatrix> kraus_ops_;
};

/// n^2 Hermitian operators, trace-orthonormal under Tr(X Y).
class ObservableBasis {
 public:
  explicit ObservableBasis(std::vector<CMatrix> elements);

  const std::vector<CMatrix>& elements() const { return elements_; }
  Eigen::Index dim() const { return dim_; }
  std::size_t size() const { return elements_.size(); }

  /// The basis {U X U^dagger}.
  ObservableBasis rotated(const CMatrix& unitary) const;

 private:
  std::vector<CMatrix> elements_;
  Eigen::Index dim_;
};

DensityMatrix apply_channel(const KrausChannel& channel, const DensityMatrix& rho);

/// Haar-random unitary: QR of a complex Gaussian matrix with the phases of diag(R) moved into Q.
CMatrix haar_unitary(Eigen::Index n, Rng& rng);

/// GG^dagger / Tr(GG^dagger) with G an n x rank complex Gaussian matrix. rank defaults to n.
DensityMatrix ginibre_state(Eigen::Index n, Rng& rng, std::optional<Eigen::Index> rank = std::nullopt);

NondegenerateObservable random_nondegenerate_observable(Eigen::Index n, Rng& rng,
                                                        std::optional<RVector> spectrum = std::nullopt);

/// Stinespring construction: the Kraus operators are the n x n row blocks of the
/// first n columns of a Haar unitary on C^(n * kraus_count).
KrausChannel random_cptp(Eigen::Index n, std::size_t kraus_count, Rng& rng);

/// Channel on A (x) B with E_j = sum_k |u_k><u_k| (x) B_j^(k), where u_k are the
/// eigenvectors of `k_a` and each {B_j^(k)}_j is an independent random CPTP Kraus set
/// on B. Every E_j commutes with k_a (x) I_B.
KrausChannel commuting_kraus_channel(const NondegenerateObservable& k_a, Eigen::Index n_b,
                                     std::size_t kraus_count, Rng& rng);

/// Generalized Gell-Mann matrices (symmetric, antisymmetric, diagonal), each with unit
/// Hilbert-Schmidt norm, followed by I / sqrt(n).
ObservableBasis gell_mann_basis(Eigen::Index n);

}  // namespace skewlqu
