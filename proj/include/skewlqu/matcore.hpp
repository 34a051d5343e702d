#pragma once

// Dense complex linear-algebra kernel. Everything here is a pure function of
// its arguments and is templated on the Eigen expression type, so it works for
// std::complex<float>, std::complex<double> and real matrices alike.
//
// Tensor-product convention: in A (x) B the A index is the outer (slow) one,
// i.e. the joint basis index of |a>|b> is a * n_B + b.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "skewlqu/errors.hpp"

namespace skewlqu {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using CMatrix = Matrix<Complex>;
using CVector = Vector<Complex>;
using RVector = Vector<double>;
using RMatrix = Matrix<double>;

/// Largest joint Hilbert-space dimension the toolkit accepts.
inline constexpr Eigen::Index kMaxDimension = 32;

inline constexpr double kHermitianTol = 1e-9;
inline constexpr double kPsdTol = 1e-10;

/// Which tensor factor of a bipartite operator.
enum class Subsystem { A, B };

struct BipartiteDims {
  Eigen::Index n_a = 1;
  Eigen::Index n_b = 1;

  Eigen::Index total() const { return n_a * n_b; }
  Eigen::Index of(Subsystem s) const { return s == Subsystem::A ? n_a : n_b; }
};

constexpr Subsystem other(Subsystem s) { return s == Subsystem::A ? Subsystem::B : Subsystem::A; }

template <typename Scalar>
struct HermitianEigenSystem {
  using RealScalar = typename Eigen::NumTraits<Scalar>::Real;
  Vector<RealScalar> eigenvalues;  // ascending
  Matrix<Scalar> eigenvectors;     // columns
};

/// Max-abs entry of M - M^dagger.
template <typename Derived>
typename Derived::RealScalar hermiticity_residual(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<typename Derived::RealScalar>::infinity();
  if (m.size() == 0) return 0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
Matrix<typename Derived::Scalar> hermitian_part(const Eigen::MatrixBase<Derived>& m) {
  return (m + m.adjoint()) / typename Derived::RealScalar(2);
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + " must be square, got " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()));
  }
}

template <typename Derived>
HermitianEigenSystem<typename Derived::Scalar> hermitian_eig(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  require_square(m, "hermitian_eig input");
  const auto residual = hermiticity_residual(m);
  if (!(residual <= kHermitianTol)) {
    throw Error(ErrorKind::NotHermitian, "||M - M^dagger||_max = " + std::to_string(double(residual)));
  }
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(hermitian_part(m));
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NoConvergence, "self-adjoint eigensolver exceeded its iteration cap");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// U diag(f(lambda)) U^dagger for a Hermitian eigensystem.
template <typename Scalar, typename Fn>
Matrix<Scalar> apply_spectral(const HermitianEigenSystem<Scalar>& es, Fn&& fn) {
  auto mapped = es.eigenvalues.unaryExpr(fn).template cast<Scalar>().eval();
  return es.eigenvectors * mapped.asDiagonal() * es.eigenvectors.adjoint();
}

/// Principal square root of a positive semidefinite Hermitian matrix.
/// Eigenvalues in [-1e-10, 0) are clamped to zero; anything lower is NotPSD.
/// Eigenvalues below the solver's resolution (8 n eps |lambda_max|) are also
/// treated as zero, otherwise rank-deficient input picks up O(sqrt(eps)) noise.
template <typename Derived>
Matrix<typename Derived::Scalar> sqrtm_psd(const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Derived::RealScalar;
  const auto es = hermitian_eig(m);
  if (es.eigenvalues.size() == 0) return Matrix<typename Derived::Scalar>(0, 0);
  if (es.eigenvalues(0) < Real(-kPsdTol)) {
    throw Error(ErrorKind::NotPSD, "min eigenvalue " + std::to_string(double(es.eigenvalues(0))));
  }
  const Real floor = Real(8) * Real(m.rows()) * std::numeric_limits<Real>::epsilon() *
                     es.eigenvalues.cwiseAbs().maxCoeff();
  return apply_spectral(es, [floor](Real x) { return x <= floor ? Real(0) : std::sqrt(x); });
}

template <typename DerivedA, typename DerivedB>
Matrix<typename DerivedA::Scalar> kron(const Eigen::MatrixBase<DerivedA>& a,
                                       const Eigen::MatrixBase<DerivedB>& b) {
  Matrix<typename DerivedA::Scalar> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Embed a local operator into the joint space: X (x) I_B for side A, I_A (x) X for side B.
template <typename Derived>
Matrix<typename Derived::Scalar> embed_local(const Eigen::MatrixBase<Derived>& x, BipartiteDims dims,
                                             Subsystem side) {
  using Scalar = typename Derived::Scalar;
  require_square(x, "local operator");
  if (x.rows() != dims.of(side)) {
    throw Error(ErrorKind::DimensionMismatch, "local operator has dimension " + std::to_string(x.rows()) +
                                                  ", subsystem has " + std::to_string(dims.of(side)));
  }
  if (side == Subsystem::A) return kron(x, Matrix<Scalar>::Identity(dims.n_b, dims.n_b));
  return kron(Matrix<Scalar>::Identity(dims.n_a, dims.n_a), x);
}

/// Partial trace of an operator on A (x) B; `traced_out` names the factor removed.
template <typename Derived>
Matrix<typename Derived::Scalar> partial_trace(const Eigen::MatrixBase<Derived>& m, BipartiteDims dims,
                                               Subsystem traced_out) {
  using Scalar = typename Derived::Scalar;
  require_square(m, "partial_trace input");
  if (dims.n_a < 1 || dims.n_b < 1 || m.rows() != dims.total()) {
    throw Error(ErrorKind::DimensionMismatch, "operator of dimension " + std::to_string(m.rows()) +
                                                  " does not factor as " + std::to_string(dims.n_a) + "x" +
                                                  std::to_string(dims.n_b));
  }
  const Eigen::Index na = dims.n_a;
  const Eigen::Index nb = dims.n_b;
  if (traced_out == Subsystem::B) {
    Matrix<Scalar> out(na, na);
    for (Eigen::Index a = 0; a < na; ++a) {
      for (Eigen::Index ap = 0; ap < na; ++ap) {
        out(a, ap) = m.block(a * nb, ap * nb, nb, nb).trace();
      }
    }
    return out;
  }
  Matrix<Scalar> out = Matrix<Scalar>::Zero(nb, nb);
  for (Eigen::Index a = 0; a < na; ++a) out += m.block(a * nb, a * nb, nb, nb);
  return out;
}

template <typename DerivedA, typename DerivedB>
void require_conformable(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                    "x" + std::to_string(b.cols()));
  }
}

template <typename DerivedA, typename DerivedB>
Matrix<typename DerivedA::Scalar> commutator(const Eigen::MatrixBase<DerivedA>& a,
                                             const Eigen::MatrixBase<DerivedB>& b) {
  require_conformable(a, b);
  return a * b - b * a;
}

/// Hilbert-Schmidt inner product Tr(A^dagger B).
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar trace_inner(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "trace_inner operands differ in shape");
  }
  return a.conjugate().cwiseProduct(b).sum();
}

/// Tr(A B) without forming the product.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar trace_of_product(const Eigen::MatrixBase<DerivedA>& a,
                                           const Eigen::MatrixBase<DerivedB>& b) {
  return a.cwiseProduct(b.transpose()).sum();
}

}  // namespace skewlqu
