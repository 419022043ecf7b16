#pragma once

// Truncated Fock-space numerics for a single oscillator mode: dense density
// matrices, ladder/number operators and displacements.

#include <cmath>
#include <complex>
#include <memory>

#include <Eigen/Dense>

#include "gravphon/errors.hpp"

namespace gravphon {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

class FockOperator {
 public:
  FockOperator() = default;
  explicit FockOperator(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw DomainError("Fock operator must be square");
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }

  FockOperator adjoint() const { return FockOperator(m_.adjoint()); }
  friend FockOperator operator*(const FockOperator& a, const FockOperator& b) {
    return FockOperator(a.m_ * b.m_);
  }

 private:
  Matrix m_;
};

class QuantumState {
 public:
  explicit QuantumState(int dim) : rho_(Matrix::Zero(dim, dim)) {
    if (dim < 2) throw DomainError("Fock truncation must be >= 2");
    rho_(0, 0) = 1.0;
  }
  explicit QuantumState(Matrix rho) : rho_(std::move(rho)) {
    if (rho_.rows() != rho_.cols() || rho_.rows() < 2)
      throw DomainError("density matrix must be square with dim >= 2");
  }

  static QuantumState fock(int dim, int n) {
    QuantumState s(dim);
    s.rho_(0, 0) = 0.0;
    s.rho_(n, n) = 1.0;
    return s;
  }
  static QuantumState pure(const Vector& psi) {
    const Vector u = psi / psi.norm();
    return QuantumState(Matrix(u * u.adjoint()));
  }
  static QuantumState diagonal(const RealVector& populations) {
    Matrix rho = Matrix::Zero(populations.size(), populations.size());
    rho.diagonal() = populations.cast<Complex>() / populations.sum();
    return QuantumState(std::move(rho));
  }

  int dim() const { return static_cast<int>(rho_.rows()); }
  const Matrix& rho() const { return rho_; }
  Matrix& rho() { return rho_; }

  double population(int n) const { return n < dim() ? rho_(n, n).real() : 0.0; }
  double trace() const { return rho_.trace().real(); }
  double purity() const { return (rho_ * rho_).trace().real(); }
  double mean_number() const {
    double acc = 0.0;
    for (int n = 0; n < dim(); ++n) acc += n * rho_(n, n).real();
    return acc;
  }
  double hermiticity_error() const { return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff(); }
  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

  /// rho <- (rho + rho^dagger)/2, trace rescaled to 1.
  void symmetrize_and_normalize() {
    rho_ = 0.5 * (rho_ + rho_.adjoint()).eval();
    const double tr = trace();
    if (!(tr > 0.0) || !std::isfinite(tr)) throw NumericError("state trace is not positive");
    rho_ /= tr;
  }

 private:
  Matrix rho_;
};

inline constexpr double kTraceUnderflow = 1e-280;

/// Checks the density-matrix invariants; throws NumericError on violation.
inline void check_state(const QuantumState& s, double trace_tol = 1e-9,
                        double herm_tol = 1e-12, double pos_tol = -1e-10) {
  if (std::abs(s.trace() - 1.0) > trace_tol) throw NumericError("trace drifted from 1");
  if (s.hermiticity_error() > herm_tol) throw NumericError("state lost Hermiticity");
  if (s.min_eigenvalue() < pos_tol) throw NumericError("state lost positivity");
}

/// Clips eigenvalues below zero and renormalises (release-mode recovery).
inline void enforce_positivity(QuantumState& s) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(s.rho());
  RealVector ev = es.eigenvalues().cwiseMax(0.0);
  s.rho() = es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  s.symmetrize_and_normalize();
}

inline FockOperator identity_operator(int dim) { return FockOperator(Matrix::Identity(dim, dim)); }

inline FockOperator number_operator(int dim) {
  if (dim < 2) throw DomainError("Fock truncation must be >= 2");
  Matrix m = Matrix::Zero(dim, dim);
  for (int n = 0; n < dim; ++n) m(n, n) = static_cast<double>(n);
  return FockOperator(std::move(m));
}

inline FockOperator annihilation_operator(int dim) {
  if (dim < 2) throw DomainError("Fock truncation must be >= 2");
  Matrix m = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
  return FockOperator(std::move(m));
}

inline FockOperator creation_operator(int dim) { return annihilation_operator(dim).adjoint(); }

/// Builds D(beta) = exp(beta b^dagger - beta^* b) from one eigendecomposition.
/// With beta = |beta| e^{i theta}, the generator is
/// |beta| U_theta (b^dagger - b) U_theta^dagger, U_theta = e^{i theta N}, and
/// the Hermitian i(b^dagger - b) = V Lambda V^dagger is diagonalised once per
/// dimension.
/// The truncated generator is exactly anti-Hermitian, so D is unitary on the
/// truncated space to rounding.
class DisplacementFactory {
 public:
  explicit DisplacementFactory(int dim) : dim_(dim) {
    if (dim < 2) throw DomainError("Fock truncation must be >= 2");
    const Matrix a = annihilation_operator(dim).matrix();
    // i (b^dagger - b) is Hermitian.
    const Matrix herm = Complex(0.0, 1.0) * (a.adjoint() - a);
    Eigen::SelfAdjointEigenSolver<Matrix> es(herm);
    vecs_ = es.eigenvectors();
    vals_ = es.eigenvalues();
  }

  int dim() const { return dim_; }

  /// U V exp(-i |beta| Lambda) V^dagger U^dagger
  Matrix matrix(Complex beta) const {
    const double r = std::abs(beta);
    if (r == 0.0) return Matrix::Identity(dim_, dim_);
    const double theta = std::arg(beta);
    Vector phase(dim_);
    for (int n = 0; n < dim_; ++n) phase(n) = std::polar(1.0, theta * n);
    Vector e(dim_);
    for (int j = 0; j < dim_; ++j) e(j) = std::polar(1.0, -r * vals_(j));
    Matrix left = phase.asDiagonal() * vecs_;
    Matrix d = left * e.asDiagonal() * left.adjoint();
    return d;
  }

  FockOperator operator()(Complex beta) const { return FockOperator(matrix(beta)); }

 private:
  int dim_;
  Matrix vecs_;
  RealVector vals_;
};

struct TruncationCheck {
  bool adequate = true;  // false when |beta|^2 > dim / 4
};

inline TruncationCheck check_truncation(Complex beta, int dim) {
  return {std::norm(beta) <= dim / 4.0};
}

inline FockOperator displacement_operator(Complex beta, int dim) {
  return DisplacementFactory(dim)(beta);
}

/// |beta><beta| on the truncated space, as D(beta)|0>.
inline QuantumState coherent_state(Complex beta, int dim) {
  const Matrix d = DisplacementFactory(dim).matrix(beta);
  return QuantumState::pure(d.col(0));
}

/// K rho K^dagger / tr(K rho K^dagger), re-symmetrised.
inline QuantumState apply_normalized(const QuantumState& rho, const FockOperator& k) {
  if (k.dim() != rho.dim()) throw DomainError("operator and state dimensions differ");
  Matrix out = k.matrix() * rho.rho() * k.matrix().adjoint();
  const double tr = out.trace().real();
  if (!(tr > kTraceUnderflow) || !std::isfinite(tr))
    throw NumericError("trace underflow in normalized update (impossible outcome)", tr);
  QuantumState s(std::move(out));
  s.symmetrize_and_normalize();
  return s;
}

/// In-place diagonal update rho_mn <- d_m d_n^* rho_mn, normalised.
inline void apply_diagonal_normalized(QuantumState& s, const Vector& d) {
  if (d.size() != s.dim()) throw DomainError("operator and state dimensions differ");
  s.rho().array() *= (d * d.adjoint()).array();
  const double tr = s.trace();
  if (!(tr > kTraceUnderflow) || !std::isfinite(tr))
    throw NumericError("trace underflow in normalized update (impossible outcome)", tr);
  s.symmetrize_and_normalize();
}

/// In-place unitary conjugation rho <- U rho U^dagger (trace preserved).
inline void apply_unitary(QuantumState& s, const Matrix& u) {
  s.rho() = u * s.rho() * u.adjoint();
  s.symmetrize_and_normalize();
}

}  // namespace gravphon
