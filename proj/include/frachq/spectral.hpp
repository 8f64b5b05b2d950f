#pragma once

// Finite-dimensional fractional Heisenberg / von Neumann evolution. In the
// eigenbasis of H the commutator superoperator acts diagonally on matrix
// units |j><k| with eigenvalue -i w_jk (Heisenberg picture), w_jk =
// (E_j - E_k) / hbar, and its fractional power acts by the principal-branch
// power of that eigenvalue.

#include <complex>
#include <utility>

#include <Eigen/Core>

#include "frachq/kernel.hpp"
#include "frachq/subordinator.hpp"

namespace frachq {

using CMatrix = Eigen::MatrixXcd;

/// Dense self-adjoint operator. Construction checks Hermiticity to
/// 1e-12 * max(1, max|entry|) and stores the symmetrised matrix.
class HermitianOperator {
 public:
  explicit HermitianOperator(const CMatrix& m);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const noexcept { return m_; }

 private:
  CMatrix m_;
};

/// Hermitian, unit trace, eigenvalues >= -1e-10.
class DensityMatrix {
 public:
  explicit DensityMatrix(const CMatrix& m);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const noexcept { return m_; }

 private:
  CMatrix m_;
};

struct Spectrum {
  Eigen::VectorXd energies;  // ascending
  CMatrix basis;             // columns are eigenvectors
  double hbar = 1.0;

  int dim() const noexcept { return static_cast<int>(energies.size()); }
  /// (E_j - E_k) / hbar, snapped to 0 for |E_j - E_k| <= 1e-12 max|E|.
  Eigen::MatrixXd transition_frequencies() const;
  /// U^dagger M U.
  CMatrix to_eigenbasis(const CMatrix& m) const;
  /// U M U^dagger.
  CMatrix from_eigenbasis(const CMatrix& m) const;
};

/// Ascending energies; each eigenvector's first entry above 1e-8 in modulus
/// is made real positive.
Spectrum eigendecompose(const HermitianOperator& h, double hbar = 1.0);

/// Principal branch |l|^a e^{i a arg l}, arg in (-pi, pi]; 0 maps to 0.
/// Throws Error(branch_cut) on the open negative real axis.
std::complex<double> power_branch(std::complex<double> lambda, const FractionalOrder& order);

/// A_t = e^{iHt/hbar} A e^{-iHt/hbar}.
HermitianOperator heisenberg_evolve(const Spectrum& spec, const HermitianOperator& a,
                                    double t);

/// Eigenbasis components scale by exp(-t (-i w_jk)^alpha).
HermitianOperator fractional_heisenberg_evolve(const Spectrum& spec,
                                               const HermitianOperator& a,
                                               const FractionalOrder& order, double t);

/// Eigenbasis components scale by exp(-t (+i w_jk)^alpha); the diagonal is
/// left untouched, which keeps the trace.
DensityMatrix fractional_vonneumann_evolve(const Spectrum& spec, const DensityMatrix& rho,
                                           const FractionalOrder& order, double t);

/// Same as fractional_vonneumann_evolve, returned in the eigenbasis of H
/// (no back-transformation).
CMatrix fractional_vonneumann_eigenbasis(const Spectrum& spec, const DensityMatrix& rho,
                                         const FractionalOrder& order, double t);

struct DualityCheck {
  double lhs = 0.0;  // Tr[rho_t A]
  double rhs = 0.0;  // Tr[rho A_t]
};

DualityCheck duality_check(const Spectrum& spec, const DensityMatrix& rho,
                           const HermitianOperator& a, const FractionalOrder& order,
                           double t);

/// s -> heisenberg_evolve(spec, a, s) as a subordinator trajectory, with the
/// operator norm bound and the longest period 2 pi / min|w_jk| as hints.
Trajectory<CMatrix> heisenberg_trajectory(const Spectrum& spec, const HermitianOperator& a);

/// s -> e^{-iHs/hbar} rho e^{iHs/hbar}, the predual trajectory, with the same
/// hints.
Trajectory<CMatrix> vonneumann_trajectory(const Spectrum& spec, const DensityMatrix& rho);

/// Quadrature route: the Bochner-Phillips average of heisenberg_trajectory.
SubordinationResult<CMatrix> subordinated_heisenberg(const Spectrum& spec,
                                                     const HermitianOperator& a,
                                                     const FractionalOrder& order,
                                                     double t,
                                                     const KernelConfig& cfg = {});

SubordinationResult<CMatrix> subordinated_vonneumann(const Spectrum& spec,
                                                     const DensityMatrix& rho,
                                                     const FractionalOrder& order,
                                                     double t,
                                                     const KernelConfig& cfg = {});

}  // namespace frachq
