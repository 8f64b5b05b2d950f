#include "frachq/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "frachq/error.hpp"

namespace frachq {

namespace {

using cd = std::complex<double>;

double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << " must be a nonempty square matrix (got " << m.rows() << "x"
       << m.cols() << ")";
    throw Error(ErrorCode::dimension_mismatch, os.str());
  }
  if (!m.allFinite()) {
    throw Error(ErrorCode::domain, std::string(what) + " has non-finite entries");
  }
}

CMatrix hermitian_part(const CMatrix& m, const char* what) {
  require_square(m, what);
  const double dev = max_abs(m - m.adjoint());
  const double tol = 1e-12 * std::max(1.0, max_abs(m));
  if (dev > tol) {
    std::ostringstream os;
    os << what << " is not Hermitian: max |M - M^dagger| = " << dev
       << " exceeds " << tol;
    throw Error(ErrorCode::not_hermitian, os.str());
  }
  return 0.5 * (m + m.adjoint());
}

void require_dim(const Spectrum& spec, int n, const char* what) {
  if (spec.dim() != n) {
    std::ostringstream os;
    os << what << " has dimension " << n << " but the Hamiltonian has dimension "
       << spec.dim();
    throw Error(ErrorCode::dimension_mismatch, os.str());
  }
}

void require_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::domain, "evolution time t must be finite and >= 0");
  }
}

// Multiplies eigenbasis components by factor(w_jk).
template <class F>
CMatrix scale_components(const Spectrum& spec, const CMatrix& tilde, F&& factor) {
  const Eigen::MatrixXd w = spec.transition_frequencies();
  CMatrix out = tilde;
  const int n = spec.dim();
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      if (j != k) out(j, k) *= factor(w(j, k));
    }
  }
  return out;
}

}  // namespace

HermitianOperator::HermitianOperator(const CMatrix& m)
    : m_(hermitian_part(m, "operator")) {}

DensityMatrix::DensityMatrix(const CMatrix& m) : m_(hermitian_part(m, "density matrix")) {
  const double tr_im = m_.trace().imag();
  const double tr = m_.trace().real();
  if (std::abs(tr - 1.0) > 1e-12 || std::abs(tr_im) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << "density matrix must have unit trace (got " << tr << ")";
    throw Error(ErrorCode::invalid_density, os.str());
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m_, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::eigensolver, "eigensolver failed on density matrix");
  }
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin < -1e-10) {
    std::ostringstream os;
    os << "density matrix must be positive semidefinite (min eigenvalue " << lmin
       << ")";
    throw Error(ErrorCode::invalid_density, os.str());
  }
}

Eigen::MatrixXd Spectrum::transition_frequencies() const {
  const int n = dim();
  const double emax = n == 0 ? 0.0 : energies.cwiseAbs().maxCoeff();
  const double snap = 1e-12 * emax;
  Eigen::MatrixXd w(n, n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      const double d = energies(j) - energies(k);
      w(j, k) = std::abs(d) <= snap ? 0.0 : d / hbar;
    }
  }
  return w;
}

CMatrix Spectrum::to_eigenbasis(const CMatrix& m) const {
  return basis.adjoint() * m * basis;
}

CMatrix Spectrum::from_eigenbasis(const CMatrix& m) const {
  return basis * m * basis.adjoint();
}

Spectrum eigendecompose(const HermitianOperator& h, double hbar) {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) {
    throw Error(ErrorCode::domain, "hbar must be finite and > 0");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.matrix());
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::eigensolver, "Hermitian eigensolver did not converge");
  }
  Spectrum spec;
  spec.energies = es.eigenvalues();
  spec.basis = es.eigenvectors();
  spec.hbar = hbar;
  for (int k = 0; k < spec.basis.cols(); ++k) {
    auto col = spec.basis.col(k);
    for (int j = 0; j < col.size(); ++j) {
      if (std::abs(col(j)) > 1e-8) {
        col *= std::conj(col(j)) / std::abs(col(j));
        col(j) = std::abs(col(j));
        break;
      }
    }
  }
  return spec;
}

cd power_branch(cd lambda, const FractionalOrder& order) {
  if (lambda == cd(0.0, 0.0)) return {0.0, 0.0};
  if (lambda.imag() == 0.0 && lambda.real() < 0.0) {
    std::ostringstream os;
    os << "power_branch: argument " << lambda.real()
       << " lies on the negative real axis (branch cut)";
    throw Error(ErrorCode::branch_cut, os.str());
  }
  const double a = order.alpha();
  return std::polar(std::pow(std::abs(lambda), a), a * std::arg(lambda));
}

HermitianOperator heisenberg_evolve(const Spectrum& spec, const HermitianOperator& a,
                                    double t) {
  require_dim(spec, a.dim(), "observable");
  if (!std::isfinite(t)) throw Error(ErrorCode::domain, "time must be finite");
  const CMatrix tilde = spec.to_eigenbasis(a.matrix());
  const CMatrix out = scale_components(
      spec, tilde, [t](double w) { return std::polar(1.0, w * t); });
  return HermitianOperator(spec.from_eigenbasis(out));
}

HermitianOperator fractional_heisenberg_evolve(const Spectrum& spec,
                                               const HermitianOperator& a,
                                               const FractionalOrder& order, double t) {
  require_dim(spec, a.dim(), "observable");
  require_time(t);
  if (order.is_classical()) return heisenberg_evolve(spec, a, t);
  const CMatrix tilde = spec.to_eigenbasis(a.matrix());
  const CMatrix out = scale_components(spec, tilde, [&](double w) {
    return std::exp(-t * power_branch(cd(0.0, -w), order));
  });
  return HermitianOperator(spec.from_eigenbasis(out));
}

CMatrix fractional_vonneumann_eigenbasis(const Spectrum& spec, const DensityMatrix& rho,
                                         const FractionalOrder& order, double t) {
  require_dim(spec, rho.dim(), "density matrix");
  require_time(t);
  const CMatrix tilde = spec.to_eigenbasis(rho.matrix());
  if (order.is_classical()) {
    return scale_components(spec, tilde,
                            [t](double w) { return std::polar(1.0, -w * t); });
  }
  return scale_components(spec, tilde, [&](double w) {
    return std::exp(-t * power_branch(cd(0.0, w), order));
  });
}

DensityMatrix fractional_vonneumann_evolve(const Spectrum& spec, const DensityMatrix& rho,
                                           const FractionalOrder& order, double t) {
  return DensityMatrix(
      spec.from_eigenbasis(fractional_vonneumann_eigenbasis(spec, rho, order, t)));
}

DualityCheck duality_check(const Spectrum& spec, const DensityMatrix& rho,
                           const HermitianOperator& a, const FractionalOrder& order,
                           double t) {
  require_dim(spec, a.dim(), "observable");
  const DensityMatrix rho_t = fractional_vonneumann_evolve(spec, rho, order, t);
  const HermitianOperator a_t = fractional_heisenberg_evolve(spec, a, order, t);
  DualityCheck out;
  out.lhs = (rho_t.matrix() * a.matrix()).trace().real();
  out.rhs = (rho.matrix() * a_t.matrix()).trace().real();
  return out;
}

namespace {

// s -> U (tilde_jk e^{i sign w_jk s}) U^dagger.
Trajectory<CMatrix> unitary_trajectory(const Spectrum& spec, const CMatrix& op,
                                       double sign) {
  const CMatrix tilde = spec.to_eigenbasis(op);
  const Eigen::MatrixXd w = sign * spec.transition_frequencies();

  Trajectory<CMatrix> traj;
  traj.evaluate = [spec, tilde, w](double s) -> CMatrix {
    CMatrix m = tilde;
    for (int k = 0; k < m.cols(); ++k) {
      for (int j = 0; j < m.rows(); ++j) {
        if (w(j, k) != 0.0) m(j, k) *= std::polar(1.0, w(j, k) * s);
      }
    }
    return spec.from_eigenbasis(m);
  };

  // Entries of a unitary conjugate never exceed the spectral norm.
  Eigen::SelfAdjointEigenSolver<CMatrix> es(op, Eigen::EigenvaluesOnly);
  traj.bound_hint = es.eigenvalues().cwiseAbs().maxCoeff();

  // Components below 1e-13 of the largest cannot affect the result at any
  // tolerance we support, so they do not set the period.
  const double floor = 1e-13 * max_abs(tilde);
  double wmin = 0.0;
  for (int k = 0; k < w.cols(); ++k) {
    for (int j = 0; j < w.rows(); ++j) {
      const double aw = std::abs(w(j, k));
      if (aw > 0.0 && std::abs(tilde(j, k)) > floor && (wmin == 0.0 || aw < wmin)) {
        wmin = aw;
      }
    }
  }
  if (wmin > 0.0) traj.period_hint = 2.0 * std::numbers::pi / wmin;
  return traj;
}

}  // namespace

Trajectory<CMatrix> heisenberg_trajectory(const Spectrum& spec, const HermitianOperator& a) {
  require_dim(spec, a.dim(), "observable");
  return unitary_trajectory(spec, a.matrix(), 1.0);
}

Trajectory<CMatrix> vonneumann_trajectory(const Spectrum& spec, const DensityMatrix& rho) {
  require_dim(spec, rho.dim(), "density matrix");
  return unitary_trajectory(spec, rho.matrix(), -1.0);
}

SubordinationResult<CMatrix> subordinated_heisenberg(const Spectrum& spec,
                                                     const HermitianOperator& a,
                                                     const FractionalOrder& order,
                                                     double t,
                                                     const KernelConfig& cfg) {
  return subordinate(order, t, heisenberg_trajectory(spec, a), cfg);
}

SubordinationResult<CMatrix> subordinated_vonneumann(const Spectrum& spec,
                                                     const DensityMatrix& rho,
                                                     const FractionalOrder& order,
                                                     double t,
                                                     const KernelConfig& cfg) {
  return subordinate(order, t, vonneumann_trajectory(spec, rho), cfg);
}

}  // namespace frachq
