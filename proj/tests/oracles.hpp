#pragma once

// Reference implementations used only by the tests. They deliberately share
// no code with the library: Kanter's integral representation of the stable
// density (integrated with Boost), Eigen's matrix exponential, and plain
// complex arithmetic for the closed forms.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace oracle {

using cd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
inline constexpr double pi = std::numbers::pi;

// Kanter: for u = s t^{-1/alpha},
//   f(1, u) = alpha/(1-alpha) u^{-1/(1-alpha)} (1/pi) int_0^pi A(p) exp(-u^{-alpha/(1-alpha)} A(p)) dp
//   A(p) = (sin(alpha p) / sin p)^{1/(1-alpha)} sin((1-alpha) p) / sin(alpha p).
inline double kanter_density(double alpha, double t, double s) {
  if (s <= 0.0) return 0.0;
  const double scale = std::pow(t, 1.0 / alpha);
  const double u = s / scale;
  const double e = 1.0 / (1.0 - alpha);
  auto A = [&](double p) {
    return std::pow(std::sin(alpha * p) / std::sin(p), e) * std::sin((1.0 - alpha) * p) /
           std::sin(alpha * p);
  };
  const double w = std::pow(u, -alpha * e);
  auto integrand = [&](double p) {
    if (p <= 0.0 || p >= pi) return 0.0;
    const double a = A(p);
    const double x = w * a;
    return x > 700.0 ? 0.0 : a * std::exp(-x);
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  const double I = ts.integrate(integrand, 0.0, pi, 1e-14);
  return alpha * e * std::pow(u, -e) * I / pi / scale;
}

inline double levy_half(double t, double s) {
  return t / (2.0 * std::sqrt(pi)) * std::pow(s, -1.5) * std::exp(-t * t / (4.0 * s));
}

// Principal branch via std::pow on complex.
inline cd laplace_rhs(double alpha, double t, cd z) { return std::exp(-t * std::pow(z, alpha)); }

// exp(-t (-i omega)^alpha) = C + i S.
inline cd envelope(double alpha, double omega, double t) {
  return std::exp(-t * std::pow(cd(0.0, -omega), alpha));
}

// e^{iHs} A e^{-iHs} by the matrix exponential.
inline CMat unitary_flow(const CMat& h, const CMat& a, double s) {
  const CMat u = (cd(0.0, 1.0) * s * h).exp();
  return u * a * u.adjoint();
}

// Fractional Heisenberg flow: eigenbasis component (j, k) picks up
// exp(-t (-i w)^alpha), w = E_j - E_k, with std::pow as the branch.
inline CMat fractional_flow(const CMat& h, const CMat& a, double alpha, double t) {
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  const CMat& u = es.eigenvectors();
  const Eigen::VectorXd& e = es.eigenvalues();
  CMat b = u.adjoint() * a * u;
  const double scale = std::max(1.0, e.cwiseAbs().maxCoeff());
  for (int j = 0; j < b.rows(); ++j) {
    for (int k = 0; k < b.cols(); ++k) {
      double w = e(j) - e(k);
      if (std::abs(w) <= 1e-12 * scale) continue;
      b(j, k) *= std::exp(-t * std::pow(cd(0.0, -w), alpha));
    }
  }
  return u * b * u.adjoint();
}

inline CMat random_hermitian(std::mt19937_64& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  CMat m(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) m(j, k) = cd(g(rng), g(rng));
  }
  return 0.5 * (m + m.adjoint());
}

inline CMat random_density(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMat m(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) m(j, k) = cd(g(rng), g(rng));
  }
  CMat r = m * m.adjoint();
  return r / r.trace().real();
}

inline double max_abs(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace oracle
