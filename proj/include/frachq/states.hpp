#pragma once

// Gaussian wave packet psi(x) ~ exp(-(x - x0)^2 / (2 b^2) + i p0 x / hbar):
// first and second moments under a linear (Q, P) evolution.

#include "frachq/models.hpp"

namespace frachq {

struct GaussianPacket {
  double x0 = 0.0;
  double p0 = 0.0;
  double b = 1.0;
  double hbar = 1.0;

  void validate() const;
};

struct MomentReport {
  double mean_q = 0.0;
  double mean_p = 0.0;
  double disp_q = 0.0;
  double disp_p = 0.0;
  double uncertainty_product = 0.0;  // disp_q * disp_p
};

/// (x0, p0, b^2/2, hbar^2/(2 b^2)).
MomentReport initial_moments(const GaussianPacket& packet);

/// Q_t = c00 Q + c01 P, P_t = c10 Q + c11 P; the packet has no initial Q-P
/// covariance, so D(aQ + bP) = a^2 D_Q + b^2 D_P.
MomentReport evolve_moments(const GaussianPacket& packet, const SolutionCoeffs& coeffs);

/// Reference closed form of the alpha = 1/2 free-particle position dispersion,
/// (b^2/2)(1 + hbar^2 t^4 / (m^2 b^4)). evolve_moments with the half-mode
/// coefficients gives a t^4 coefficient four times smaller; both are reported.
double printed_free_disp_q(const GaussianPacket& packet, double m, double t);

}  // namespace frachq
