#include "frachq/states.hpp"

#include <cmath>
#include <sstream>

#include "frachq/error.hpp"

namespace frachq {

void GaussianPacket::validate() const {
  if (!std::isfinite(x0) || !std::isfinite(p0)) {
    throw Error(ErrorCode::domain, "packet centre (x0, p0) must be finite");
  }
  if (!(b > 0.0) || !std::isfinite(b)) {
    std::ostringstream os;
    os << "packet width b must be finite and > 0 (got " << b << ")";
    throw Error(ErrorCode::domain, os.str());
  }
  if (!(hbar > 0.0) || !std::isfinite(hbar)) {
    throw Error(ErrorCode::domain, "hbar must be finite and > 0");
  }
}

MomentReport initial_moments(const GaussianPacket& packet) {
  packet.validate();
  MomentReport r;
  r.mean_q = packet.x0;
  r.mean_p = packet.p0;
  r.disp_q = 0.5 * packet.b * packet.b;
  r.disp_p = packet.hbar * packet.hbar / (2.0 * packet.b * packet.b);
  r.uncertainty_product = r.disp_q * r.disp_p;
  return r;
}

MomentReport evolve_moments(const GaussianPacket& packet, const SolutionCoeffs& c) {
  if (!c.allFinite()) throw Error(ErrorCode::domain, "coefficients must be finite");
  const MomentReport m0 = initial_moments(packet);
  MomentReport r;
  r.mean_q = c(0, 0) * m0.mean_q + c(0, 1) * m0.mean_p;
  r.mean_p = c(1, 0) * m0.mean_q + c(1, 1) * m0.mean_p;
  r.disp_q = c(0, 0) * c(0, 0) * m0.disp_q + c(0, 1) * c(0, 1) * m0.disp_p;
  r.disp_p = c(1, 0) * c(1, 0) * m0.disp_q + c(1, 1) * c(1, 1) * m0.disp_p;
  r.uncertainty_product = r.disp_q * r.disp_p;
  return r;
}

double printed_free_disp_q(const GaussianPacket& packet, double m, double t) {
  packet.validate();
  if (!(m > 0.0)) throw Error(ErrorCode::domain, "mass m must be > 0");
  const double b2 = packet.b * packet.b;
  const double h = packet.hbar;
  return 0.5 * b2 * (1.0 + h * h * t * t * t * t / (m * m * b2 * b2));
}

}  // namespace frachq
