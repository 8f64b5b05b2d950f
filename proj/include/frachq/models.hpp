#pragma once

// Closed-form fractional dynamics of the free particle and the harmonic
// oscillator in the Heisenberg picture. Both are linear in (Q, P), so the
// evolution is a 2x2 coefficient matrix acting on (Q_0, P_0).

#include <optional>
#include <string>

#include <Eigen/Core>

#include "frachq/kernel.hpp"

namespace frachq {

struct OscillatorParams {
  double m = 1.0;
  double omega = 1.0;
  double hbar = 1.0;

  void validate() const;
};

/// C_alpha(t) = int f cos(omega s) ds, S_alpha(t) = int f sin(omega s) ds.
struct OscillatorEnvelope {
  double c = 1.0;
  double s = 0.0;
};

/// Maps (Q_0, P_0) to (Q_t, P_t).
using SolutionCoeffs = Eigen::Matrix2d;

enum class EnvelopeMode { closed_form, quadrature };

/// closed_form: exp(-t (-i omega)^alpha) split into real and imaginary parts.
/// quadrature: integrate_kernel against exp(i omega s).
OscillatorEnvelope oscillator_envelope(const FractionalOrder& order, double omega, double t,
                                       EnvelopeMode mode = EnvelopeMode::closed_form,
                                       const KernelConfig& cfg = {});

/// alpha = 1/2 envelope from the Macdonald-function combination
///   C = k [e^{i pi/8} K_{-1/2}(z_+) + e^{-i pi/8} K_{-1/2}(z_-)],
///   S = i k [e^{i pi/8} K_{-1/2}(z_+) - e^{-i pi/8} K_{-1/2}(z_-)],
/// z_pm = 2 e^{pm i pi/4} sqrt(omega t^2 / 4), k = (omega t^2 / (4 pi^2))^{1/4}.
OscillatorEnvelope oscillator_envelope_macdonald_half(double omega, double t);

/// [[C, S/(m omega)], [-m omega S, C]].
SolutionCoeffs oscillator_coeffs(const OscillatorParams& params, const FractionalOrder& order,
                                 double t, EnvelopeMode mode = EnvelopeMode::closed_form,
                                 const KernelConfig& cfg = {});

/// Same matrix from an already computed envelope.
SolutionCoeffs oscillator_coeffs(const OscillatorParams& params, const OscillatorEnvelope& e);

enum class FreeMode {
  /// g_{1/2}(t) = +t^2/2, the closed-form value usually quoted.
  paper_half,
  /// g_{1/2}(t) = -t^2/2 by analytic continuation of the Mellin moment; gives
  /// Q_t = Q_0 - t^2/(2m) P_0. The default.
  regularized_half,
  /// int_0^{S_max} f_alpha(t, s) s ds with divergence diagnostics.
  truncated_numeric,
};

const char* to_string(FreeMode mode) noexcept;
/// Accepts "paper-half", "regularized-half", "truncated-numeric"; throws
/// Error(domain) otherwise.
FreeMode parse_free_mode(const std::string& name);

struct FreeParticleOptions {
  FreeMode mode = FreeMode::regularized_half;
  /// Upper limit of the truncated integral.
  double s_max = 1e4;
};

struct FreeParticleDiagnostics {
  /// The improper integral int_0^inf f s ds diverges (every alpha < 1).
  bool divergent = false;
  std::optional<double> s_max;
  /// Truncated integrals at S_max/100, S_max/10 and S_max.
  std::optional<double> value_s100, value_s10, value_s1;
  /// log10 of the ratio of successive decade increments; tends to 1 - alpha.
  std::optional<double> measured_exponent;
  double predicted_exponent = 0.0;
  /// alpha t / (Gamma(1 - alpha) (1 - alpha)): the truncated integral grows
  /// like tail_coefficient * S_max^{1 - alpha}.
  double tail_coefficient = 0.0;
  std::optional<double> tail_growth_term;
  double error_estimate = 0.0;
};

struct FreeParticleG {
  double value = 0.0;
  FreeParticleDiagnostics diagnostics;
};

/// alpha = 1 gives the classical g = t in every mode. The half modes require
/// alpha = 1/2 (Error(unsupported_mode) otherwise).
FreeParticleG free_particle_g(const FractionalOrder& order, double t,
                              const FreeParticleOptions& opts = {},
                              const KernelConfig& cfg = {});

/// [[1, g/m], [0, 1]].
SolutionCoeffs free_particle_coeffs(const FractionalOrder& order, double t, double m,
                                    const FreeParticleOptions& opts = {},
                                    const KernelConfig& cfg = {});

/// Same matrix from an already computed g.
SolutionCoeffs free_particle_coeffs(const FreeParticleG& g, double m);

}  // namespace frachq
