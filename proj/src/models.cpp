#include "frachq/models.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "frachq/error.hpp"

namespace frachq {

namespace {

using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << what << " must be finite and > 0 (got " << v << ")";
    throw Error(ErrorCode::domain, os.str());
  }
}

void require_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    std::ostringstream os;
    os << "t must be finite and >= 0 (got " << t << ")";
    throw Error(ErrorCode::domain, os.str());
  }
}

// K_{-1/2}(z) = K_{1/2}(z) = sqrt(pi / (2 z)) e^{-z}, principal square root.
cd macdonald_half(cd z) { return std::sqrt(pi / (2.0 * z)) * std::exp(-z); }

}  // namespace

void OscillatorParams::validate() const {
  require_positive(m, "mass m");
  require_positive(omega, "omega");
  require_positive(hbar, "hbar");
}

OscillatorEnvelope oscillator_envelope(const FractionalOrder& order, double omega, double t,
                                       EnvelopeMode mode, const KernelConfig& cfg) {
  require_positive(omega, "omega");
  require_time(t);
  if (t == 0.0) return {1.0, 0.0};
  if (order.is_classical()) return {std::cos(omega * t), std::sin(omega * t)};

  if (mode == EnvelopeMode::closed_form) {
    const double a = order.alpha();
    const double wa = std::pow(omega, a);
    const double damp = std::exp(-t * wa * std::cos(a * pi / 2));
    const double phase = t * wa * std::sin(a * pi / 2);
    return {damp * std::cos(phase), damp * std::sin(phase)};
  }

  Weight w;
  w.eval = [omega](double s) { return std::polar(1.0, omega * s); };
  w.bound = 1.0;
  w.period = 2.0 * pi / omega;
  const KernelIntegral r = integrate_kernel(order, t, w, cfg);
  return {r.value.real(), r.value.imag()};
}

OscillatorEnvelope oscillator_envelope_macdonald_half(double omega, double t) {
  require_positive(omega, "omega");
  require_positive(t, "t");
  const double x = omega * t * t / 4.0;
  const double k = std::pow(omega * t * t / (4.0 * pi * pi), 0.25);
  const cd zp = 2.0 * std::polar(1.0, pi / 4) * std::sqrt(x);
  const cd zm = 2.0 * std::polar(1.0, -pi / 4) * std::sqrt(x);
  const cd kp = std::polar(1.0, pi / 8) * macdonald_half(zp);
  const cd km = std::polar(1.0, -pi / 8) * macdonald_half(zm);
  const cd c = k * (kp + km);
  const cd s = cd(0.0, 1.0) * k * (kp - km);
  return {c.real(), s.real()};
}

SolutionCoeffs oscillator_coeffs(const OscillatorParams& params, const FractionalOrder& order,
                                 double t, EnvelopeMode mode, const KernelConfig& cfg) {
  params.validate();
  return oscillator_coeffs(params, oscillator_envelope(order, params.omega, t, mode, cfg));
}

SolutionCoeffs oscillator_coeffs(const OscillatorParams& params, const OscillatorEnvelope& e) {
  params.validate();
  const double mw = params.m * params.omega;
  SolutionCoeffs c;
  c << e.c, e.s / mw, -mw * e.s, e.c;
  return c;
}

const char* to_string(FreeMode mode) noexcept {
  switch (mode) {
    case FreeMode::paper_half: return "paper-half";
    case FreeMode::regularized_half: return "regularized-half";
    case FreeMode::truncated_numeric: return "truncated-numeric";
  }
  return "unknown";
}

FreeMode parse_free_mode(const std::string& name) {
  if (name == "paper-half") return FreeMode::paper_half;
  if (name == "regularized-half") return FreeMode::regularized_half;
  if (name == "truncated-numeric") return FreeMode::truncated_numeric;
  throw Error(ErrorCode::domain,
              "unknown free-particle mode '" + name +
                  "' (expected paper-half, regularized-half or truncated-numeric)");
}

FreeParticleG free_particle_g(const FractionalOrder& order, double t,
                              const FreeParticleOptions& opts, const KernelConfig& cfg) {
  require_time(t);
  const double a = order.alpha();
  FreeParticleG out;
  out.diagnostics.predicted_exponent = 1.0 - a;
  if (order.is_classical()) {
    out.value = t;
    return out;
  }
  out.diagnostics.divergent = true;
  out.diagnostics.tail_coefficient = a * t / (std::tgamma(1.0 - a) * (1.0 - a));

  if (opts.mode != FreeMode::truncated_numeric) {
    if (a != 0.5) {
      std::ostringstream os;
      os << "free-particle mode " << to_string(opts.mode)
         << " is only defined for alpha = 0.5 (got " << a << ")";
      throw Error(ErrorCode::unsupported_mode, os.str());
    }
    out.value = (opts.mode == FreeMode::paper_half ? 0.5 : -0.5) * t * t;
    return out;
  }

  require_positive(opts.s_max, "s_max");
  if (t == 0.0) return out;
  Weight w;
  w.eval = [](double s) { return std::complex<double>(s, 0.0); };
  auto truncated = [&](double s_max) {
    return integrate_kernel(order, t, w, cfg, s_max);
  };
  const KernelIntegral i1 = truncated(opts.s_max);
  const KernelIntegral i10 = truncated(opts.s_max / 10.0);
  const KernelIntegral i100 = truncated(opts.s_max / 100.0);

  auto& d = out.diagnostics;
  d.s_max = opts.s_max;
  d.value_s1 = i1.value.real();
  d.value_s10 = i10.value.real();
  d.value_s100 = i100.value.real();
  const double inc1 = *d.value_s1 - *d.value_s10;
  const double inc0 = *d.value_s10 - *d.value_s100;
  if (inc1 > 0.0 && inc0 > 0.0) d.measured_exponent = std::log10(inc1 / inc0);
  d.tail_growth_term = d.tail_coefficient * std::pow(opts.s_max, 1.0 - a);
  d.error_estimate = i1.error;
  out.value = i1.value.real();
  return out;
}

SolutionCoeffs free_particle_coeffs(const FractionalOrder& order, double t, double m,
                                    const FreeParticleOptions& opts, const KernelConfig& cfg) {
  require_positive(m, "mass m");
  return free_particle_coeffs(free_particle_g(order, t, opts, cfg), m);
}

SolutionCoeffs free_particle_coeffs(const FreeParticleG& g, double m) {
  require_positive(m, "mass m");
  SolutionCoeffs c;
  c << 1.0, g.value / m, 0.0, 1.0;
  return c;
}

}  // namespace frachq
