#pragma once

// One-sided stable subordination kernel f_alpha(t, s): the probability
// density in s whose Laplace transform is exp(-t z^alpha).

#include <complex>
#include <functional>
#include <numbers>
#include <optional>

namespace frachq {

/// Exponent alpha in (0, 1]. alpha == 1 is the classical (unsubordinated)
/// case and bypasses the kernel entirely.
class FractionalOrder {
 public:
  explicit FractionalOrder(double alpha);

  double alpha() const noexcept { return alpha_; }
  bool is_classical() const noexcept { return alpha_ == 1.0; }

 private:
  double alpha_;
};

struct KernelConfig {
  double rel_tol = 1e-10;
  /// Absolute tolerance on the normalised density f_alpha(1, u), scaled by
  /// min(1, u^{-1-alpha}) to follow the algebraic tail.
  double abs_tol = 1e-12;
  /// Contour angle of the two-ray representation, in (pi/2, pi].
  double theta = std::numbers::pi;
  /// Interval budget of every adaptive integration.
  int max_panels = 4000;
  /// Largest stable tail mass P(S > s_max) left out when truncating.
  double tail_cut = 1e-12;

  /// Throws Error(domain) if a field is outside its valid range.
  void validate() const;
};

struct KernelValue {
  double value = 0.0;
  double error = 0.0;
};

/// f_alpha(t, s) from the two-ray contour integral
///   (1/pi) int_0^inf exp(s r cos th - t r^a cos(a th))
///                    sin(s r sin th - t r^a sin(a th) + th) dr.
/// Requires 0 < alpha < 1, t > 0, s >= 0. Returns 0 at s = 0. Throws
/// Error(point_mass) for t < 1e-12 and QuadratureFailure when the r-integral
/// does not converge within cfg.max_panels.
KernelValue eval_kernel(const FractionalOrder& order, double t, double s,
                        const KernelConfig& cfg = {});

/// Levy-Smirnov density t/(2 sqrt(pi)) s^{-3/2} exp(-t^2/(4s)), the exact
/// alpha = 1/2 kernel.
double eval_kernel_closed_half(double t, double s);

/// f_alpha(1, u). All kernel evaluations go through here; eval_kernel rescales
/// with f_alpha(t, s) = t^{-1/alpha} f_alpha(1, s t^{-1/alpha}). Below
/// left_support_bound(alpha) the value is 0 and the error carries the
/// asymptotic magnitude.
KernelValue unit_stable_density(double alpha, double u, const KernelConfig& cfg);

/// Contour angle actually used for f_alpha(1, u). When cos(alpha*theta) < 0
/// the r^alpha term grows along the ray before exp(u r cos theta) takes over;
/// if the peak exponent exceeds 1 theta is lowered (towards pi/(2 alpha))
/// until it equals 1, which caps cancellation at a factor e.
double effective_theta(double alpha, double theta, double u);

/// u below which f_alpha(1, u) is smaller than exp(-60) times its algebraic
/// prefactor (left-tail asymptotics of the one-sided stable law).
double left_support_bound(double alpha);

/// Leading small-u asymptotics of f_alpha(1, u):
///   c u^{-(2-a)/(2(1-a))} exp(-(1-a) a^{a/(1-a)} u^{-a/(1-a)}).
double left_tail_asymptotic(double alpha, double u);

/// Upper bound on P(S > u) for S with density f_alpha(1, .):
/// P(S > u) <= (e/(e-1)) (1 - exp(-u^{-alpha})) <= 1.582 u^{-alpha}.
double tail_mass_bound(double alpha, double u);

/// Smallest u with tail_mass_bound(alpha, u) <= tail_cut (capped at 1e300).
double tail_cutoff(double alpha, double tail_cut);

/// Leading right-tail term alpha t / Gamma(1 - alpha) s^{-1-alpha}.
double stable_tail_density(double alpha, double t, double s);

/// Weight function for integrate_kernel.
struct Weight {
  std::function<std::complex<double>(double)> eval;
  /// sup |weight| over [0, inf); absent means potentially unbounded.
  std::optional<double> bound;
  /// Longest oscillation period present in the weight, if any.
  std::optional<double> period;
};

struct KernelIntegral {
  std::complex<double> value;
  double error = 0.0;
  /// Set in truncated mode: the integral runs over [0, truncation_point].
  std::optional<double> truncation_point;
  /// Leading stable-tail density at the truncation point.
  std::optional<double> tail_density_bound;
};

/// int_0^inf f_alpha(t, s) weight(s) ds. Unbounded weights are refused with
/// Error(divergence_risk) unless truncate_at is given, in which case the
/// integral runs over [0, *truncate_at] only. alpha == 1 returns weight(t).
KernelIntegral integrate_kernel(const FractionalOrder& order, double t,
                                const Weight& weight, const KernelConfig& cfg = {},
                                std::optional<double> truncate_at = std::nullopt);

struct LaplaceCheck {
  std::complex<double> lhs;  // quadrature of int f(t,s) exp(-z s) ds
  std::complex<double> rhs;  // exp(-t z^alpha), principal branch
  double error = 0.0;        // quadrature error estimate of lhs
};

/// Requires Re z >= 0.
LaplaceCheck laplace_check(const FractionalOrder& order, double t,
                           std::complex<double> z, const KernelConfig& cfg = {});

}  // namespace frachq
