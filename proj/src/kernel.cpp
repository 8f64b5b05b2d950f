#include "frachq/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "frachq/error.hpp"
#include "frachq/kernel_average.hpp"
#include "frachq/quadrature.hpp"

namespace frachq {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double kPointMassTime = 1e-12;

std::string describe(const char* what, double v) {
  std::ostringstream os;
  os.precision(17);
  os << what << " (got " << v << ")";
  return os.str();
}

void require_fractional(const FractionalOrder& order) {
  if (order.is_classical()) {
    throw Error(ErrorCode::domain,
                "alpha must lie in (0, 1) for kernel evaluation; alpha = 1 has "
                "no density (the kernel is a point mass at s = t)");
  }
}

// Tail bound for int_X^inf q x^{q-1} exp(-a x^q - b x) dx, in logs (a > 0).
double log_tail_bound(double X, double q, double a, double b) {
  const double inf = std::numeric_limits<double>::infinity();
  if (b < 0.0) {
    // a x^q + b x >= a x^q / 2 once a x^{q-1} >= 2 |b|.
    if (X < std::pow(-2.0 * b / a, 1.0 / (q - 1.0))) return inf;
    return std::log(2.0 / a) - 0.5 * a * std::pow(X, q);
  }
  double best = -b * X - a * std::pow(X, q) - std::log(a);
  if (b > 0.0 && X >= 2.0 * (q - 1.0) / b) {
    const double alt = -a * std::pow(X, q) + std::log(2.0 * q / b) +
                       (q - 1.0) * std::log(X) - b * X;
    best = std::min(best, alt);
  }
  return best;
}

// Peak exponent of exp(-|cos(a th)| ... ) growth along the ray at angle th:
// max_r (|cos(a th)| r^a - u |cos th| r) when cos(a th) < 0.
double ray_amplification(double alpha, double theta, double u) {
  const double ca = std::cos(alpha * theta);
  if (ca >= 0.0) return 0.0;
  const double c1 = -std::cos(theta);
  const double r = std::pow(alpha * -ca / (u * c1), 1.0 / (1.0 - alpha));
  return (1.0 - alpha) * -ca * std::pow(r, alpha);
}

}  // namespace

FractionalOrder::FractionalOrder(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::domain,
                describe("alpha must satisfy 0 < alpha <= 1", alpha));
  }
}

void KernelConfig::validate() const {
  if (!(rel_tol > 0.0)) throw Error(ErrorCode::domain, describe("rel_tol must be > 0", rel_tol));
  if (!(abs_tol > 0.0)) throw Error(ErrorCode::domain, describe("abs_tol must be > 0", abs_tol));
  if (!(theta > pi / 2 && theta <= pi)) {
    throw Error(ErrorCode::domain, describe("theta must lie in (pi/2, pi]", theta));
  }
  if (max_panels < 1) {
    throw Error(ErrorCode::domain, describe("max_panels must be >= 1", max_panels));
  }
  if (!(tail_cut > 0.0 && tail_cut < 1.0)) {
    throw Error(ErrorCode::domain, describe("tail_cut must lie in (0, 1)", tail_cut));
  }
}

double effective_theta(double alpha, double theta, double u) {
  if (ray_amplification(alpha, theta, u) <= 1.0) return theta;
  // Amplification vanishes at pi/(2 alpha) and grows with theta.
  double lo = pi / (2.0 * alpha), hi = theta;
  for (int i = 0; i < 50; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ray_amplification(alpha, mid, u) <= 1.0 ? lo : hi) = mid;
  }
  return lo;
}

double left_support_bound(double alpha) {
  const double r = alpha / (1.0 - alpha);
  const double coef = (1.0 - alpha) * std::pow(alpha, r);
  const double u = std::pow(coef / 60.0, 1.0 / r);
  return std::max(u, 1e-300);
}

double tail_mass_bound(double alpha, double u) {
  if (u <= 0.0) return 1.0;
  return std::min(1.0, std::numbers::e / (std::numbers::e - 1.0) *
                           -std::expm1(-std::pow(u, -alpha)));
}

double tail_cutoff(double alpha, double tail_cut) {
  const double log_u = std::log(1.582 / tail_cut) / alpha;
  return log_u > std::log(1e300) ? 1e300 : std::exp(log_u);
}

double stable_tail_density(double alpha, double t, double s) {
  return alpha * t / std::tgamma(1.0 - alpha) * std::pow(s, -1.0 - alpha);
}

double left_tail_asymptotic(double alpha, double u) {
  const double r = alpha / (1.0 - alpha);
  const double c = std::sqrt(std::pow(alpha, 1.0 / (1.0 - alpha)) /
                             (2.0 * pi * (1.0 - alpha)));
  return c * std::pow(u, -(2.0 - alpha) / (2.0 * (1.0 - alpha))) *
         std::exp(-(1.0 - alpha) * std::pow(alpha, r) * std::pow(u, -r));
}

KernelValue unit_stable_density(double alpha, double u, const KernelConfig& cfg) {
  if (!(u > 0.0)) return {};
  if (u < left_support_bound(alpha)) {
    // Far left tail, exp(-60) below its prefactor: report zero with the
    // asymptotic magnitude as the error.
    return {0.0, 2.0 * left_tail_asymptotic(alpha, u)};
  }

  const double theta = effective_theta(alpha, cfg.theta, u);
  const double q = 1.0 / alpha;
  const bool straight = theta == pi;
  const double c1 = straight ? -1.0 : std::cos(theta);
  const double s1 = straight ? 0.0 : std::sin(theta);
  const double ca = std::cos(alpha * theta);
  const double sa = std::sin(alpha * theta);

  // With x = r^alpha the integrand is
  //   q x^{q-1} exp(u c1 x^q - ca x) sin(u s1 x^q - sa x + theta).
  const double a = -u * c1;
  const double b = ca;
  auto h = [=](double x) {
    const double xq = std::pow(x, q);
    const double env = std::exp(u * c1 * xq - ca * x);
    if (env == 0.0) return 0.0;
    // sin(theta + psi) expanded so that theta = pi is exact for small psi.
    const double psi = u * s1 * xq - sa * x;
    return q * (xq / x) * env * (s1 * std::cos(psi) + c1 * std::sin(psi));
  };
  auto phase = [=](double x) { return u * s1 * std::pow(x, q) - sa * x + theta; };

  // The absolute tolerance follows the algebraic tail u^{-1-alpha} so that
  // u f(1, u), the density in log u, is resolved uniformly.
  const double abs_tol = cfg.abs_tol * std::min(1.0, std::pow(u, -1.0 - alpha));

  // Truncation point.
  const double log_cut = std::log(1e-2 * abs_tol * pi);
  double X = 1.0;
  auto above_cut = [&](double x) { return log_tail_bound(x, q, a, b) > log_cut; };
  if (above_cut(X)) {
    for (int i = 0; i < 2000 && above_cut(X); ++i) X *= 2.0;
  } else {
    for (int i = 0; i < 2000 && X > 1e-300 && !above_cut(X / 2); ++i) X /= 2.0;
  }
  {
    double lo = X / 2, hi = X;
    for (int i = 0; i < 30; ++i) {
      const double mid = 0.5 * (lo + hi);
      (above_cut(mid) ? lo : hi) = mid;
    }
    X = hi;
  }
  while (X > std::numeric_limits<double>::min() && h(X) == 0.0 && h(X / 2) == 0.0) {
    X /= 2;  // shed the underflowed stretch
  }

  // Panel breakpoints at the sign changes of the sine: phase = k pi.
  std::vector<double> breaks{0.0};
  auto add_crossings = [&](double x0, double x1) {
    const double p0 = phase(x0);
    const double p1 = phase(x1);
    const bool falling = p1 < p0;
    const double lo = std::min(p0, p1), hi = std::max(p0, p1);
    const double k0 = std::floor(lo / pi) + 1;
    const double k1 = std::ceil(hi / pi) - 1;
    if (k1 - k0 + 1 > cfg.max_panels) {
      std::ostringstream os;
      os << "kernel integrand oscillates more than max_panels = " << cfg.max_panels
         << " times (alpha=" << alpha << ", u=" << u << ")";
      throw QuadratureFailure(os.str(), std::numeric_limits<double>::infinity());
    }
    std::vector<double> pts;
    for (double k = k0; k <= k1; k += 1.0) {
      const double level = k * pi;
      double xa = x0, xb = x1;
      if (s1 == 0.0) {
        pts.push_back((theta - level) / sa);
        continue;
      }
      for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (xa + xb);
        const bool above = phase(mid) > level;
        ((above == falling) ? xa : xb) = mid;
        if (xb - xa < 1e-9 * xb) break;
      }
      pts.push_back(0.5 * (xa + xb));
    }
    std::sort(pts.begin(), pts.end());
    for (double p : pts) {
      if (p > breaks.back() && p < x1) breaks.push_back(p);
    }
  };
  double turn = X;
  if (s1 > 0.0 && q > 1.0) {
    turn = std::pow(sa / (q * u * s1), 1.0 / (q - 1.0));
  }
  if (turn < X) {
    add_crossings(0.0, turn);
    breaks.push_back(turn);
    add_crossings(turn, X);
  } else {
    add_crossings(0.0, X);
  }
  if (breaks.back() < X) breaks.push_back(X);

  quad::Options opt;
  opt.abs_tol = abs_tol * pi;
  opt.rel_tol = cfg.rel_tol;
  opt.max_intervals = cfg.max_panels + static_cast<int>(breaks.size());
  auto r = quad::integrate(h, breaks, opt);
  if (!r.converged) {
    std::ostringstream os;
    os << "kernel r-integral did not converge within " << cfg.max_panels
       << " panels (alpha=" << alpha << ", u=" << u << ", error estimate "
       << r.error / pi << ")";
    throw QuadratureFailure(os.str(), r.error / pi);
  }

  KernelValue kv{r.value / pi, r.error / pi + 1e-2 * abs_tol};
  if (kv.value < 0.0) {
    if (-kv.value <= std::max(abs_tol, kv.error)) {
      kv.value = 0.0;
    } else {
      std::ostringstream os;
      os << "kernel quadrature returned a negative density " << kv.value
         << " beyond its error estimate " << kv.error << " (alpha=" << alpha
         << ", u=" << u << ")";
      throw QuadratureFailure(os.str(), kv.error);
    }
  }
  return kv;
}

KernelValue eval_kernel(const FractionalOrder& order, double t, double s,
                        const KernelConfig& cfg) {
  require_fractional(order);
  cfg.validate();
  if (!(t > 0.0)) throw Error(ErrorCode::domain, describe("t must be > 0", t));
  if (!(s >= 0.0)) throw Error(ErrorCode::domain, describe("s must be >= 0", s));
  if (t < kPointMassTime) {
    throw Error(ErrorCode::point_mass,
                describe("t below 1e-12: the kernel is a point mass at s = 0", t));
  }
  if (s == 0.0) return {};
  const double sigma = std::pow(t, 1.0 / order.alpha());
  KernelValue kv = unit_stable_density(order.alpha(), s / sigma, cfg);
  return {kv.value / sigma, kv.error / sigma};
}

double eval_kernel_closed_half(double t, double s) {
  if (!(t > 0.0)) throw Error(ErrorCode::domain, describe("t must be > 0", t));
  if (!(s > 0.0)) throw Error(ErrorCode::domain, describe("s must be > 0", s));
  return t / (2.0 * std::sqrt(pi)) * std::pow(s, -1.5) * std::exp(-t * t / (4.0 * s));
}

KernelIntegral integrate_kernel(const FractionalOrder& order, double t,
                                const Weight& weight, const KernelConfig& cfg,
                                std::optional<double> truncate_at) {
  cfg.validate();
  if (!(t > 0.0)) throw Error(ErrorCode::domain, describe("t must be > 0", t));
  if (!weight.eval) throw Error(ErrorCode::domain, "weight has no evaluator");
  if (weight.period && !(*weight.period > 0.0)) {
    throw Error(ErrorCode::domain, describe("period hint must be > 0", *weight.period));
  }
  if (truncate_at && !(*truncate_at > 0.0)) {
    throw Error(ErrorCode::domain, describe("truncation point must be > 0", *truncate_at));
  }
  if (!weight.bound && !truncate_at) {
    throw Error(ErrorCode::divergence_risk,
                "weight has no sup-norm bound; the integral against the heavy "
                "stable tail may diverge (use truncated mode)");
  }

  KernelIntegral out;
  if (order.is_classical()) {
    out.value = weight.eval(t);
    return out;
  }
  if (t < kPointMassTime) {
    out.value = weight.eval(0.0);
    return out;
  }

  const double bound = weight.bound.value_or(0.0);
  auto avg = detail::kernel_average(order.alpha(), t, weight.eval, bound,
                                    weight.period, cfg, truncate_at);
  out.value = avg.value;
  out.error = avg.error;
  out.truncation_point = avg.truncation_point;
  if (truncate_at) {
    out.tail_density_bound = stable_tail_density(order.alpha(), t, *truncate_at);
  }
  return out;
}

LaplaceCheck laplace_check(const FractionalOrder& order, double t,
                           std::complex<double> z, const KernelConfig& cfg) {
  if (!(z.real() >= 0.0)) {
    throw Error(ErrorCode::domain, describe("Re z must be >= 0", z.real()));
  }
  Weight w;
  w.eval = [z](double s) { return std::exp(-z * s); };
  w.bound = 1.0;
  if (z.imag() != 0.0) w.period = 2.0 * pi / std::abs(z.imag());

  LaplaceCheck out;
  auto r = integrate_kernel(order, t, w, cfg);
  out.lhs = r.value;
  out.error = r.error;
  out.rhs = std::exp(-t * std::pow(z, order.alpha()));
  if (z == std::complex<double>(0.0, 0.0)) out.rhs = 1.0;
  return out;
}

}  // namespace frachq
