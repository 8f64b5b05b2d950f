#pragma once

// Outer quadrature shared by integrate_kernel and the subordinator:
//   int_0^inf f_alpha(t, s) g(s) ds
// for g returning double, complex or a dense matrix.
//
// Without a period hint g is treated as slowly varying and integrated in
// y = ln s from the left edge of the kernel support to the point where the
// stable tail mass drops below cfg.tail_cut.
//
// With a period hint P (longest period present in g) the heavy oscillatory
// tail is handled with a Gaussian taper chi centred at s_c with width 1.5 P:
//   int f g = int f chi g + [int f (1 - chi)] * <g>,
// where <g> is the Gaussian-window mean of g around s_c. The taper has no
// Fourier content at frequencies >= 2 pi / P beyond exp(-(3 pi)^2 / 2), so the
// oscillating part of g contributes nothing to the second term.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "frachq/error.hpp"
#include "frachq/kernel.hpp"
#include "frachq/quadrature.hpp"

namespace frachq::detail {

template <class V>
struct KernelAverage {
  V value;
  double error = 0.0;
  std::optional<double> truncation_point;
};

inline std::vector<double> log_breaks(double lo, double hi, double step = 2.0) {
  std::vector<double> b;
  const double ylo = std::log(lo);
  const double yhi = std::log(hi);
  const int n = std::max(1, static_cast<int>(std::ceil((yhi - ylo) / step)));
  b.reserve(n + 1);
  for (int i = 0; i <= n; ++i) b.push_back(ylo + (yhi - ylo) * i / n);
  return b;
}

inline std::vector<double> linear_breaks(double lo, double hi, double width) {
  std::vector<double> b;
  const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / width)));
  b.reserve(n + 1);
  for (int i = 0; i <= n; ++i) b.push_back(lo + (hi - lo) * i / n);
  return b;
}

template <class R>
void require_converged(const R& r, const char* what) {
  if (!r.converged) {
    std::ostringstream os;
    os << what << " did not converge (error estimate " << r.error << ")";
    throw QuadratureFailure(os.str(), r.error);
  }
}

/// bound: sup-norm of g (ignored when truncate_at is set).
template <class G>
auto kernel_average(double alpha, double t, G&& g, double bound,
                    std::optional<double> period, const KernelConfig& cfg,
                    std::optional<double> truncate_at) {
  using V = quad::plain_t<decltype(g(1.0))>;

  const double sigma = std::pow(t, 1.0 / alpha);
  auto density = [&](double s) {
    return unit_stable_density(alpha, s / sigma, cfg).value / sigma;
  };
  const double s_lo = sigma * left_support_bound(alpha);

  quad::Options opt;
  opt.abs_tol = cfg.abs_tol + cfg.rel_tol * bound;
  opt.rel_tol = cfg.rel_tol;
  opt.max_intervals = cfg.max_panels;

  // Kernel values carry relative error rel_tol, which propagates linearly.
  const double kernel_err = cfg.rel_tol * bound;

  auto log_part = [&](auto&& h, double lo, double hi, const char* what) {
    using H = quad::plain_t<decltype(h(1.0))>;
    auto breaks = log_breaks(lo, hi);
    opt.max_intervals = cfg.max_panels + static_cast<int>(breaks.size());
    auto r = quad::integrate(
        [&](double y) -> H {
          const double s = std::exp(y);
          return h(s) * s;
        },
        breaks, opt);
    require_converged(r, what);
    return r;
  };
  auto linear_part = [&](auto&& h, double lo, double hi, double width,
                         const char* what) {
    auto breaks = linear_breaks(lo, hi, width);
    opt.max_intervals = cfg.max_panels + static_cast<int>(breaks.size());
    auto r = quad::integrate(h, breaks, opt);
    require_converged(r, what);
    return r;
  };
  // Explicit V returns: Eigen products are lazy and would dangle.
  auto weighted = [&](double s) -> V { return g(s) * density(s); };

  KernelAverage<V> out;

  if (truncate_at) {
    const double s_max = *truncate_at;
    out.truncation_point = s_max;
    if (s_max <= s_lo) {
      out.value = g(s_max) * 0.0;
      return out;
    }
    auto r = log_part(weighted, s_lo, s_max, "truncated kernel integral");
    out.value = r.value;
    out.error = r.error;
    return out;
  }

  const double s_hi = sigma * tail_cutoff(alpha, cfg.tail_cut);
  const double tail_err = bound * tail_mass_bound(alpha, s_hi / sigma);

  if (!period) {
    auto r = log_part(weighted, s_lo, s_hi, "kernel integral");
    out.value = r.value;
    out.error = r.error + tail_err + kernel_err;
    return out;
  }

  const double P = *period;
  const double width = 1.5 * P;
  const double reach = 8.5 * width;  // erfc(8.5 / sqrt 2) ~ 1e-17
  const double s_c = std::max(18.0 * P, s_lo + reach);
  const double s_end = s_c + reach;
  const double half = 0.5 * P;

  auto chi = [&](double s) {
    return 0.5 * std::erfc((s - s_c) / (std::numbers::sqrt2 * width));
  };

  // Head: f * chi * g over [s_lo, s_end].
  V head;
  double err = 0.0;
  bool have_head = false;
  const double lin_lo = std::max(s_lo, half);
  if (s_lo < half) {
    auto r = log_part([&](double s) -> V { return weighted(s) * chi(s); }, s_lo, half,
                      "kernel integral (head)");
    head = r.value;
    err += r.error;
    have_head = true;
  }
  {
    auto r = linear_part([&](double s) -> V { return weighted(s) * chi(s); }, lin_lo,
                         s_end, half, "kernel integral (oscillatory head)");
    head = have_head ? V(head + r.value) : V(r.value);
    err += r.error;
  }

  // Tail mass: int f (1 - chi), non-oscillatory.
  const double taper_lo = std::max(s_lo, s_c - reach);
  double mass = 0.0;
  {
    quad::Options mopt = opt;
    mopt.abs_tol = cfg.abs_tol + cfg.rel_tol;
    std::swap(opt, mopt);
    auto r1 = linear_part(
        [&](double s) { return density(s) * (1.0 - chi(s)); }, taper_lo, s_end,
        half, "kernel tail mass");
    mass += r1.value;
    err += r1.error * bound;
    if (s_hi > s_end) {
      auto r2 = log_part(density, s_end, s_hi, "kernel tail mass");
      mass += r2.value;
      err += r2.error * bound;
    }
    std::swap(opt, mopt);
  }

  // Gaussian-window mean of g around s_c.
  const double norm = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * width);
  auto r = linear_part(
      [&](double s) -> V {
        const double d = (s - s_c) / width;
        return g(s) * (norm * std::exp(-0.5 * d * d));
      },
      s_c - reach, s_end, half, "kernel tail average");
  err += r.error * mass;

  out.value = head + r.value * mass;
  // exp(-(2 pi * 1.5)^2 / 2) bounds the leakage of oscillating components.
  out.error = err + tail_err + kernel_err + bound * 1e-19;
  return out;
}

}  // namespace frachq::detail
