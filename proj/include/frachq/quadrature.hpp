#pragma once

// Globally adaptive Gauss-Kronrod (10/21 point) quadrature over a set of
// initial panels. The integrand may return double, std::complex<double> or a
// dense Eigen matrix; errors are measured in the max-norm over entries.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <span>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

namespace frachq::quad {

inline double value_norm(double v) { return std::abs(v); }
inline double value_norm(const std::complex<double>& v) { return std::abs(v); }
template <class Derived>
double value_norm(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Eigen expression templates evaluate to their plain matrix type.
template <class T, class = void>
struct plain {
  using type = T;
};
template <class T>
struct plain<T, std::void_t<typename T::PlainObject>> {
  using type = typename T::PlainObject;
};
template <class T>
using plain_t = typename plain<std::decay_t<T>>::type;

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_intervals = 2000;
};

template <class V>
struct Result {
  V value;
  double error = 0.0;
  double l1 = 0.0;  // quadrature of |f|, used for the roundoff floor
  int intervals = 0;
  bool converged = false;
};

namespace detail {

// Kronrod abscissae (descending) and weights, with the embedded 10-point
// Gauss weights for the odd-indexed abscissae.
inline constexpr double xgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr double wgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208977380796, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr double wg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

template <class V>
struct Panel {
  double a = 0.0;
  double b = 0.0;
  V value;
  double error = 0.0;
  double l1 = 0.0;
};

template <class V, class F>
Panel<V> gk21(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double ahalf = std::abs(half);

  V fc = f(center);
  V kron = fc * wgk[10];
  V gauss = fc * 0.0;
  double resabs = wgk[10] * value_norm(fc);

  V fv1[10];
  V fv2[10];
  for (int j = 0; j < 10; ++j) {
    const double dx = half * xgk[j];
    fv1[j] = f(center - dx);
    fv2[j] = f(center + dx);
    V sum = fv1[j] + fv2[j];
    kron = kron + sum * wgk[j];
    if (j % 2 == 1) gauss = gauss + sum * wg[j / 2];
    resabs += wgk[j] * (value_norm(fv1[j]) + value_norm(fv2[j]));
  }

  V mean = kron * 0.5;
  double resasc = wgk[10] * value_norm(fc - mean);
  for (int j = 0; j < 10; ++j) {
    resasc += wgk[j] * (value_norm(fv1[j] - mean) + value_norm(fv2[j] - mean));
  }

  Panel<V> p;
  p.a = a;
  p.b = b;
  p.value = kron * half;
  resasc *= ahalf;
  resabs *= ahalf;
  double err = value_norm((kron - gauss) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(50.0 * eps * resabs, err);
  }
  p.error = err;
  p.l1 = resabs;
  return p;
}

}  // namespace detail

/// Integrates f over the union of the panels [breaks[i], breaks[i+1]],
/// bisecting the panel with the largest error until the summed error meets
/// max(abs_tol, rel_tol*|I|) or the interval budget is exhausted. The
/// roundoff floor 100*eps*integral(|f|) counts as convergence.
template <class F>
auto integrate(F&& f, std::span<const double> breaks, const Options& opt) {
  using V = plain_t<decltype(f(0.0))>;
  using P = detail::Panel<V>;

  Result<V> out;
  if (breaks.size() < 2) {
    out.value = f(breaks.empty() ? 0.0 : breaks.front()) * 0.0;
    out.converged = true;
    return out;
  }

  auto cmp = [](const P& x, const P& y) { return x.error < y.error; };
  std::priority_queue<P, std::vector<P>, decltype(cmp)> heap(cmp);
  std::vector<P> frozen;  // too narrow to split further

  bool first = true;
  double err_sum = 0.0;
  double l1_sum = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    P p = detail::gk21<V>(f, breaks[i], breaks[i + 1]);
    if (first) {
      out.value = p.value;
      first = false;
    } else {
      out.value = out.value + p.value;
    }
    err_sum += p.error;
    l1_sum += p.l1;
    heap.push(std::move(p));
  }
  if (first) {
    out.value = f(breaks.front()) * 0.0;
    out.converged = true;
    return out;
  }

  int count = static_cast<int>(heap.size());
  constexpr double eps = std::numeric_limits<double>::epsilon();
  auto target = [&] {
    return std::max({opt.abs_tol, opt.rel_tol * value_norm(out.value),
                     100.0 * eps * l1_sum});
  };

  while (err_sum > target() && !heap.empty() && count < opt.max_intervals) {
    P worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) < 1e-14 * std::max(std::abs(worst.a), std::abs(worst.b))) {
      frozen.push_back(std::move(worst));
      continue;
    }
    P left = detail::gk21<V>(f, worst.a, mid);
    P right = detail::gk21<V>(f, mid, worst.b);
    out.value = out.value + (left.value + right.value - worst.value);
    err_sum += left.error + right.error - worst.error;
    l1_sum += left.l1 + right.l1 - worst.l1;
    heap.push(std::move(left));
    heap.push(std::move(right));
    ++count;
  }

  // Re-sum to shed the drift of the running updates.
  V total = out.value * 0.0;
  double err = 0.0;
  double l1 = 0.0;
  auto absorb = [&](const P& p) {
    total = total + p.value;
    err += p.error;
    l1 += p.l1;
  };
  for (const auto& p : frozen) absorb(p);
  while (!heap.empty()) {
    absorb(heap.top());
    heap.pop();
  }
  out.value = total;
  out.error = err;
  out.l1 = l1;
  out.intervals = count;
  out.converged = err <= std::max({opt.abs_tol, opt.rel_tol * value_norm(total),
                                   100.0 * eps * l1});
  return out;
}

}  // namespace frachq::quad
