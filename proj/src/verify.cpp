#include "frachq/verify.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "frachq/error.hpp"
#include "frachq/kernel.hpp"
#include "frachq/models.hpp"
#include "frachq/quadrature.hpp"
#include "frachq/spectral.hpp"

namespace frachq {

namespace {

using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;

const double kAlphas[] = {0.1, 0.3, 0.5, 0.7, 0.9};
const double kTimes[] = {0.1, 1.0, 10.0};
const cd kLaplaceZ[] = {{0.5, 0.0}, {1.0, 0.0}, {2.0, 0.0}, {1.0, 1.0}, {0.0, -1.0}};

CMatrix random_hermitian(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd;
  CMatrix m(n, n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) m(j, k) = cd(nd(rng), nd(rng));
  }
  return 0.5 * (m + m.adjoint());
}

CMatrix random_density(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd;
  CMatrix g(n, n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) g(j, k) = cd(nd(rng), nd(rng));
  }
  CMatrix r = g * g.adjoint();
  r /= r.trace().real();
  return 0.5 * (r + r.adjoint());
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

double normalization(VerifyLevel) {
  double worst = 0.0;
  Weight one;
  one.eval = [](double) { return cd(1.0, 0.0); };
  one.bound = 1.0;
  for (double a : kAlphas) {
    for (double t : kTimes) {
      const KernelIntegral r = integrate_kernel(FractionalOrder(a), t, one);
      worst = std::max(worst, std::abs(r.value - 1.0));
    }
  }
  return worst;
}

double laplace(VerifyLevel level) {
  double worst = 0.0;
  for (double a : kAlphas) {
    for (double t : kTimes) {
      if (level == VerifyLevel::quick && t != 1.0) continue;
      for (cd z : kLaplaceZ) {
        const LaplaceCheck c = laplace_check(FractionalOrder(a), t, z);
        worst = std::max(worst, std::abs(c.lhs - c.rhs));
      }
    }
  }
  return worst;
}

double qubit_oracle(VerifyLevel) {
  CMatrix h(2, 2), sx(2, 2), sy(2, 2);
  h << 0.5, 0.0, 0.0, -0.5;
  sx << 0.0, 1.0, 1.0, 0.0;
  sy << 0.0, cd(0.0, -1.0), cd(0.0, 1.0), 0.0;
  const Spectrum spec = eigendecompose(HermitianOperator(h));
  const HermitianOperator a(sx);
  const FractionalOrder order(0.5);
  const OscillatorEnvelope e = oscillator_envelope(order, 1.0, 1.0);
  const CMatrix expect = e.c * sx - e.s * sy;
  const CMatrix spectral = fractional_heisenberg_evolve(spec, a, order, 1.0).matrix();
  const CMatrix sub = subordinated_heisenberg(spec, a, order, 1.0).value;
  return std::max(max_abs(spectral - expect), max_abs(sub - expect));
}

double nonnegativity(VerifyLevel) {
  double worst = 0.0;
  for (double a : kAlphas) {
    for (double t : {0.1, 1.0, 10.0}) {
      for (double s = 1e-3; s < 1e4; s *= 1.7) {
        const double v = eval_kernel(FractionalOrder(a), t, s).value;
        worst = std::max(worst, -v);
      }
    }
  }
  return worst;
}

// Deviations are measured in units of the per-value tolerance
// rel_tol |f| + abs_tol: deep-tail values below abs_tol are only accurate in
// the absolute sense.
double theta_independence(VerifyLevel) {
  KernelConfig alt;
  alt.theta = 0.75 * pi;
  const KernelConfig base;
  double worst = 0.0;
  for (double a : {0.3, 0.5, 0.7, 0.9}) {
    for (double t : {0.5, 1.0, 2.0}) {
      for (double s : {0.2, 1.0, 5.0, 20.0}) {
        const double x = eval_kernel(FractionalOrder(a), t, s, base).value;
        const double y = eval_kernel(FractionalOrder(a), t, s, alt).value;
        worst = std::max(worst, std::abs(x - y) /
                                    (base.rel_tol * std::abs(x) + base.abs_tol));
      }
    }
  }
  return worst;
}

double self_similarity(VerifyLevel) {
  const KernelConfig cfg;
  double worst = 0.0;
  for (double a : {0.3, 0.5, 0.7, 0.9}) {
    for (double t : {0.5, 2.0, 5.0}) {
      for (double s : {0.2, 1.0, 5.0, 20.0}) {
        const FractionalOrder o(a);
        const double x = eval_kernel(o, t, s, cfg).value;
        const double sc = std::pow(t, -1.0 / a);
        const double y = sc * eval_kernel(o, 1.0, s * sc, cfg).value;
        worst = std::max(worst, std::abs(x - y) /
                                    (cfg.rel_tol * std::abs(x) + cfg.abs_tol));
      }
    }
  }
  return worst;
}

double half_closed_form(VerifyLevel) {
  double worst = 0.0;
  for (double t : {0.5, 0.75, 1.0, 1.5, 2.0}) {
    for (double s : {0.5, 1.0, 2.0, 5.0, 20.0}) {
      const double q = eval_kernel(FractionalOrder(0.5), t, s).value;
      const double c = eval_kernel_closed_half(t, s);
      worst = std::max(worst, std::abs(q - c) / c);
    }
  }
  return worst;
}

double chapman_kolmogorov(VerifyLevel) {
  double worst = 0.0;
  struct Point {
    double a, t1, t2, u;
  };
  for (const Point& p : {Point{0.5, 0.6, 0.9, 1.2}, Point{0.7, 1.0, 0.5, 2.0},
                         Point{0.3, 0.4, 0.4, 3.0}}) {
    const FractionalOrder o(p.a);
    quad::Options opt;
    opt.abs_tol = 1e-10;
    opt.rel_tol = 1e-8;
    const double br[] = {0.0, 0.25 * p.u, 0.5 * p.u, 0.75 * p.u, p.u};
    const auto r = quad::integrate(
        [&](double v) {
          if (v <= 0.0 || v >= p.u) return 0.0;
          return eval_kernel(o, p.t1, v).value * eval_kernel(o, p.t2, p.u - v).value;
        },
        br, opt);
    const double rhs = eval_kernel(o, p.t1 + p.t2, p.u).value;
    worst = std::max(worst, std::abs(r.value - rhs));
  }
  return worst;
}

double envelope_agreement(VerifyLevel) {
  double worst = 0.0;
  for (double a : {0.3, 0.5, 0.8}) {
    for (double w : {0.5, 1.0, 2.0}) {
      for (double t : {0.1, 1.0, 5.0}) {
        const FractionalOrder o(a);
        const auto c = oscillator_envelope(o, w, t, EnvelopeMode::closed_form);
        const auto q = oscillator_envelope(o, w, t, EnvelopeMode::quadrature);
        worst = std::max({worst, std::abs(c.c - q.c), std::abs(c.s - q.s)});
      }
    }
  }
  return worst;
}

double macdonald(VerifyLevel) {
  double worst = 0.0;
  for (double w : {0.25, 1.0, 4.0}) {
    for (double t : {0.1, 1.0, 3.0}) {
      const auto c = oscillator_envelope(FractionalOrder(0.5), w, t);
      const auto m = oscillator_envelope_macdonald_half(w, t);
      worst = std::max({worst, std::abs(c.c - m.c), std::abs(c.s - m.s)});
    }
  }
  return worst;
}

double spectral_oracle(VerifyLevel level) {
  std::mt19937_64 rng(20240611);
  const double alphas[] = {0.3, 0.5, 0.8};
  const double times[] = {0.5, 2.0};
  const int count = level == VerifyLevel::quick ? 3 : 12;
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const int n = 2 + i % 3;
    const Spectrum spec = eigendecompose(HermitianOperator(random_hermitian(rng, n)));
    const HermitianOperator a(random_hermitian(rng, n));
    const FractionalOrder o(alphas[i % 3]);
    const double t = times[(i / 3) % 2];
    const CMatrix x = fractional_heisenberg_evolve(spec, a, o, t).matrix();
    const CMatrix y = subordinated_heisenberg(spec, a, o, t).value;
    worst = std::max(worst, max_abs(x - y));
  }
  return worst;
}

double positivity(VerifyLevel) {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Spectrum spec = eigendecompose(HermitianOperator(random_hermitian(rng, 3)));
    const DensityMatrix rho(random_density(rng, 3));
    for (double a : {0.3, 0.5, 0.8}) {
      for (double t : {0.1, 1.0, 10.0}) {
        const CMatrix r =
            spec.from_eigenbasis(fractional_vonneumann_eigenbasis(spec, rho, FractionalOrder(a), t));
        Eigen::SelfAdjointEigenSolver<CMatrix> es(r, Eigen::EigenvaluesOnly);
        worst = std::max(worst, -es.eigenvalues().minCoeff());
      }
    }
  }
  return std::max(worst, 0.0);
}

double duality(VerifyLevel) {
  std::mt19937_64 rng(11);
  double worst = 0.0;
  for (int i = 0; i < 30; ++i) {
    const int n = 2 + i % 3;
    const Spectrum spec = eigendecompose(HermitianOperator(random_hermitian(rng, n)));
    const DensityMatrix rho(random_density(rng, n));
    const HermitianOperator a(random_hermitian(rng, n));
    const DualityCheck d = duality_check(spec, rho, a, FractionalOrder(0.3 + 0.1 * (i % 6)),
                                         0.5 * (1 + i % 4));
    worst = std::max(worst, std::abs(d.lhs - d.rhs));
  }
  return worst;
}

double semigroup(VerifyLevel) {
  std::mt19937_64 rng(13);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int n = 2 + i % 3;
    const Spectrum spec = eigendecompose(HermitianOperator(random_hermitian(rng, n)));
    const HermitianOperator a(random_hermitian(rng, n));
    const FractionalOrder o(0.2 + 0.2 * (i % 4));
    const double t1 = 0.3 + 0.1 * i, t2 = 1.1;
    const auto two = fractional_heisenberg_evolve(
        spec, fractional_heisenberg_evolve(spec, a, o, t1), o, t2);
    const auto one = fractional_heisenberg_evolve(spec, a, o, t1 + t2);
    worst = std::max(worst, max_abs(two.matrix() - one.matrix()));
  }
  return worst;
}

using CheckFn = double (*)(VerifyLevel);

struct CheckSpec {
  const char* name;
  CheckFn fn;
  double tolerance;
  bool quick;
};

const CheckSpec kChecks[] = {
    {"kernel normalization", normalization, 1e-8, true},
    {"laplace identity", laplace, 1e-7, true},
    {"qubit oracle", qubit_oracle, 1e-6, true},
    {"kernel nonnegativity", nonnegativity, 0.0, false},
    {"theta independence (units of tolerance)", theta_independence, 10.0, false},
    {"self-similarity (units of tolerance)", self_similarity, 10.0, false},
    {"alpha=1/2 closed form (relative)", half_closed_form, 1e-8, false},
    {"chapman-kolmogorov", chapman_kolmogorov, 1e-5, false},
    {"envelope closed form vs quadrature", envelope_agreement, 1e-6, false},
    {"macdonald reduction", macdonald, 1e-12, false},
    {"spectral vs subordination", spectral_oracle, 1e-6, false},
    {"density positivity", positivity, 1e-10, false},
    {"duality", duality, 1e-10, false},
    {"spectral semigroup", semigroup, 1e-10, false},
};

}  // namespace

std::vector<CheckResult> run_verify(VerifyLevel level,
                                    const std::function<void(const CheckResult&)>& on_result) {
  std::vector<CheckResult> out;
  for (const CheckSpec& c : kChecks) {
    if (level == VerifyLevel::quick && !c.quick) continue;
    CheckResult r;
    r.name = c.name;
    r.tolerance = c.tolerance;
    try {
      r.residual = c.fn(level);
      r.passed = r.residual <= c.tolerance;
    } catch (const std::exception& e) {
      r.residual = std::numeric_limits<double>::infinity();
      r.passed = false;
      r.detail = e.what();
    }
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace frachq
