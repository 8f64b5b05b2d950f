// Acceptance suite: one PASS/FAIL line per criterion, with the measured
// residual against its tolerance and the wall time against its budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "frachq/kernel.hpp"
#include "frachq/models.hpp"
#include "frachq/spectral.hpp"
#include "frachq/states.hpp"
#include "oracles.hpp"

#ifndef FRACHQ_CLI
#error "FRACHQ_CLI must name the frachq executable"
#endif
#ifndef CLI_TEST_DIR
#error "CLI_TEST_DIR must name tests/cli"
#endif

using namespace frachq;
using oracle::CMat;
using cd = std::complex<double>;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  // Records residual <= tol under `what`.
  void bound(const std::string& what, double residual, double tol) {
    const bool pass = residual <= tol;
    ok = ok && pass;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s%s %.2e <= %.0e%s", detail.empty() ? "" : "; ",
                  what.c_str(), residual, tol, pass ? "" : " FAILED");
    detail += buf;
  }
  void require(const std::string& what, bool pass) {
    ok = ok && pass;
    detail += (detail.empty() ? "" : "; ") + what + (pass ? "" : " FAILED");
  }
};

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail += std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < budget_s;
  const bool pass = o.ok && in_time;
  failures += !pass;
  std::printf("[%s] %2d %s: %s; time %.2f s < %.0f s%s\n", pass ? "PASS" : "FAIL", id, name,
              o.detail.c_str(), secs, budget_s, in_time ? "" : " EXCEEDED");
  std::fflush(stdout);
}

const double kAlphas[] = {0.1, 0.3, 0.5, 0.7, 0.9};
const double kTimes[] = {0.1, 1.0, 10.0};

double kernel_mass(double alpha, double t) {
  Weight w;
  w.eval = [](double) { return cd(1.0, 0.0); };
  w.bound = 1.0;
  return integrate_kernel(FractionalOrder(alpha), t, w).value.real();
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Runs the CLI, returning exit status; stdout goes to `out`.
int run_cli(const std::string& args, const std::filesystem::path& out) {
  const std::string cmd = std::string("'") + FRACHQ_CLI + "' " + args + " >'" + out.string() +
                          "' 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

int main() {
  criterion(1, "kernel normalization", 5.0, [] {
    Outcome o;
    double worst = 0.0;
    for (double a : kAlphas) {
      for (double t : kTimes) worst = std::max(worst, std::abs(kernel_mass(a, t) - 1.0));
    }
    o.bound("max |mass - 1| over 15 (alpha, t)", worst, 1e-8);
    return o;
  });

  criterion(2, "alpha = 1/2 closed form", 2.0, [] {
    Outcome o;
    double worst = 0.0;
    for (double t : {0.5, 0.75, 1.0, 1.5, 2.0}) {
      for (double s : {0.5, 1.0, 2.0, 5.0, 20.0}) {
        const double ref = oracle::levy_half(t, s);
        const double got = eval_kernel(FractionalOrder(0.5), t, s).value;
        worst = std::max(worst, std::abs(got - ref) / ref);
      }
    }
    o.bound("max relative error on 5x5 grid", worst, 1e-8);
    return o;
  });

  criterion(3, "Laplace identity", 5.0, [] {
    Outcome o;
    const cd zs[] = {{0.5, 0}, {1, 0}, {2, 0}, {1, 1}, {0, -1}};
    double worst = 0.0, branch = 0.0;
    for (double a : kAlphas) {
      for (double t : kTimes) {
        for (cd z : zs) {
          const auto c = laplace_check(FractionalOrder(a), t, z);
          worst = std::max(worst, std::abs(c.lhs - c.rhs));
          branch = std::max(branch, std::abs(c.rhs - oracle::laplace_rhs(a, t, z)));
        }
      }
    }
    o.bound("max |lhs - rhs| over 75 cases", worst, 1e-7);
    o.bound("rhs vs std::pow branch", branch, 1e-14);
    return o;
  });

  criterion(4, "oscillator envelopes", 5.0, [] {
    Outcome o;
    double quad = 0.0;
    for (double a : {0.2, 0.5, 0.8}) {
      for (double w : {0.5, 1.0, 2.0}) {
        for (double t : {0.5, 1.0, 3.0}) {
          const auto q = oscillator_envelope(FractionalOrder(a), w, t, EnvelopeMode::quadrature);
          const auto c = oscillator_envelope(FractionalOrder(a), w, t);
          quad = std::max({quad, std::abs(q.c - c.c), std::abs(q.s - c.s)});
        }
      }
    }
    o.bound("quadrature vs closed form", quad, 1e-6);
    // Reference point from the independent oracle e^{-e^{-i pi/4}}.
    const cd ref = oracle::envelope(0.5, 1.0, 1.0);
    const auto c = oscillator_envelope(FractionalOrder(0.5), 1.0, 1.0);
    const auto q = oscillator_envelope(FractionalOrder(0.5), 1.0, 1.0, EnvelopeMode::quadrature);
    o.bound("closed form at (1/2, 1, 1) vs oracle",
            std::max(std::abs(c.c - ref.real()), std::abs(c.s - ref.imag())), 1e-6);
    o.bound("quadrature at (1/2, 1, 1) vs oracle",
            std::max(std::abs(q.c - ref.real()), std::abs(q.s - ref.imag())), 1e-6);
    double mac = 0.0;
    for (double w : {0.5, 1.0, 2.0}) {
      for (double t : {0.25, 1.0, 4.0}) {
        const auto m = oscillator_envelope_macdonald_half(w, t);
        const auto e = oscillator_envelope(FractionalOrder(0.5), w, t);
        mac = std::max({mac, std::abs(m.c - e.c), std::abs(m.s - e.s)});
      }
    }
    o.bound("Macdonald form vs closed form", mac, 1e-12);
    return o;
  });

  criterion(5, "spectral vs subordination", 30.0, [] {
    Outcome o;
    std::mt19937_64 rng(20240501);
    const int dims[] = {2, 3, 4};
    const double alphas[] = {0.3, 0.5, 0.8};
    const double times[] = {0.5, 2.0};
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const int n = dims[i % 3];
      const double a = alphas[(i / 3) % 3];
      const double t = times[i % 2];
      const CMat h = oracle::random_hermitian(rng, n);
      const CMat x = oracle::random_hermitian(rng, n);
      const Spectrum s = eigendecompose(HermitianOperator(h));
      const CMat spec = fractional_heisenberg_evolve(s, HermitianOperator(x), FractionalOrder(a), t)
                            .matrix();
      const CMat sub = subordinated_heisenberg(s, HermitianOperator(x), FractionalOrder(a), t).value;
      worst = std::max(worst, oracle::max_abs(spec - sub));
    }
    o.bound("max-norm over 20 random pairs", worst, 1e-6);
    return o;
  });

  criterion(6, "density and picture properties", 20.0, [] {
    Outcome o;
    std::mt19937_64 rng(777);
    double herm = 0.0, trace_lab = 0.0, min_eig = 1.0, dual = 0.0;
    bool diag_exact = true;
    for (int i = 0; i < 50; ++i) {
      const CMat h = oracle::random_hermitian(rng, 3);
      const CMat rho = oracle::random_density(rng, 3);
      const CMat x = oracle::random_hermitian(rng, 3);
      const Spectrum s = eigendecompose(HermitianOperator(h));
      const FractionalOrder a(0.1 + 0.8 * (i % 10) / 9.0);
      const double t = 0.25 + 0.1 * i;
      const DensityMatrix r(rho);
      const CMat eb = fractional_vonneumann_eigenbasis(s, r, a, t);
      const CMat eb0 = s.to_eigenbasis(r.matrix());
      for (int j = 0; j < 3; ++j) diag_exact = diag_exact && eb(j, j) == eb0(j, j);
      const CMat lab = s.from_eigenbasis(eb);
      herm = std::max(herm, oracle::max_abs(lab - lab.adjoint()));
      trace_lab = std::max(trace_lab, std::abs(lab.trace() - cd(1.0, 0.0)));
      Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (lab + lab.adjoint()));
      min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
      if (i < 10) {
        const CMat sub = subordinated_heisenberg(s, HermitianOperator(x), a, t).value;
        herm = std::max(herm, oracle::max_abs(sub - sub.adjoint()));
      }
      const auto d = duality_check(s, r, HermitianOperator(x), a, t);
      dual = std::max(dual, std::abs(d.lhs - d.rhs));
    }
    o.bound("Hermiticity defect", herm, 1e-12);
    o.require("eigenbasis populations bitwise unchanged", diag_exact);
    o.bound("lab-frame |Tr - 1|", trace_lab, 1e-13);
    o.bound("-min eigenvalue over 50 qutrits", std::max(0.0, -min_eig), 1e-10);
    o.bound("duality", dual, 1e-10);
    return o;
  });

  criterion(7, "semigroup", 10.0, [] {
    Outcome o;
    std::mt19937_64 rng(99);
    double spectral = 0.0, quad = 0.0;
    for (int i = 0; i < 4; ++i) {
      const int n = 2 + i % 3;
      const CMat h = oracle::random_hermitian(rng, n);
      const HermitianOperator x(oracle::random_hermitian(rng, n));
      const Spectrum s = eigendecompose(HermitianOperator(h));
      const FractionalOrder a(i % 2 ? 0.4 : 0.7);
      const double t1 = 0.6, t2 = 0.9;
      const CMat once = fractional_heisenberg_evolve(s, x, a, t1 + t2).matrix();
      const CMat twice =
          fractional_heisenberg_evolve(s, fractional_heisenberg_evolve(s, x, a, t2), a, t1).matrix();
      spectral = std::max(spectral, oracle::max_abs(once - twice));

      const CMat q2 = subordinated_heisenberg(s, x, a, t2).value;
      const CMat q12 = subordinated_heisenberg(s, HermitianOperator(q2), a, t1).value;
      const CMat q = subordinated_heisenberg(s, x, a, t1 + t2).value;
      quad = std::max(quad, oracle::max_abs(q12 - q));
    }
    o.bound("spectral", spectral, 1e-10);
    o.bound("quadrature", quad, 1e-5);
    return o;
  });

  criterion(8, "free particle reproduction", 2.0, [] {
    Outcome o;
    bool exact = true;
    for (double t : {0.5, 1.0, 2.0}) {
      for (double m : {1.0, 4.0}) {
        for (double x0 : {0.0, 0.25}) {
          for (double p0 : {1.0, -3.0}) {
            const GaussianPacket p{x0, p0, 1.0, 1.0};
            const auto r = evolve_moments(p, free_particle_coeffs(FractionalOrder(0.5), t, m));
            exact = exact && r.mean_q == x0 - (t * t / (2.0 * m)) * p0;
          }
        }
      }
    }
    o.require("default mean_q = x0 - (t^2/2m) p0 exactly", exact);
    bool paper = true;
    for (double t : {0.5, 1.0, 2.0, 3.0}) {
      paper = paper && free_particle_g(FractionalOrder(0.5), t, {FreeMode::paper_half}).value ==
                           t * t / 2.0;
    }
    o.require("paper-half g = t^2/2", paper);
    const auto g =
        free_particle_g(FractionalOrder(0.5), 1.0, {FreeMode::truncated_numeric, 1e4});
    o.require("divergence flagged", g.diagnostics.divergent);
    o.bound("|measured growth exponent - 1/2|",
            g.diagnostics.measured_exponent ? std::abs(*g.diagnostics.measured_exponent - 0.5)
                                            : INFINITY,
            1e-2);
    return o;
  });

  criterion(9, "oscillator statistics", 2.0, [] {
    Outcome o;
    double worst = 0.0;
    for (double a : {0.3, 0.5, 0.9}) {
      for (double t : {0.5, 1.0, 2.5}) {
        const double m = 1.3, w = 0.7, hbar = 0.9, b = 1.4;
        const auto e = oscillator_envelope(FractionalOrder(a), w, t);
        const GaussianPacket p{0.2, -0.4, b, hbar};
        const auto r = evolve_moments(p, oscillator_coeffs({m, w, hbar}, e));
        const double dp =
            hbar * hbar / (2 * b * b) * e.c * e.c + b * b * m * m * w * w / 2 * e.s * e.s;
        const double dq =
            b * b / 2 * e.c * e.c + hbar * hbar / (2 * b * b * m * m * w * w) * e.s * e.s;
        worst = std::max({worst, std::abs(r.disp_p - dp), std::abs(r.disp_q - dq)});
      }
    }
    o.bound("dispersion formulas", worst, 1e-12);
    const auto e = oscillator_envelope(FractionalOrder(0.5), 1.0, 1.0);
    const auto r = evolve_moments({0.0, 0.0, 1.0, 1.0}, oscillator_coeffs({1.0, 1.0, 1.0}, e));
    o.bound("|D_P - 0.121561|", std::abs(r.disp_p - 0.121561), 1e-5);
    o.bound("|D_Q - 0.121561|", std::abs(r.disp_q - 0.121561), 1e-5);
    return o;
  });

  criterion(10, "CLI determinism", 15.0, [] {
    Outcome o;
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("frachq_accept_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    o.require("verify quick exits 0", run_cli("verify quick", dir / "verify.csv") == 0);
    struct Case {
      const char* golden;
      const char* args;
    };
    const Case cases[] = {
        {"kernel_half.csv", "kernel --alpha 0.5 --time 1 --s-start 0 --s-stop 5 --s-count 11"},
        {"oscillator_half.csv",
         "oscillator --alpha 0.5 --t-start 0 --t-stop 5 --t-count 11 --x0 1 --p0 0.5"},
        {"qubit_density.csv",
         "density-evolve --preset qubit --t-start 0 --t-stop 2.5 --t-count 6 --method "
         "subordination"},
    };
    bool same = true, golden = true;
    for (const auto& c : cases) {
      const fs::path a = dir / "a.csv", b = dir / "b.csv";
      const int ra = run_cli(std::string(c.args) + " --threads 1", a);
      const int rb = run_cli(std::string(c.args) + " --threads 4", b);
      const std::string sa = slurp(a), sb = slurp(b);
      same = same && ra == 0 && rb == 0 && !sa.empty() && sa == sb;
      golden = golden && sa == slurp(fs::path(CLI_TEST_DIR) / "golden" / c.golden);
    }
    fs::remove_all(dir);
    o.require("threads 1 vs 4 byte-identical", same);
    o.require("matches frozen goldens", golden);
    return o;
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
