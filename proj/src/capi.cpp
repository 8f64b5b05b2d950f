#include "frachq/frachq.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <variant>

#include "frachq/error.hpp"
#include "frachq/kernel.hpp"
#include "frachq/models.hpp"
#include "frachq/spectral.hpp"
#include "frachq/states.hpp"
#include "frachq/verify.hpp"

using namespace frachq;

struct frachq_config {
  KernelConfig cfg;
};

struct frachq_matrix {
  frachq_role role;
  std::variant<HermitianOperator, DensityMatrix> value;

  const CMatrix& matrix() const {
    return std::visit([](const auto& v) -> const CMatrix& { return v.matrix(); }, value);
  }
};

struct frachq_spectrum {
  Spectrum spec;
};

namespace {

thread_local std::string last_error;

frachq_status fail(frachq_status s, const char* msg) {
  last_error = msg;
  return s;
}

// Runs f, translating exceptions into status codes.
template <class F>
frachq_status guarded(F&& f) noexcept {
  try {
    f();
    last_error.clear();
    return FRACHQ_OK;
  } catch (const Error& e) {
    return fail(static_cast<frachq_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(FRACHQ_ERR_OUT_OF_MEMORY, "out of memory");
  } catch (const std::exception& e) {
    return fail(FRACHQ_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(FRACHQ_ERR_INTERNAL, "unknown internal error");
  }
}

#define FRACHQ_REQUIRE(ptr)                                                   \
  do {                                                                        \
    if ((ptr) == nullptr) return fail(FRACHQ_ERR_NULL_ARGUMENT, #ptr " is NULL"); \
  } while (0)

KernelConfig config_of(const frachq_config* c) { return c ? c->cfg : KernelConfig{}; }

EnvelopeMode envelope_mode(frachq_envelope_mode m) {
  switch (m) {
    case FRACHQ_ENVELOPE_CLOSED_FORM: return EnvelopeMode::closed_form;
    case FRACHQ_ENVELOPE_QUADRATURE: return EnvelopeMode::quadrature;
  }
  throw Error(ErrorCode::unsupported_mode, "unknown envelope mode");
}

FreeParticleOptions free_options(frachq_free_mode m, double s_max) {
  FreeParticleOptions o;
  switch (m) {
    case FRACHQ_FREE_PAPER_HALF: o.mode = FreeMode::paper_half; break;
    case FRACHQ_FREE_REGULARIZED_HALF: o.mode = FreeMode::regularized_half; break;
    case FRACHQ_FREE_TRUNCATED_NUMERIC: o.mode = FreeMode::truncated_numeric; break;
    default: throw Error(ErrorCode::unsupported_mode, "unknown free-particle mode");
  }
  o.s_max = s_max;
  return o;
}

void store_coeffs(const SolutionCoeffs& c, double out[4]) {
  out[0] = c(0, 0);
  out[1] = c(0, 1);
  out[2] = c(1, 0);
  out[3] = c(1, 1);
}

GaussianPacket packet_of(const frachq_packet* p) {
  GaussianPacket g;
  g.x0 = p->x0;
  g.p0 = p->p0;
  g.b = p->b;
  g.hbar = p->hbar;
  return g;
}

void store_moments(const MomentReport& r, frachq_moments* out) {
  out->mean_q = r.mean_q;
  out->mean_p = r.mean_p;
  out->disp_q = r.disp_q;
  out->disp_p = r.disp_p;
  out->uncertainty_product = r.uncertainty_product;
}

void store_diagnostics(const FreeParticleDiagnostics& d, frachq_free_diagnostics* diag) {
  *diag = frachq_free_diagnostics{};
  diag->divergent = d.divergent;
  diag->has_truncation = d.s_max.has_value();
  diag->s_max = d.s_max.value_or(0.0);
  diag->value_s100 = d.value_s100.value_or(0.0);
  diag->value_s10 = d.value_s10.value_or(0.0);
  diag->value_s1 = d.value_s1.value_or(0.0);
  diag->has_measured_exponent = d.measured_exponent.has_value();
  diag->measured_exponent = d.measured_exponent.value_or(0.0);
  diag->predicted_exponent = d.predicted_exponent;
  diag->tail_coefficient = d.tail_coefficient;
  diag->tail_growth_term = d.tail_growth_term.value_or(0.0);
  diag->error_estimate = d.error_estimate;
}

frachq_matrix* wrap(frachq_role role, const CMatrix& m) {
  if (role == FRACHQ_ROLE_DENSITY) {
    return new frachq_matrix{role, DensityMatrix(m)};
  }
  return new frachq_matrix{role, HermitianOperator(m)};
}

}  // namespace

extern "C" {

const char* frachq_version(void) { return "0.1.0"; }

const char* frachq_status_string(frachq_status status) {
  switch (status) {
    case FRACHQ_OK: return "ok";
    case FRACHQ_ERR_NULL_ARGUMENT: return "null argument";
    case FRACHQ_ERR_OUT_OF_MEMORY: return "out of memory";
    case FRACHQ_ERR_INTERNAL: return "internal error";
    default:
      if (status >= FRACHQ_ERR_DOMAIN && status <= FRACHQ_ERR_POINT_MASS) {
        return to_string(static_cast<ErrorCode>(status));
      }
  }
  return "unknown status";
}

const char* frachq_last_error(void) { return last_error.c_str(); }

frachq_status frachq_config_create(frachq_config** out) {
  FRACHQ_REQUIRE(out);
  return guarded([&] { *out = new frachq_config{}; });
}

void frachq_config_destroy(frachq_config* cfg) { delete cfg; }

frachq_status frachq_config_set(frachq_config* cfg, const char* key, double value) {
  FRACHQ_REQUIRE(cfg);
  FRACHQ_REQUIRE(key);
  KernelConfig& c = cfg->cfg;
  if (!std::strcmp(key, "rel_tol")) {
    c.rel_tol = value;
  } else if (!std::strcmp(key, "abs_tol")) {
    c.abs_tol = value;
  } else if (!std::strcmp(key, "theta")) {
    c.theta = value;
  } else if (!std::strcmp(key, "max_panels")) {
    if (!(value >= 1.0 && value <= 1e8) || value != static_cast<int>(value)) {
      return fail(FRACHQ_ERR_DOMAIN, "max_panels must be an integer in [1, 1e8]");
    }
    c.max_panels = static_cast<int>(value);
  } else if (!std::strcmp(key, "tail_cut")) {
    c.tail_cut = value;
  } else {
    return fail(FRACHQ_ERR_DOMAIN,
                (std::string("unknown config key '") + key + "'").c_str());
  }
  last_error.clear();
  return FRACHQ_OK;
}

frachq_status frachq_config_get(const frachq_config* cfg, const char* key, double* value) {
  FRACHQ_REQUIRE(cfg);
  FRACHQ_REQUIRE(key);
  FRACHQ_REQUIRE(value);
  const KernelConfig& c = cfg->cfg;
  if (!std::strcmp(key, "rel_tol")) {
    *value = c.rel_tol;
  } else if (!std::strcmp(key, "abs_tol")) {
    *value = c.abs_tol;
  } else if (!std::strcmp(key, "theta")) {
    *value = c.theta;
  } else if (!std::strcmp(key, "max_panels")) {
    *value = c.max_panels;
  } else if (!std::strcmp(key, "tail_cut")) {
    *value = c.tail_cut;
  } else {
    return fail(FRACHQ_ERR_DOMAIN,
                (std::string("unknown config key '") + key + "'").c_str());
  }
  return FRACHQ_OK;
}

frachq_status frachq_kernel_eval(double alpha, double t, double s, const frachq_config* cfg,
                                 double* value, double* error) {
  FRACHQ_REQUIRE(value);
  return guarded([&] {
    const KernelValue v = eval_kernel(FractionalOrder(alpha), t, s, config_of(cfg));
    *value = v.value;
    if (error) *error = v.error;
  });
}

frachq_status frachq_kernel_closed_half(double t, double s, double* value) {
  FRACHQ_REQUIRE(value);
  return guarded([&] { *value = eval_kernel_closed_half(t, s); });
}

frachq_status frachq_kernel_mass(double alpha, double t, const frachq_config* cfg,
                                 double* value, double* error) {
  FRACHQ_REQUIRE(value);
  return guarded([&] {
    Weight one;
    one.eval = [](double) { return std::complex<double>(1.0, 0.0); };
    one.bound = 1.0;
    const KernelIntegral r = integrate_kernel(FractionalOrder(alpha), t, one, config_of(cfg));
    *value = r.value.real();
    if (error) *error = r.error;
  });
}

frachq_status frachq_laplace_check(double alpha, double t, double z_re, double z_im,
                                   const frachq_config* cfg, double lhs[2], double rhs[2],
                                   double* error) {
  FRACHQ_REQUIRE(lhs);
  FRACHQ_REQUIRE(rhs);
  return guarded([&] {
    const LaplaceCheck c =
        laplace_check(FractionalOrder(alpha), t, {z_re, z_im}, config_of(cfg));
    lhs[0] = c.lhs.real();
    lhs[1] = c.lhs.imag();
    rhs[0] = c.rhs.real();
    rhs[1] = c.rhs.imag();
    if (error) *error = c.error;
  });
}

frachq_status frachq_oscillator_envelope(double alpha, double omega, double t,
                                         frachq_envelope_mode mode, const frachq_config* cfg,
                                         double* c, double* s) {
  FRACHQ_REQUIRE(c);
  FRACHQ_REQUIRE(s);
  return guarded([&] {
    const OscillatorEnvelope e = oscillator_envelope(FractionalOrder(alpha), omega, t,
                                                     envelope_mode(mode), config_of(cfg));
    *c = e.c;
    *s = e.s;
  });
}

frachq_status frachq_oscillator_envelope_macdonald_half(double omega, double t, double* c,
                                                        double* s) {
  FRACHQ_REQUIRE(c);
  FRACHQ_REQUIRE(s);
  return guarded([&] {
    const OscillatorEnvelope e = oscillator_envelope_macdonald_half(omega, t);
    *c = e.c;
    *s = e.s;
  });
}

frachq_status frachq_oscillator_coeffs(double alpha, double m, double omega, double hbar,
                                       double t, frachq_envelope_mode mode,
                                       const frachq_config* cfg, double coeffs[4],
                                       double envelope[2]) {
  FRACHQ_REQUIRE(coeffs);
  return guarded([&] {
    OscillatorParams p;
    p.m = m;
    p.omega = omega;
    p.hbar = hbar;
    p.validate();
    const OscillatorEnvelope e = oscillator_envelope(FractionalOrder(alpha), omega, t,
                                                     envelope_mode(mode), config_of(cfg));
    store_coeffs(oscillator_coeffs(p, e), coeffs);
    if (envelope) {
      envelope[0] = e.c;
      envelope[1] = e.s;
    }
  });
}

frachq_status frachq_free_mode_parse(const char* name, frachq_free_mode* mode) {
  FRACHQ_REQUIRE(name);
  FRACHQ_REQUIRE(mode);
  return guarded([&] {
    switch (parse_free_mode(name)) {
      case FreeMode::paper_half: *mode = FRACHQ_FREE_PAPER_HALF; break;
      case FreeMode::regularized_half: *mode = FRACHQ_FREE_REGULARIZED_HALF; break;
      case FreeMode::truncated_numeric: *mode = FRACHQ_FREE_TRUNCATED_NUMERIC; break;
    }
  });
}

const char* frachq_free_mode_name(frachq_free_mode mode) {
  switch (mode) {
    case FRACHQ_FREE_PAPER_HALF: return to_string(FreeMode::paper_half);
    case FRACHQ_FREE_REGULARIZED_HALF: return to_string(FreeMode::regularized_half);
    case FRACHQ_FREE_TRUNCATED_NUMERIC: return to_string(FreeMode::truncated_numeric);
  }
  return "unknown";
}

frachq_status frachq_free_g(double alpha, double t, frachq_free_mode mode, double s_max,
                            const frachq_config* cfg, double* g,
                            frachq_free_diagnostics* diag) {
  FRACHQ_REQUIRE(g);
  return guarded([&] {
    const FreeParticleG r =
        free_particle_g(FractionalOrder(alpha), t, free_options(mode, s_max), config_of(cfg));
    *g = r.value;
    if (diag) store_diagnostics(r.diagnostics, diag);
  });
}

frachq_status frachq_free_coeffs(double alpha, double t, double m, frachq_free_mode mode,
                                 double s_max, const frachq_config* cfg, double coeffs[4],
                                 double* g, frachq_free_diagnostics* diag) {
  FRACHQ_REQUIRE(coeffs);
  return guarded([&] {
    const FreeParticleG r =
        free_particle_g(FractionalOrder(alpha), t, free_options(mode, s_max), config_of(cfg));
    store_coeffs(free_particle_coeffs(r, m), coeffs);
    if (g) *g = r.value;
    if (diag) store_diagnostics(r.diagnostics, diag);
  });
}

frachq_status frachq_initial_moments(const frachq_packet* packet, frachq_moments* out) {
  FRACHQ_REQUIRE(packet);
  FRACHQ_REQUIRE(out);
  return guarded([&] { store_moments(initial_moments(packet_of(packet)), out); });
}

frachq_status frachq_evolve_moments(const frachq_packet* packet, const double coeffs[4],
                                    frachq_moments* out) {
  FRACHQ_REQUIRE(packet);
  FRACHQ_REQUIRE(coeffs);
  FRACHQ_REQUIRE(out);
  return guarded([&] {
    SolutionCoeffs c;
    c << coeffs[0], coeffs[1], coeffs[2], coeffs[3];
    store_moments(evolve_moments(packet_of(packet), c), out);
  });
}

frachq_status frachq_printed_free_disp_q(const frachq_packet* packet, double m, double t,
                                         double* out) {
  FRACHQ_REQUIRE(packet);
  FRACHQ_REQUIRE(out);
  return guarded([&] { *out = printed_free_disp_q(packet_of(packet), m, t); });
}

frachq_status frachq_matrix_create(int dim, const double* re, const double* im,
                                   frachq_role role, frachq_matrix** out) {
  FRACHQ_REQUIRE(re);
  FRACHQ_REQUIRE(out);
  if (dim < 1) return fail(FRACHQ_ERR_DIMENSION, "matrix dimension must be >= 1");
  if (role != FRACHQ_ROLE_HERMITIAN && role != FRACHQ_ROLE_DENSITY) {
    return fail(FRACHQ_ERR_UNSUPPORTED_MODE, "unknown matrix role");
  }
  return guarded([&] {
    CMatrix m(dim, dim);
    for (int j = 0; j < dim; ++j) {
      for (int k = 0; k < dim; ++k) {
        const std::size_t i = static_cast<std::size_t>(j) * dim + k;
        m(j, k) = {re[i], im ? im[i] : 0.0};
      }
    }
    *out = wrap(role, m);
  });
}

void frachq_matrix_destroy(frachq_matrix* m) { delete m; }

int frachq_matrix_dim(const frachq_matrix* m) {
  return m ? static_cast<int>(m->matrix().rows()) : 0;
}

frachq_role frachq_matrix_role(const frachq_matrix* m) {
  return m ? m->role : FRACHQ_ROLE_HERMITIAN;
}

frachq_status frachq_matrix_get(const frachq_matrix* m, double* re, double* im) {
  FRACHQ_REQUIRE(m);
  FRACHQ_REQUIRE(re);
  const CMatrix& x = m->matrix();
  const int n = static_cast<int>(x.rows());
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const std::size_t i = static_cast<std::size_t>(j) * n + k;
      re[i] = x(j, k).real();
      if (im) im[i] = x(j, k).imag();
    }
  }
  return FRACHQ_OK;
}

frachq_status frachq_spectrum_create(const frachq_matrix* hamiltonian, double hbar,
                                     frachq_spectrum** out) {
  FRACHQ_REQUIRE(hamiltonian);
  FRACHQ_REQUIRE(out);
  if (hamiltonian->role != FRACHQ_ROLE_HERMITIAN) {
    return fail(FRACHQ_ERR_UNSUPPORTED_MODE, "Hamiltonian must have the Hermitian role");
  }
  return guarded([&] {
    const auto& h = std::get<HermitianOperator>(hamiltonian->value);
    *out = new frachq_spectrum{eigendecompose(h, hbar)};
  });
}

void frachq_spectrum_destroy(frachq_spectrum* spec) { delete spec; }

int frachq_spectrum_dim(const frachq_spectrum* spec) { return spec ? spec->spec.dim() : 0; }

frachq_status frachq_spectrum_energies(const frachq_spectrum* spec, double* energies) {
  FRACHQ_REQUIRE(spec);
  FRACHQ_REQUIRE(energies);
  for (int i = 0; i < spec->spec.dim(); ++i) energies[i] = spec->spec.energies(i);
  return FRACHQ_OK;
}

frachq_status frachq_evolve(const frachq_spectrum* spec, const frachq_matrix* op, double alpha,
                            double t, frachq_method method, const frachq_config* cfg,
                            frachq_matrix** out, double* err_estimate) {
  FRACHQ_REQUIRE(spec);
  FRACHQ_REQUIRE(op);
  FRACHQ_REQUIRE(out);
  if (method != FRACHQ_METHOD_SPECTRAL && method != FRACHQ_METHOD_SUBORDINATION) {
    return fail(FRACHQ_ERR_UNSUPPORTED_MODE, "unknown evolution method");
  }
  return guarded([&] {
    const FractionalOrder order(alpha);
    const Spectrum& sp = spec->spec;
    if (!(t >= 0.0)) throw Error(ErrorCode::domain, "evolution time t must be >= 0");
    double err = 0.0;
    CMatrix result;
    if (t == 0.0) {
      result = op->matrix();
    } else if (op->role == FRACHQ_ROLE_DENSITY) {
      const auto& rho = std::get<DensityMatrix>(op->value);
      if (method == FRACHQ_METHOD_SPECTRAL) {
        result = fractional_vonneumann_evolve(sp, rho, order, t).matrix();
      } else {
        auto r = subordinated_vonneumann(sp, rho, order, t, config_of(cfg));
        result = std::move(r.value);
        err = r.err_estimate;
      }
    } else {
      const auto& a = std::get<HermitianOperator>(op->value);
      if (method == FRACHQ_METHOD_SPECTRAL) {
        result = fractional_heisenberg_evolve(sp, a, order, t).matrix();
      } else {
        auto r = subordinated_heisenberg(sp, a, order, t, config_of(cfg));
        result = std::move(r.value);
        err = r.err_estimate;
      }
    }
    if (op->role == FRACHQ_ROLE_DENSITY && method == FRACHQ_METHOD_SUBORDINATION) {
      // The quadrature keeps the trace only to within err_estimate.
      *out = new frachq_matrix{op->role, DensityMatrix(result / result.trace().real())};
    } else {
      *out = wrap(op->role, result);
    }
    if (err_estimate) *err_estimate = err;
  });
}

frachq_status frachq_duality_check(const frachq_spectrum* spec, const frachq_matrix* rho,
                                   const frachq_matrix* observable, double alpha, double t,
                                   double* lhs, double* rhs) {
  FRACHQ_REQUIRE(spec);
  FRACHQ_REQUIRE(rho);
  FRACHQ_REQUIRE(observable);
  FRACHQ_REQUIRE(lhs);
  FRACHQ_REQUIRE(rhs);
  if (rho->role != FRACHQ_ROLE_DENSITY || observable->role != FRACHQ_ROLE_HERMITIAN) {
    return fail(FRACHQ_ERR_UNSUPPORTED_MODE,
                "duality check needs a density matrix and a Hermitian observable");
  }
  return guarded([&] {
    const DualityCheck d = duality_check(spec->spec, std::get<DensityMatrix>(rho->value),
                                         std::get<HermitianOperator>(observable->value),
                                         FractionalOrder(alpha), t);
    *lhs = d.lhs;
    *rhs = d.rhs;
  });
}

frachq_status frachq_verify(frachq_verify_level level, frachq_verify_callback cb, void* user,
                            int* failed) {
  FRACHQ_REQUIRE(failed);
  if (level != FRACHQ_VERIFY_QUICK && level != FRACHQ_VERIFY_FULL) {
    return fail(FRACHQ_ERR_UNSUPPORTED_MODE, "unknown verify level");
  }
  return guarded([&] {
    int n = 0;
    run_verify(level == FRACHQ_VERIFY_QUICK ? VerifyLevel::quick : VerifyLevel::full,
               [&](const CheckResult& r) {
                 if (!r.passed) ++n;
                 if (cb) {
                   cb(r.name.c_str(), r.passed ? 1 : 0, r.residual, r.tolerance,
                      r.detail.c_str(), user);
                 }
               });
    *failed = n;
  });
}

}  // extern "C"
