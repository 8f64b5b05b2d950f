#include <doctest.h>

#include <cmath>

#include "frachq/error.hpp"
#include "frachq/models.hpp"
#include "oracles.hpp"

using namespace frachq;

TEST_CASE("oscillator envelope closed form") {
  for (double a : {0.2, 0.5, 0.75, 0.95}) {
    for (double w : {0.5, 1.0, 3.0}) {
      for (double t : {0.1, 1.0, 4.0}) {
        const auto e = oscillator_envelope(FractionalOrder(a), w, t);
        const auto ref = oracle::envelope(a, w, t);
        CHECK(std::abs(e.c - ref.real()) < 1e-14);
        CHECK(std::abs(e.s - ref.imag()) < 1e-14);
      }
    }
  }
  const auto h = oscillator_envelope(FractionalOrder(0.5), 1.0, 1.0);
  CHECK(h.c == doctest::Approx(0.3748529).epsilon(1e-6));
  // e^{-1/sqrt2} sin(1/sqrt2), computed independently.
  CHECK(h.s == doctest::Approx(0.3203156).epsilon(1e-6));
}

TEST_CASE("envelope quadrature agrees with closed form") {
  for (double a : {0.3, 0.5, 0.8}) {
    for (double t : {0.5, 1.0, 2.5}) {
      const auto q = oscillator_envelope(FractionalOrder(a), 1.3, t, EnvelopeMode::quadrature);
      const auto c = oscillator_envelope(FractionalOrder(a), 1.3, t);
      CHECK(std::abs(q.c - c.c) < 1e-6);
      CHECK(std::abs(q.s - c.s) < 1e-6);
    }
  }
}

TEST_CASE("envelope special cases") {
  const auto zero = oscillator_envelope(FractionalOrder(0.5), 1.0, 0.0);
  CHECK(zero.c == 1.0);
  CHECK(zero.s == 0.0);
  const auto classical = oscillator_envelope(FractionalOrder(1.0), 2.0, 0.7);
  CHECK(classical.c == std::cos(1.4));
  CHECK(classical.s == std::sin(1.4));
  // Classical periodicity.
  const auto period = oscillator_envelope(FractionalOrder(1.0), 1.0, 2.0 * oracle::pi);
  CHECK(std::abs(period.c - 1.0) < 1e-9);
}

TEST_CASE("Macdonald form reduces to the closed form") {
  for (double w : {0.3, 1.0, 2.0}) {
    for (double t : {0.2, 1.0, 3.0}) {
      const auto m = oscillator_envelope_macdonald_half(w, t);
      const auto c = oscillator_envelope(FractionalOrder(0.5), w, t);
      CHECK(std::abs(m.c - c.c) < 1e-12);
      CHECK(std::abs(m.s - c.s) < 1e-12);
    }
  }
}

TEST_CASE("oscillator coefficients") {
  OscillatorParams p{2.0, 1.5, 1.0};
  const auto c = oscillator_coeffs(p, FractionalOrder(0.5), 1.0);
  const auto e = oscillator_envelope(FractionalOrder(0.5), 1.5, 1.0);
  CHECK(c(0, 0) == e.c);
  CHECK(c(1, 1) == e.c);
  CHECK(c(0, 1) == doctest::Approx(e.s / 3.0));
  CHECK(c(1, 0) == doctest::Approx(-3.0 * e.s));
  // Classical limit is symplectic.
  const auto cl = oscillator_coeffs(p, FractionalOrder(1.0), 0.8);
  CHECK(cl.determinant() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("free-particle modes") {
  FreeParticleOptions paper{FreeMode::paper_half};
  FreeParticleOptions reg{FreeMode::regularized_half};
  CHECK(free_particle_g(FractionalOrder(0.5), 2.0, paper).value == 2.0);
  CHECK(free_particle_g(FractionalOrder(0.5), 2.0, reg).value == -2.0);
  CHECK(free_particle_g(FractionalOrder(0.5), 2.0, reg).diagnostics.divergent);
  for (auto mode : {FreeMode::paper_half, FreeMode::regularized_half, FreeMode::truncated_numeric}) {
    FreeParticleOptions o{mode};
    const auto g = free_particle_g(FractionalOrder(1.0), 1.7, o);
    CHECK(g.value == 1.7);
    CHECK_FALSE(g.diagnostics.divergent);
  }
  try {
    free_particle_g(FractionalOrder(0.3), 1.0, paper);
    FAIL("expected unsupported_mode");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unsupported_mode);
  }
}

TEST_CASE("free-particle mode names") {
  for (auto mode : {FreeMode::paper_half, FreeMode::regularized_half, FreeMode::truncated_numeric}) {
    CHECK(parse_free_mode(to_string(mode)) == mode);
  }
  CHECK_THROWS_AS(parse_free_mode("half"), Error);
}

TEST_CASE("truncated free-particle integral diverges like S^{1-alpha}") {
  for (double a : {0.5, 0.7}) {
    FreeParticleOptions o{FreeMode::truncated_numeric, 1e5};
    const auto g = free_particle_g(FractionalOrder(a), 1.0, o);
    const auto& d = g.diagnostics;
    CHECK(d.divergent);
    REQUIRE(d.measured_exponent);
    CHECK(*d.measured_exponent == doctest::Approx(1.0 - a).epsilon(0.02));
    CHECK(d.predicted_exponent == doctest::Approx(1.0 - a));
    REQUIRE(d.value_s1);
    REQUIRE(d.value_s10);
    CHECK(*d.value_s1 > *d.value_s10);
    // Leading growth: tail_coefficient S^{1-alpha}; the difference stays O(1).
    CHECK(std::abs(*d.value_s1 - *d.tail_growth_term) < 0.1 * *d.tail_growth_term);
  }
  // alpha t / (Gamma(1/2) (1 - alpha)) = t / sqrt(pi) at alpha = 1/2.
  FreeParticleOptions o{FreeMode::truncated_numeric, 1e4};
  const auto g = free_particle_g(FractionalOrder(0.5), 1.0, o);
  CHECK(g.diagnostics.tail_coefficient == doctest::Approx(1.0 / std::sqrt(oracle::pi)));
}

TEST_CASE("free-particle coefficients") {
  const auto c = free_particle_coeffs(FractionalOrder(0.5), 1.0, 2.0);
  CHECK(c(0, 0) == 1.0);
  CHECK(c(0, 1) == -0.25);
  CHECK(c(1, 0) == 0.0);
  CHECK(c(1, 1) == 1.0);
}
