#include <doctest.h>

#include <complex>
#include <random>

#include "frachq/error.hpp"
#include "frachq/spectral.hpp"
#include "oracles.hpp"

using namespace frachq;
using cd = std::complex<double>;
using oracle::CMat;

namespace {

struct Pauli {
  CMat x{2, 2}, y{2, 2}, z{2, 2};
  Pauli() {
    x << 0, 1, 1, 0;
    y << 0, cd(0, -1), cd(0, 1), 0;
    z << 1, 0, 0, -1;
  }
};

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

}  // namespace

TEST_CASE("operator validation") {
  CMat rect(2, 3);
  rect.setZero();
  CHECK(code_of([&] { HermitianOperator h(rect); }) == ErrorCode::dimension_mismatch);
  CMat nh(2, 2);
  nh << 0, 1, 0, 0;
  CHECK(code_of([&] { HermitianOperator h(nh); }) == ErrorCode::not_hermitian);
  CMat inf(1, 1);
  inf << cd(std::numeric_limits<double>::infinity(), 0);
  CHECK(code_of([&] { HermitianOperator h(inf); }) == ErrorCode::domain);

  CMat trace2 = CMat::Identity(2, 2);
  CHECK(code_of([&] { DensityMatrix r(trace2); }) == ErrorCode::invalid_density);
  CMat negative(2, 2);
  negative << 1.5, 0, 0, -0.5;
  CHECK(code_of([&] { DensityMatrix r(negative); }) == ErrorCode::invalid_density);
  CMat ok(2, 2);
  ok << 0.7, 0, 0, 0.3;
  CHECK_NOTHROW(DensityMatrix{ok});
}

TEST_CASE("eigendecomposition") {
  std::mt19937_64 rng(7);
  const CMat h = oracle::random_hermitian(rng, 4);
  const Spectrum s = eigendecompose(HermitianOperator(h), 2.0);
  CHECK(s.dim() == 4);
  for (int i = 1; i < 4; ++i) CHECK(s.energies(i) >= s.energies(i - 1));
  const CMat rebuilt = s.from_eigenbasis(s.energies.cast<cd>().asDiagonal().toDenseMatrix());
  CHECK(oracle::max_abs(rebuilt - h) < 1e-12);
  const Eigen::MatrixXd w = s.transition_frequencies();
  CHECK(w(3, 0) == doctest::Approx((s.energies(3) - s.energies(0)) / 2.0));
  CHECK(w(1, 1) == 0.0);
}

TEST_CASE("degenerate levels give exactly zero frequencies") {
  CMat h = CMat::Zero(3, 3);
  h(0, 0) = 1.0;
  h(1, 1) = 1.0;
  h(2, 2) = -2.0;
  const Spectrum s = eigendecompose(HermitianOperator(h));
  const Eigen::MatrixXd w = s.transition_frequencies();
  int zeros = 0;
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) zeros += w(j, k) == 0.0;
  }
  CHECK(zeros == 5);
}

TEST_CASE("principal branch power") {
  const FractionalOrder half(0.5);
  CHECK(power_branch(0.0, half) == cd(0.0, 0.0));
  CHECK(std::abs(power_branch(cd(0, -1), half) - std::polar(1.0, -oracle::pi / 4)) < 1e-15);
  CHECK(std::abs(power_branch(cd(0, 1), half) - std::polar(1.0, oracle::pi / 4)) < 1e-15);
  CHECK(std::abs(power_branch(cd(4, 0), half) - cd(2, 0)) < 1e-15);
  CHECK(code_of([&] { power_branch(cd(-1, 0), half); }) == ErrorCode::branch_cut);
}

TEST_CASE("exact Heisenberg flow matches matrix exponential") {
  std::mt19937_64 rng(11);
  for (int n : {2, 3, 5}) {
    const CMat h = oracle::random_hermitian(rng, n);
    const CMat a = oracle::random_hermitian(rng, n);
    const Spectrum s = eigendecompose(HermitianOperator(h));
    for (double t : {0.3, 2.0}) {
      const CMat got = heisenberg_evolve(s, HermitianOperator(a), t).matrix();
      CHECK(oracle::max_abs(got - oracle::unitary_flow(h, a, t)) < 1e-11);
    }
  }
}

TEST_CASE("qubit fractional Heisenberg oracle") {
  const Pauli p;
  const Spectrum s = eigendecompose(HermitianOperator(p.z / 2.0));
  const CMat got =
      fractional_heisenberg_evolve(s, HermitianOperator(p.x), FractionalOrder(0.5), 1.0).matrix();
  const cd e = oracle::envelope(0.5, 1.0, 1.0);
  CHECK(oracle::max_abs(got - (e.real() * p.x - e.imag() * p.y)) < 1e-14);
  CHECK(got(0, 1).real() == doctest::Approx(0.3748529).epsilon(1e-6));
}

TEST_CASE("fractional flow against independent oracle") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 3;
    const CMat h = oracle::random_hermitian(rng, n);
    const CMat a = oracle::random_hermitian(rng, n);
    const double alpha = 0.2 + 0.07 * trial;
    const Spectrum s = eigendecompose(HermitianOperator(h));
    const CMat got =
        fractional_heisenberg_evolve(s, HermitianOperator(a), FractionalOrder(alpha), 1.4).matrix();
    CHECK(oracle::max_abs(got - oracle::fractional_flow(h, a, alpha, 1.4)) < 1e-12);
  }
}

TEST_CASE("alpha = 1 reduces to unitary flow") {
  std::mt19937_64 rng(5);
  const CMat h = oracle::random_hermitian(rng, 3);
  const CMat a = oracle::random_hermitian(rng, 3);
  const Spectrum s = eigendecompose(HermitianOperator(h));
  const CMat got =
      fractional_heisenberg_evolve(s, HermitianOperator(a), FractionalOrder(1.0), 0.9).matrix();
  CHECK(oracle::max_abs(got - oracle::unitary_flow(h, a, 0.9)) < 1e-11);
}

TEST_CASE("spectral and subordination routes agree") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 4; ++trial) {
    const int n = 2 + trial % 3;
    const CMat h = oracle::random_hermitian(rng, n);
    const CMat a = oracle::random_hermitian(rng, n);
    const Spectrum s = eigendecompose(HermitianOperator(h));
    const FractionalOrder o(trial % 2 ? 0.3 : 0.8);
    const CMat spec = fractional_heisenberg_evolve(s, HermitianOperator(a), o, 2.0).matrix();
    const CMat sub = subordinated_heisenberg(s, HermitianOperator(a), o, 2.0).value;
    CHECK(oracle::max_abs(spec - sub) < 1e-6);
  }
}

TEST_CASE("density evolution invariants") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const CMat h = oracle::random_hermitian(rng, 3);
    const CMat rho = oracle::random_density(rng, 3);
    const Spectrum s = eigendecompose(HermitianOperator(h));
    const FractionalOrder o(0.3 + 0.03 * trial);
    const DensityMatrix r(rho);
    const CMat out = fractional_vonneumann_evolve(s, r, o, 1.7).matrix();
    CHECK(oracle::max_abs(out - out.adjoint()) <= 1e-12);
    CHECK(std::abs(out.trace() - cd(1.0, 0.0)) < 1e-13);
    Eigen::SelfAdjointEigenSolver<CMat> es(out);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);

    // Populations in the energy basis are untouched.
    const CMat eb = fractional_vonneumann_eigenbasis(s, r, o, 1.7);
    const CMat eb0 = s.to_eigenbasis(r.matrix());
    for (int j = 0; j < 3; ++j) CHECK(eb(j, j) == eb0(j, j));
  }
}

TEST_CASE("duality between pictures") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    const CMat h = oracle::random_hermitian(rng, 3);
    const CMat a = oracle::random_hermitian(rng, 3);
    const CMat rho = oracle::random_density(rng, 3);
    const Spectrum s = eigendecompose(HermitianOperator(h));
    const auto d = duality_check(s, DensityMatrix(rho), HermitianOperator(a),
                                 FractionalOrder(0.4 + 0.05 * trial), 0.8);
    CHECK(std::abs(d.lhs - d.rhs) <= 1e-10);
  }
}

TEST_CASE("spectral semigroup") {
  std::mt19937_64 rng(31);
  const CMat h = oracle::random_hermitian(rng, 4);
  const CMat a = oracle::random_hermitian(rng, 4);
  const Spectrum s = eigendecompose(HermitianOperator(h));
  const FractionalOrder o(0.6);
  const HermitianOperator a1 = fractional_heisenberg_evolve(s, HermitianOperator(a), o, 0.7);
  const CMat twice = fractional_heisenberg_evolve(s, a1, o, 1.1).matrix();
  const CMat once = fractional_heisenberg_evolve(s, HermitianOperator(a), o, 1.8).matrix();
  CHECK(oracle::max_abs(twice - once) < 1e-12);
}

TEST_CASE("evolution preserves identity and zero time") {
  std::mt19937_64 rng(37);
  const CMat h = oracle::random_hermitian(rng, 3);
  const Spectrum s = eigendecompose(HermitianOperator(h));
  const CMat id = CMat::Identity(3, 3);
  const CMat out =
      fractional_heisenberg_evolve(s, HermitianOperator(id), FractionalOrder(0.5), 3.0).matrix();
  CHECK(oracle::max_abs(out - id) < 1e-13);
  const CMat a = oracle::random_hermitian(rng, 3);
  const CMat same =
      fractional_heisenberg_evolve(s, HermitianOperator(a), FractionalOrder(0.5), 0.0).matrix();
  CHECK(oracle::max_abs(same - a) < 1e-13);
}

TEST_CASE("argument errors") {
  std::mt19937_64 rng(41);
  const Spectrum s = eigendecompose(HermitianOperator(oracle::random_hermitian(rng, 2)));
  const HermitianOperator a3(oracle::random_hermitian(rng, 3));
  CHECK(code_of([&] { fractional_heisenberg_evolve(s, a3, FractionalOrder(0.5), 1.0); }) ==
        ErrorCode::dimension_mismatch);
  const HermitianOperator a2(oracle::random_hermitian(rng, 2));
  CHECK(code_of([&] { fractional_heisenberg_evolve(s, a2, FractionalOrder(0.5), -1.0); }) ==
        ErrorCode::domain);
}
