#include <cmath>

#include "doctest.h"
#include "zdet/error.hpp"
#include "zdet/special.hpp"

using namespace zdet;

namespace {

// Independent oracle for convergent s: direct partial sum plus the first
// two terms of the tail expansion, N^{1-s}/(s-1) - N^{-s}/2 + s N^{-s-1}/12.
cplx direct_hurwitz(cplx s, double a, int n = 200000) {
  cplx acc = 0.0;
  for (int k = n - 1; k >= 0; --k) acc += std::exp(-s * std::log(k + a));
  const double x = n + a;
  const cplx xs = std::exp(-s * std::log(x));
  return acc + xs * x / (s - 1.0) + 0.5 * xs + s * xs / (12.0 * x);
}

}  // namespace

TEST_SUITE("special") {

TEST_CASE("hurwitz zeta at s = 0 and s = -1 matches the Bernoulli polynomial identities") {
  for (int i = 0; i < 20; ++i) {
    const double a = 0.1 + 0.1 * i;
    CHECK(std::abs(hurwitz_zeta(0.0, a).value.real() - (0.5 - a)) <= 1e-10);
    CHECK(std::abs(hurwitz_zeta(-1.0, a).value.real() + 0.5 * (a * a - a + 1.0 / 6.0)) <= 1e-10);
  }
}

TEST_CASE("hurwitz zeta in the convergent region agrees with direct summation") {
  CHECK(hurwitz_zeta(2.0, 1.0).value.real() == doctest::Approx(kPi * kPi / 6.0).epsilon(1e-14));
  for (cplx s : {cplx(2.0, 0.0), cplx(3.5, 0.0), cplx(2.0, 1.0), cplx(4.0, -2.5)}) {
    for (double a : {0.1, 0.5, 1.0, 3.0, 10.0}) {
      const cplx ref = direct_hurwitz(s, a);
      const ZetaValue z = hurwitz_zeta(s, a);
      CHECK(std::abs(z.value - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("nonpositive integer arguments are exact up to rounding") {
  // zeta_H(-n, a) = -B_{n+1}(a) / (n+1)
  const double a = 0.3;
  const double b3 = a * a * a - 1.5 * a * a + 0.5 * a;
  const double b4 = a * a * a * a - 2 * a * a * a + a * a - 1.0 / 30.0;
  const double b5 = std::pow(a, 5) - 2.5 * std::pow(a, 4) + 5.0 / 3.0 * std::pow(a, 3) - a / 6.0;
  CHECK(hurwitz_zeta(-2.0, a).value.real() == doctest::Approx(-b3 / 3.0).epsilon(1e-13));
  CHECK(hurwitz_zeta(-3.0, a).value.real() == doctest::Approx(-b4 / 4.0).epsilon(1e-13));
  CHECK(hurwitz_zeta(-4.0, a).value.real() == doctest::Approx(-b5 / 5.0).epsilon(1e-12));
  CHECK(hurwitz_zeta(-3.0, a).est_error <= 1e-13);
}

TEST_CASE("derivative at s = 0 is log Gamma(a) - log(2 pi)/2") {
  CHECK(hurwitz_zeta_zero_deriv(1.0) == doctest::Approx(-0.5 * kLog2Pi).epsilon(1e-14));
  CHECK(hurwitz_zeta_zero_deriv(2.0) == doctest::Approx(-0.5 * kLog2Pi).epsilon(1e-14));
  CHECK(std::abs(hurwitz_zeta_zero_deriv(0.5) + 0.5 * kLog2) <= 1e-10);
  // the jet derivative of the Euler-Maclaurin expansion reproduces it
  for (double a : {0.25, 0.5, 1.0, 1.75, 4.0}) {
    const HurwitzJet jet = hurwitz_zeta_jet(0.0, a);
    CHECK(jet.deriv.real() == doctest::Approx(hurwitz_zeta_zero_deriv(a)).epsilon(1e-12));
  }
}

TEST_CASE("jet derivative matches a central difference of the value") {
  for (cplx s : {cplx(-1.0, 0.0), cplx(0.5, 0.0), cplx(3.0, 0.0), cplx(-0.5, 2.0)}) {
    const double h = 1e-5;
    const cplx fd =
        (hurwitz_zeta(s + h, 0.7).value - hurwitz_zeta(s - h, 0.7).value) / (2.0 * h);
    CHECK(std::abs(hurwitz_zeta_jet(s, 0.7).deriv - fd) <= 1e-8);
  }
}

TEST_CASE("log gamma and digamma against the standard library and known values") {
  for (double x = 0.05; x < 40.0; x *= 1.37) {
    CHECK(log_gamma(x) == doctest::Approx(std::lgamma(x)).epsilon(1e-13));
  }
  const double euler_gamma = 0.57721566490153286061;
  CHECK(digamma(1.0) == doctest::Approx(-euler_gamma).epsilon(1e-13));
  CHECK(digamma(0.5) == doctest::Approx(-euler_gamma - 2.0 * kLog2).epsilon(1e-13));
  CHECK(digamma(10.0) == doctest::Approx(2.251752589066721).epsilon(1e-13));
}

TEST_CASE("error conditions") {
  CHECK_THROWS_AS(hurwitz_zeta(1.0, 0.5), PoleError);
  CHECK_THROWS_AS(hurwitz_zeta(1.0 + 1e-9, 0.5), PoleError);
  CHECK_NOTHROW(hurwitz_zeta(1.0 + 1e-6, 0.5));
  CHECK_THROWS_AS(hurwitz_zeta(2.0, 0.0), DomainError);
  CHECK_THROWS_AS(hurwitz_zeta(2.0, -1.0), DomainError);
  CHECK_THROWS_AS(hurwitz_zeta_zero_deriv(0.0), DomainError);
  CHECK_THROWS_AS(log_gamma(0.0), DomainError);
}

TEST_CASE("error estimates are populated and bound the observed error") {
  for (double a : {0.1, 0.5, 2.0, 10.0}) {
    for (double s : {-1.0, -0.5, 0.0, 0.5, 2.0, 6.0}) {
      const ZetaValue z = hurwitz_zeta(s, a);
      CHECK(z.est_error > 0.0);
      CHECK(std::isfinite(z.est_error));
      CHECK(std::abs(z.value.imag()) <= z.est_error);
    }
  }
  CHECK(hurwitz_zeta(0.0, 0.5).est_error <= 1e-12);
  CHECK(hurwitz_zeta(-1.0, 1.0).est_error <= 1e-12);
}

}  // TEST_SUITE
