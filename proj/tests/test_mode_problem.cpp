#include <cmath>

#include "doctest.h"
#include "zdet/error.hpp"
#include "zdet/mode_problem.hpp"

using namespace zdet;

namespace {

const double kPi = std::acos(-1.0);

// Newton on f(nu) = nu cos(nu r) + lambda sin(nu r), started at the midpoint
// of the l-th bracket. Independent of the bisection used by the library.
double newton_root(double lambda, double r, int l) {
  double nu = (l + 0.75) * kPi / r;
  for (int it = 0; it < 100; ++it) {
    const double f = nu * std::cos(nu * r) + lambda * std::sin(nu * r);
    const double df = std::cos(nu * r) - nu * r * std::sin(nu * r) + lambda * r * std::cos(nu * r);
    const double step = f / df;
    nu -= step;
    if (std::abs(step) < 1e-15 * nu) break;
  }
  return nu;
}

}  // namespace

TEST_SUITE("mode_problem") {

TEST_CASE("Robin roots sit in their brackets and agree with Newton") {
  for (double lambda : {0.1, 0.5, 1.5, 2.5, 7.0}) {
    for (double r : {0.5, 1.0, 2.0}) {
      const RootSequence seq = robin_mode_roots(lambda, r, 60);
      REQUIRE(seq.count() == 60);
      CHECK(seq.max_residual <= 1e-12);
      for (int l = 0; l < 60; ++l) {
        CHECK(seq.nu[l] > (l + 0.5) * kPi / r);
        CHECK(seq.nu[l] < (l + 1.0) * kPi / r);
        CHECK(seq.roots[l] == doctest::Approx(lambda * lambda + seq.nu[l] * seq.nu[l]));
        if (l < 10) CHECK(std::abs(seq.nu[l] - newton_root(lambda, r, l)) <= 1e-11 * seq.nu[l]);
      }
    }
  }
}

TEST_CASE("Robin tail fit recovers c1 = lambda") {
  const RootSequence seq = robin_mode_roots(1.5, 1.0, 200);
  CHECK(seq.tail_c1 == doctest::Approx(1.5).epsilon(1e-7));
  CHECK(seq.tail_c3 == doctest::Approx(-1.5 * 1.5 * 1.5 / 3.0).epsilon(5e-2));
}

TEST_CASE("Neumann roots are the exact half-integer family") {
  const RootSequence seq = neumann_mode_roots(2.0, 40);
  REQUIRE(seq.count() == 40);
  for (int l = 0; l < 40; ++l) CHECK(seq.nu[l] == doctest::Approx((l + 0.5) * kPi / 2.0));
}

TEST_CASE("Dirichlet family values") {
  const auto eig = dirichlet_mode_eigen(2.0, 1.0, 5);
  REQUIRE(eig.size() == 5);
  for (int k = 1; k <= 5; ++k) CHECK(eig[k - 1] == doctest::Approx(4.0 + k * k * kPi * kPi));
}

TEST_CASE("closed forms of the mode determinants") {
  CHECK(mode_logdet_gy({1.0, 1.0, ModeBC::Dirichlet, ModeBC::Dirichlet}) ==
        doctest::Approx(std::log(2.0 * std::sinh(1.0))));
  CHECK(mode_logdet_gy({1.0, 1.0, ModeBC::Dirichlet, ModeBC::RobinAbs}) ==
        doctest::Approx(std::log(2.0) + 1.0));
  CHECK(mode_logdet_gy({1.0, 1.0, ModeBC::RobinAbs, ModeBC::Dirichlet}) ==
        doctest::Approx(std::log(2.0) + 1.0));
  CHECK(mode_logdet_gy({0.0, 3.0, ModeBC::Dirichlet, ModeBC::Dirichlet}) ==
        doctest::Approx(std::log(6.0)));
  CHECK(mode_logdet_gy({0.0, 3.0, ModeBC::Dirichlet, ModeBC::Neumann}) ==
        doctest::Approx(std::log(2.0)));
}

TEST_CASE("zeta route reproduces the closed forms on a parameter grid") {
  for (double lambda : {0.5, 1.5, 2.5}) {
    for (double r : {0.5, 1.0, 2.0}) {
      CAPTURE(lambda);
      CAPTURE(r);
      const double dd = mode_logdet_zeta(DirichletFamily{lambda, r, 200});
      CHECK(std::abs(dd - std::log(2.0 * std::sinh(lambda * r) / lambda)) <= 1e-4);
      const double dr = mode_logdet_zeta(robin_mode_roots(lambda, r, 200));
      CHECK(std::abs(dr - (std::log(2.0) + lambda * r)) <= 1e-4);
    }
  }
}

TEST_CASE("zeta route of the Neumann family gives log 2") {
  CHECK(std::abs(mode_logdet_zeta(neumann_mode_roots(1.3, 100)) - std::log(2.0)) <= 1e-10);
}

TEST_CASE("mode split recombines to the closed form") {
  for (double lambda : {0.3, 1.0, 4.0}) {
    for (ModeBC right : {ModeBC::Dirichlet, ModeBC::RobinAbs}) {
      const ModeProblem p{lambda, 1.7, ModeBC::Dirichlet, right};
      const ModeLogdetSplit s = mode_logdet_split(p);
      const double v = s.linear * lambda * 1.7 + s.log_coeff * std::log(lambda) + s.constant + s.tail;
      CHECK(v == doctest::Approx(mode_logdet_gy(p)).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(mode_logdet_split({0.0, 1.0, ModeBC::Dirichlet, ModeBC::Dirichlet}),
                  KernelModeError);
}

TEST_CASE("Poisson DtN: closed form, shooting and the Q value") {
  for (double lambda : {0.0, 0.5, 2.0}) {
    const double r = 1.3;
    const double exact = lambda == 0.0 ? 1.0 / r : lambda / std::tanh(lambda * r);
    CHECK(mode_poisson_dtn(lambda, r, ModeBC::Dirichlet) == doctest::Approx(exact));
    CHECK(std::abs(mode_poisson_dtn_shooting(lambda, r, 20000) - exact) <= 1e-8);
  }
  // Q = lambda + lambda coth(lambda r)
  CHECK(mode_q_value(1.0, 1.0) == doctest::Approx(1.0 + 1.0 / std::tanh(1.0)).epsilon(1e-14));
  CHECK(mode_q_value(0.0, 2.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(mode_poisson_dtn(1.0, 1.0, ModeBC::RobinAbs), DomainError);
}

TEST_CASE("error conditions") {
  CHECK_THROWS_AS(robin_mode_roots(-1.0, 1.0, 40), BracketError);
  CHECK_THROWS_AS(robin_mode_roots(0.0, 1.0, 40), BracketError);
  CHECK_THROWS_AS(mode_logdet_zeta(robin_mode_roots(1.0, 1.0, 20)), DomainError);

  RootSequence bad = robin_mode_roots(1.0, 1.0, 60);
  bad.nu[5] += 1e-6;
  bad.roots[5] = 1.0 + bad.nu[5] * bad.nu[5];
  CHECK_THROWS_AS(validate_robin_roots(bad), NumericalError);

  RootSequence good = robin_mode_roots(1.0, 1.0, 60);
  good.tail_c1 = 0.0;
  CHECK(validate_robin_roots(good).tail_c1 == doctest::Approx(1.0).epsilon(1e-6));

  // a sequence labelled with the wrong lambda fails the tail check
  RootSequence mislabelled = robin_mode_roots(1.0, 1.0, 60);
  mislabelled.lambda = 1.5;
  CHECK_THROWS_AS(mode_logdet_zeta(mislabelled), TailFitError);
}

}  // TEST_SUITE
