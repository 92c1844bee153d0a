#include <cmath>
#include <vector>

#include "doctest.h"
#include "zdet/error.hpp"
#include "zdet/gluing.hpp"

using namespace zdet;

namespace {

TangentialModel half_integer() { return TangentialModel::make_arithmetic(0.5, 1.0, {1.0}, 0); }
TangentialModel pm_one(int kernel = 0) {
  return TangentialModel::make_explicit({{1.0, 1.0}}, kernel);
}

double coth(double x) { return 1.0 / std::tanh(x); }

// Smaller eigenvalue of [[a, b], [b, c]] by the quadratic formula.
double min_eig_direct(double a, double b, double c) {
  return 0.5 * (a + c) - std::sqrt(0.25 * (a - c) * (a - c) + b * b);
}

// The bracket for the half-integer model summed mode by mode with |B| caps:
// -log Det Q + sum over positive modes of 2 log((2 lambda + lambda(coth - 1)) / (2 lambda)).
double half_integer_bracket_direct(double r) {
  double acc = -std::log(2.0) * 0.0 - std::log(2.0);  // zeta0 = 0, 1/2 log Det B^2 = log 2
  for (int n = 0; n < 4000; ++n) {
    const double l = n + 0.5;
    acc += 2.0 * std::log1p(-std::exp(-2.0 * l * r));  // -(-2 sum log(1 - e^{-2 l r}))
    acc += 2.0 * std::log((l + l * coth(l * r)) / (2.0 * l));
  }
  return acc;
}

}  // namespace

TEST_SUITE("gluing") {

TEST_CASE("DtN eigenvalues of the four variants") {
  const CapOperator cap = CapOperator::abs_b(pm_one());
  const double full = 1.0 + coth(1.0);
  CHECK(full == doctest::Approx(2.313035285).epsilon(1e-9));
  CHECK(dtn_eigenvalue(cap, 1.0, 1.0, DtNVariant::M1_Dirichlet) == doctest::Approx(full));
  CHECK(dtn_eigenvalue(cap, -1.0, 1.0, DtNVariant::M2_Dirichlet) == doctest::Approx(full));
  CHECK(dtn_eigenvalue(cap, 1.0, 1.0, DtNVariant::M1_APS) == doctest::Approx(2.0));
  CHECK(dtn_eigenvalue(cap, -1.0, 1.0, DtNVariant::M1_APS) == doctest::Approx(full));
  CHECK(dtn_eigenvalue(cap, -1.0, 1.0, DtNVariant::M2_APS) == doctest::Approx(2.0));
  CHECK(dtn_eigenvalue(cap, 1.0, 1.0, DtNVariant::M2_APS) == doctest::Approx(full));
  CHECK_THROWS_AS(dtn_eigenvalue(cap, 0.0, 1.0, DtNVariant::M1_APS), KernelModeError);
}

TEST_CASE("DtN difference determinant for a single mode pair") {
  const TangentialModel m = pm_one();
  const CapOperator cap = CapOperator::abs_b(m);
  const double v = dtn_difference_logdet(m, cap, 1.0, DtNVariant::M1_Dirichlet, DtNVariant::M1_APS);
  CHECK(v == doctest::Approx(std::log((1.0 + coth(1.0)) / 2.0)).epsilon(1e-13));
  CHECK(v == doctest::Approx(0.1454133).epsilon(1e-6));
  CHECK(dtn_difference_logdet(m, cap, 1.0, DtNVariant::M1_APS, DtNVariant::M1_Dirichlet) ==
        doctest::Approx(-v).epsilon(1e-13));
  CHECK(dtn_difference_logdet(m, cap, 1.0, DtNVariant::M1_APS, DtNVariant::M1_APS) == 0.0);
  CHECK_THROWS_AS(dtn_difference_logdet(pm_one(1), CapOperator::abs_b(pm_one(1)), 1.0,
                                        DtNVariant::M1_Dirichlet, DtNVariant::M1_APS),
                  KernelModeError);
}

TEST_CASE("log Det Q values") {
  const RegScalar q = q_logdet(pm_one(), 1.0);
  CHECK(q.value == doctest::Approx(2.0 * std::log(2.0 / -std::expm1(-2.0))).epsilon(1e-13));
  CHECK(q.value == doctest::Approx(1.6771213).epsilon(1e-6));
  // kernel modes contribute log(1/r) each
  CHECK(q_logdet(pm_one(2), 3.0).value - q_logdet(pm_one(), 3.0).value ==
        doctest::Approx(2.0 * std::log(1.0 / 3.0)).epsilon(1e-13));
  CHECK(q_logdet_limit(pm_one()) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-14));
  CHECK(q_logdet_limit(half_integer()) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("log Det Q decreases to its limit inside the bound") {
  const TangentialModel m = half_integer();
  const double lim = q_logdet_limit(m);
  double prev = INFINITY;
  for (double r = 0.5; r <= 12.0; r += 0.5) {
    const double q = q_logdet(m, r).value;
    CHECK(q < prev);
    CHECK(q > lim);
    CHECK(q - lim <= q_limit_bound(m, r) * (1.0 + 1e-12));
    prev = q;
  }
}

TEST_CASE("perturbation trace vanishes with r") {
  const TangentialModel m = half_integer();
  const CapOperator cap = CapOperator::abs_b(m);
  double prev = INFINITY;
  for (double r : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    const double t = dtn_perturbation_trace(m, cap, r, DtNVariant::M1_Dirichlet, DtNVariant::M1_APS);
    CHECK(t > 0.0);
    CHECK(t < prev);
    prev = t;
  }
  CHECK(prev < 1e-6);
}

TEST_CASE("adiabatic bracket against the mode-by-mode sum and its limit") {
  const TangentialModel m = half_integer();
  const CapOperator cap = CapOperator::abs_b(m);
  for (double r : {0.5, 1.0, 3.0}) {
    CHECK(adiabatic_bracket(m, cap, cap, r) ==
          doctest::Approx(half_integer_bracket_direct(r)).epsilon(1e-11));
  }
  CHECK(adiabatic_limit(m) == doctest::Approx(-std::log(2.0)).epsilon(1e-12));
  // with |B| caps the dtn differences cancel the exponential part of -log Det Q
  CHECK(std::abs(adiabatic_bracket(m, cap, cap, 6.0) - adiabatic_limit(m)) <= 1e-12);

  const TangentialModel p = pm_one();
  const CapOperator pc = CapOperator::abs_b(p);
  CHECK(adiabatic_limit(p) == doctest::Approx(-1.386294361).epsilon(1e-9));
  CHECK(std::abs(adiabatic_bracket(p, pc, pc, 20.0) - adiabatic_limit(p)) <= 1e-14);

  const CapOperator pert = CapOperator::make(CapOperator::Kind::AbsBPlus, 1.0, 1.0, 0.0, m);
  std::vector<double> rs, dev;
  for (double r = 2.0; r <= 8.0; r += 1.0) {
    rs.push_back(r);
    dev.push_back(adiabatic_bracket(m, pert, pert, r) - adiabatic_limit(m));
  }
  // slowest mode lambda = 1/2 decays like e^{-2 lambda r} = e^{-r}
  CHECK(fit_decay_rate(rs, dev) == doctest::Approx(1.0).epsilon(0.05));
  CHECK_THROWS_AS(adiabatic_bracket(pm_one(1), pc, pc, 1.0), KernelModeError);
}

TEST_CASE("decay rate fit recovers exact exponentials") {
  std::vector<double> rs, dev;
  for (double r = 1.0; r <= 6.0; r += 1.0) {
    rs.push_back(r);
    dev.push_back(-3.0 * std::exp(-2.5 * r));
  }
  CHECK(fit_decay_rate(rs, dev) == doctest::Approx(2.5).epsilon(1e-12));
  CHECK_THROWS_AS(fit_decay_rate({1.0}, {1.0}), DomainError);
  CHECK_THROWS_AS(fit_decay_rate({1.0, 2.0}, {1.0, 0.0}), NumericalError);
}

TEST_CASE("R blocks: closed form and direct eigenvalues") {
  const TangentialModel m = half_integer();
  const CapOperator abs = CapOperator::abs_b(m);
  const CapOperator zero = CapOperator::make(CapOperator::Kind::Zero, 0.0, 1.0, 0.0, m);
  const CapOperator pert = CapOperator::make(CapOperator::Kind::AbsBPlus, 1.0, 1.0, 0.0, m);
  for (double l : {0.5, 1.5, 4.0}) {
    for (double r : {0.3, 1.0, 5.0}) {
      CAPTURE(l);
      CAPTURE(r);
      CHECK(r_block(abs, abs, l, r).min_eigenvalue() ==
            doctest::Approx(l * (1.0 + std::tanh(l * r))).epsilon(1e-12));
      CHECK(r_block(zero, zero, l, r).min_eigenvalue() ==
            doctest::Approx(l * std::tanh(l * r)).epsilon(1e-10));
      const Block2x2 b = r_block(abs, pert, l, r);
      CHECK(b.min_eigenvalue() == doctest::Approx(min_eig_direct(b.a, b.b, b.c)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(r_block(abs, abs, 0.0, 1.0), KernelModeError);
}

TEST_CASE("block scan and threshold") {
  const TangentialModel m = half_integer();
  const CapOperator abs = CapOperator::abs_b(m);
  const BlockScan s = r_blocks_min_eig(m, abs, abs, 10.0);
  CHECK(s.argmin_lambda == 0.5);
  CHECK(s.min_eigenvalue == doctest::Approx(1.0 - 1.0 / (std::exp(10.0) + 1.0)).epsilon(1e-13));
  CHECK(s.modes_scanned >= 1);

  const ThresholdReport rep = blocks_threshold(m, abs, abs, {1.0, 2.0, 3.0});
  REQUIRE(rep.scans.size() == 3);
  CHECK(rep.r0 == 1.0);
  CHECK_THROWS_AS(r_blocks_min_eig(pm_one(1), abs, abs, 1.0), KernelModeError);
}

TEST_CASE("extended solution detection") {
  const TangentialModel k = pm_one(1);
  const CapOperator k0 = CapOperator::abs_b(k, 0.0);
  const CapOperator k1 = CapOperator::abs_b(k, 1.0);
  const auto both = extended_solution_detect(k, k0, k0);
  REQUIRE(both.size() == 2);
  CHECK(both[0].lambda == 0.0);
  CHECK(both[0].cap == 1);
  CHECK(both[1].cap == 2);
  const auto one = extended_solution_detect(k, k1, k0);
  REQUIRE(one.size() == 1);
  CHECK(one[0].cap == 2);
  CHECK(extended_solution_detect(k, k1, k1).empty());
  const TangentialModel m = half_integer();
  CHECK(extended_solution_detect(m, CapOperator::abs_b(m), CapOperator::abs_b(m)).empty());
}

TEST_CASE("cap validation") {
  const TangentialModel m = half_integer();
  using K = CapOperator::Kind;
  CHECK_THROWS_AS(CapOperator::make(K::AbsBPlus, 1.0, 0.5, 0.0, m), ConfigError);
  CHECK_THROWS_AS(CapOperator::make(K::AbsBPlus, 0.0, 1.0, -1.0, m), ConfigError);
  CHECK_THROWS_AS(CapOperator::make(K::AbsBPlus, NAN, 1.0, 0.0, m), ConfigError);
  // mu(1/2) = 1/2 - 2 / 1.25 < 0
  CHECK_THROWS_AS(CapOperator::make(K::AbsBPlus, -2.0, 1.0, 0.0, m), ConfigError);
  // degree-2 multiplicities need 2 beta > 2
  const TangentialModel deg2 = TangentialModel::make_arithmetic(0.5, 1.0, {1.0, 0.0, 1.0}, 0);
  CHECK_THROWS_AS(CapOperator::make(K::AbsBPlus, 1.0, 1.0, 0.0, deg2), ConfigError);
  CHECK_NOTHROW(CapOperator::make(K::AbsBPlus, 1.0, 1.5, 0.0, deg2));
  const CapOperator ok = CapOperator::make(K::AbsBPlus, -0.1, 1.0, 0.0, m);
  CHECK(ok.mu(0.5) == doctest::Approx(0.5 - 0.1 / 1.25));
  CHECK(ok.mu_lower(0.5) <= ok.mu(0.5));
  CHECK(std::string(to_string(K::Zero)) == "zero");
}

}  // TEST_SUITE
