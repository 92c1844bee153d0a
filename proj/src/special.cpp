#include "zdet/special.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "zdet/error.hpp"
#include "zdet/summation.hpp"

namespace zdet {

namespace {

constexpr std::array<double, 15> kBernoulli2k = {
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
};

// B_{2k} / (2k)!
double bernoulli_over_factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= 2 * k; ++i) f *= i;
  return kBernoulli2k[k - 1] / f;
}

constexpr double kEps = std::numeric_limits<double>::epsilon();

}  // namespace

const char* to_string(ZetaScheme scheme) {
  switch (scheme) {
    case ZetaScheme::ClosedFormHurwitz:
      return "closed-form-hurwitz";
    case ZetaScheme::EulerMaclaurin:
      return "euler-maclaurin";
    case ZetaScheme::FiniteSum:
      return "finite-sum";
  }
  return "unknown";
}

double bernoulli_2k(int k) {
  if (k < 1 || k > static_cast<int>(kBernoulli2k.size())) {
    throw DomainError("bernoulli_2k: index out of table range");
  }
  return kBernoulli2k[k - 1];
}

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("log_gamma: argument must be positive and finite");
  }
  // Shift into the Stirling regime: log Gamma(x) = log Gamma(x+n) - sum log(x+i).
  RealSum shift;
  while (x < 15.0) {
    shift.add(-std::log(x));
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  RealSum series;
  series.add((x - 0.5) * std::log(x));
  series.add(-x);
  series.add(0.5 * kLog2Pi);
  double p = inv;
  for (int k = 1; k <= 8; ++k) {
    series.add(kBernoulli2k[k - 1] / (2.0 * k * (2.0 * k - 1.0)) * p);
    p *= inv2;
  }
  return series.value() + shift.value();
}

double digamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("digamma: argument must be positive and finite");
  }
  RealSum acc;
  while (x < 15.0) {
    acc.add(-1.0 / x);
    x += 1.0;
  }
  const double inv2 = 1.0 / (x * x);
  acc.add(std::log(x));
  acc.add(-0.5 / x);
  double p = inv2;
  for (int k = 1; k <= 8; ++k) {
    acc.add(-kBernoulli2k[k - 1] / (2.0 * k) * p);
    p *= inv2;
  }
  return acc.value();
}

namespace {

struct EulerMaclaurin {
  cplx value;
  cplx deriv;
  double value_err = 0.0;
  double deriv_err = 0.0;
  bool value_ok = false;
  bool deriv_ok = false;
};

// One Euler-Maclaurin evaluation of zeta_H(s, a) and its s-derivative with
// the sum split at x = n_split + a. Value and derivative are tracked as
// separate series: at nonpositive integer s the value series terminates
// while the derivative series stays asymptotic.
EulerMaclaurin euler_maclaurin(cplx s, double a, int n_split) {
  constexpr int kMaxOrder = 15;
  ComplexSum val;
  ComplexSum der;
  for (int n = 0; n < n_split; ++n) {
    const double lx = std::log(n + a);
    const cplx v = std::exp(-s * lx);
    val.add(v);
    der.add(-lx * v);
  }
  const double x = n_split + a;
  const double lx = std::log(x);
  const cplx xs = std::exp(-s * lx);  // x^{-s}
  {
    const cplx v = xs * x / (s - 1.0);
    val.add(v);
    der.add(-lx * v - v / (s - 1.0));
    val.add(0.5 * xs);
    der.add(-0.5 * lx * xs);
  }
  // Pochhammer (s)_{2k-1} and its derivative, carried as a dual number.
  cplx poch = s;
  cplx dpoch = 1.0;
  cplx xpow = xs / x;  // x^{-s-1}
  double last_v = INFINITY, last_d = INFINITY;
  bool run_v = true, run_d = true;
  EulerMaclaurin out;
  for (int k = 1; k <= kMaxOrder && (run_v || run_d); ++k) {
    const double b = bernoulli_over_factorial(k);
    const cplx term = b * poch * xpow;
    const cplx dterm = b * (dpoch * xpow - lx * poch * xpow);
    if (run_v) {
      const double mag = std::abs(term);
      if (mag > last_v) {
        run_v = false;  // asymptotic series started to diverge
      } else {
        val.add(term);
        last_v = mag;
        if (mag <= 1e-16 * std::max(1.0, std::abs(val.value()))) {
          out.value_ok = true;
          run_v = false;
        }
      }
    }
    if (run_d) {
      const double mag = std::abs(dterm);
      if (mag > last_d) {
        run_d = false;
      } else {
        der.add(dterm);
        last_d = mag;
        if (mag <= 1e-16 * std::max(1.0, std::abs(der.value()))) {
          out.deriv_ok = true;
          run_d = false;
        }
      }
    }
    // advance (s)_{2k-1} -> (s)_{2k+1}
    const cplx f1 = s + (2.0 * k - 1.0);
    const cplx f2 = s + (2.0 * k);
    dpoch = dpoch * f1 * f2 + poch * (f1 + f2);
    poch = poch * f1 * f2;
    xpow /= x * x;
  }
  out.value = val.value();
  out.deriv = der.value();
  out.value_ok = out.value_ok || last_v <= 1e-15 * std::max(1.0, std::abs(out.value));
  out.deriv_ok = out.deriv_ok || last_d <= 1e-15 * std::max(1.0, std::abs(out.deriv));
  out.value_err = last_v + 8.0 * kEps * val.magnitude();
  out.deriv_err = last_d + 8.0 * kEps * der.magnitude();
  return out;
}

}  // namespace

HurwitzJet hurwitz_zeta_jet(cplx s, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw DomainError("hurwitz_zeta: offset a must be positive, got " + std::to_string(a));
  }
  if (std::abs(s - 1.0) < 1e-8) {
    throw PoleError("hurwitz_zeta: s is within 1e-8 of the pole at s = 1");
  }
  // The Bernoulli terms shrink roughly like (|s| + 2k)^2 / (2 pi x)^2, so a
  // larger split point converges more easily, but for Re s < 0 the partial sum
  // grows like x^{1-s} and cancels against the integral term. Take the
  // smallest split point on the ladder 0, 1, 2, 4, ... that converges.
  const int n_max = 20 * (static_cast<int>(std::ceil(std::abs(s))) + 10);
  HurwitzJet out;
  bool have_value = false;
  for (int n_split = 0; n_split <= n_max; n_split = n_split == 0 ? 1 : 2 * n_split) {
    const EulerMaclaurin em = euler_maclaurin(s, a, n_split);
    if (!have_value && em.value_ok) {
      out.value = em.value;
      out.est_error = em.value_err;
      have_value = true;
    }
    if (em.deriv_ok) {
      if (!have_value) continue;
      out.deriv = em.deriv;
      out.deriv_est_error = em.deriv_err;
      return out;
    }
  }
  throw ConvergenceError("hurwitz_zeta: Euler-Maclaurin failed to converge");
}

ZetaValue hurwitz_zeta(cplx s, double a) {
  const HurwitzJet jet = hurwitz_zeta_jet(s, a);
  ZetaValue z;
  z.s = s;
  z.value = jet.value;
  z.scheme = ZetaScheme::EulerMaclaurin;
  z.est_error = jet.est_error;
  return z;
}

double hurwitz_zeta_zero_deriv(double a) {
  if (!(a > 0.0)) {
    throw DomainError("hurwitz_zeta_zero_deriv: offset a must be positive");
  }
  return log_gamma(a) - 0.5 * kLog2Pi;
}

}  // namespace zdet
