#include "zdet/mode_problem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "zdet/error.hpp"
#include "zdet/special.hpp"
#include "zdet/summation.hpp"

namespace zdet {

namespace {

constexpr int kMinRootsForZeta = 30;

void require_length(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("cylinder length r must be > 0");
}

void require_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw DomainError("mode eigenvalue magnitude must be >= 0");
  }
}

enum class Shape { DirichletDirichlet, DirichletRobin };

// Validates a problem and reduces it to its canonical orientation.
Shape canonical_shape(const ModeProblem& p) {
  require_length(p.r);
  require_lambda(p.lambda);
  const bool left_d = p.left == ModeBC::Dirichlet;
  const bool right_d = p.right == ModeBC::Dirichlet;
  if (left_d && right_d) return Shape::DirichletDirichlet;
  if (!left_d && !right_d) {
    throw DomainError("mode problem supports at most one non-Dirichlet end");
  }
  const ModeBC other = left_d ? p.right : p.left;
  if (other == ModeBC::Neumann && p.lambda != 0.0) {
    throw DomainError("Neumann end condition only arises for lambda = 0");
  }
  return Shape::DirichletRobin;
}

// log(1 - e^{-2x}) for x > 0 without cancellation
double log_one_minus_exp2(double x) { return std::log(-std::expm1(-2.0 * x)); }

void fit_tail(RootSequence& seq) {
  const std::size_t n = seq.nu.size();
  const std::size_t m = std::min<std::size_t>(10, n);
  if (m < 3) {
    seq.tail_c1 = seq.lambda;
    seq.tail_c3 = -seq.lambda * seq.lambda * seq.lambda / 3.0;
    return;
  }
  // least squares for y = c1 + c3 x + c5 x^2,  y = (nu r - L) nu,  x = (nu_min / nu)^2
  const double nu_ref = seq.nu[n - m];
  Eigen::MatrixXd design(m, 3);
  Eigen::VectorXd y(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t l = n - m + i;
    const double nu = seq.nu[l];
    const double big_l = (static_cast<double>(l) + 0.5) * kPi;
    const double x = (nu_ref / nu) * (nu_ref / nu);
    design.row(i) << 1.0, x, x * x;
    y(i) = (nu * seq.r - big_l) * nu;
  }
  const Eigen::VectorXd c = design.colPivHouseholderQr().solve(y);
  seq.tail_c1 = c(0);
  seq.tail_c3 = c(1) * nu_ref * nu_ref;
}

// Closed part of -zeta'(0) for nu_l = (pi / r)(l + a0 + ...): -2 log(r/pi) zeta_H(0,a0) - 2 zeta_H'(0,a0)
double hurwitz_baseline(double r, double a0) {
  const double z0 = hurwitz_zeta(0.0, a0).value.real();
  return -2.0 * std::log(r / kPi) * z0 - 2.0 * hurwitz_zeta_zero_deriv(a0);
}

}  // namespace

const char* to_string(ModeBC bc) {
  switch (bc) {
    case ModeBC::Dirichlet:
      return "Dirichlet";
    case ModeBC::RobinAbs:
      return "RobinAbs";
    case ModeBC::Neumann:
      return "Neumann";
  }
  return "unknown";
}

double robin_residual(double lambda, double r, double nu) {
  return (nu * std::cos(nu * r) + lambda * std::sin(nu * r)) / std::hypot(nu, lambda);
}

std::vector<double> dirichlet_mode_eigen(double lambda, double r, int count) {
  require_length(r);
  require_lambda(lambda);
  if (count < 1) throw DomainError("dirichlet_mode_eigen: count must be >= 1");
  std::vector<double> mu(static_cast<std::size_t>(count));
  for (int k = 1; k <= count; ++k) {
    const double kr = k * kPi / r;
    mu[k - 1] = lambda * lambda + kr * kr;
  }
  return mu;
}

RootSequence robin_mode_roots(double lambda, double r, int count) {
  require_length(r);
  if (count < 1) throw DomainError("robin_mode_roots: count must be >= 1");
  if (!std::isfinite(lambda)) throw DomainError("robin_mode_roots: lambda must be finite");
  RootSequence seq;
  seq.lambda = lambda;
  seq.r = r;
  seq.nu.reserve(count);
  seq.roots.reserve(count);
  for (int l = 0; l < count; ++l) {
    double lo = (l + 0.5) * kPi / r;
    double hi = (l + 1.0) * kPi / r;
    double f_lo = robin_residual(lambda, r, lo);
    const double f_hi = robin_residual(lambda, r, hi);
    if (!(f_lo * f_hi < 0.0)) {
      throw BracketError("robin_mode_roots: no sign change in bracket " + std::to_string(l) +
                         " (lambda must be > 0)");
    }
    while (hi - lo > 1e-13) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double f_mid = robin_residual(lambda, r, mid);
      if (f_mid == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((f_mid < 0.0) == (f_lo < 0.0)) {
        lo = mid;
        f_lo = f_mid;
      } else {
        hi = mid;
      }
    }
    const double nu = 0.5 * (lo + hi);
    const double res = std::abs(robin_residual(lambda, r, nu));
    if (res > 1e-12) {
      throw NumericalError("robin_mode_roots: residual " + std::to_string(res) +
                           " exceeds 1e-12 at root " + std::to_string(l));
    }
    seq.max_residual = std::max(seq.max_residual, res);
    seq.nu.push_back(nu);
    seq.roots.push_back(lambda * lambda + nu * nu);
  }
  fit_tail(seq);
  return seq;
}

RootSequence validate_robin_roots(RootSequence seq) {
  require_length(seq.r);
  if (seq.nu.size() != seq.roots.size()) {
    throw DomainError("root sequence has mismatched nu and root arrays");
  }
  seq.max_residual = 0.0;
  for (std::size_t l = 0; l < seq.nu.size(); ++l) {
    const double nu = seq.nu[l];
    const double lo = (l + 0.5) * kPi / seq.r;
    const double hi = (l + 1.0) * kPi / seq.r;
    const double res = std::abs(robin_residual(seq.lambda, seq.r, nu));
    if (nu < lo || nu > hi || res > 1e-12) {
      throw NumericalError("root " + std::to_string(l) + " fails validation (residual " +
                           std::to_string(res) + ")");
    }
    seq.max_residual = std::max(seq.max_residual, res);
  }
  fit_tail(seq);
  return seq;
}

RootSequence neumann_mode_roots(double r, int count) {
  require_length(r);
  if (count < 1) throw DomainError("neumann_mode_roots: count must be >= 1");
  RootSequence seq;
  seq.lambda = 0.0;
  seq.r = r;
  for (int l = 0; l < count; ++l) {
    const double nu = (l + 0.5) * kPi / r;
    seq.nu.push_back(nu);
    seq.roots.push_back(nu * nu);
  }
  fit_tail(seq);
  return seq;
}

ModeLogdetSplit mode_logdet_split(const ModeProblem& problem) {
  const Shape shape = canonical_shape(problem);
  if (!(problem.lambda > 0.0)) {
    throw KernelModeError("mode_logdet_split needs lambda > 0");
  }
  const double x = problem.lambda * problem.r;
  ModeLogdetSplit s;
  s.linear = 1.0;
  if (shape == Shape::DirichletDirichlet) {
    // log(2 sinh(x) / lambda) = x - log(lambda) + log(1 - e^{-2x})
    s.log_coeff = -1.0;
    s.tail = log_one_minus_exp2(x);
  } else {
    s.constant = kLog2;
  }
  return s;
}

double mode_logdet_gy(const ModeProblem& problem) {
  const Shape shape = canonical_shape(problem);
  if (problem.lambda == 0.0) {
    return shape == Shape::DirichletDirichlet ? std::log(2.0 * problem.r) : kLog2;
  }
  const ModeLogdetSplit s = mode_logdet_split(problem);
  return s.linear * problem.lambda * problem.r + s.log_coeff * std::log(problem.lambda) +
         s.constant + s.tail;
}

double mode_logdet_zeta(const RootSequence& seq) {
  const std::size_t n = seq.count();
  if (n < static_cast<std::size_t>(kMinRootsForZeta) || seq.nu.size() != n) {
    throw DomainError("mode_logdet_zeta: needs at least 30 explicit roots");
  }
  const double lambda = seq.lambda;
  const double r = seq.r;
  if (std::abs(seq.tail_c1 - lambda) > 1e-6 * (1.0 + lambda)) {
    throw TailFitError("mode_logdet_zeta: fitted tail coefficient " +
                       std::to_string(seq.tail_c1) + " does not match lambda " +
                       std::to_string(lambda));
  }
  // nu_l r = L_l + delta_l with L_l = (l + 1/2) pi:
  //   -zeta'(0) = log 2 + sum_l [2 log(1 + delta_l / L_l) + log(1 + lambda^2 / nu_l^2)]
  RealSum acc;
  acc.add(hurwitz_baseline(r, 0.5));
  for (std::size_t l = 0; l < n; ++l) {
    const double big_l = (static_cast<double>(l) + 0.5) * kPi;
    const double delta = seq.nu[l] * r - big_l;
    acc.add(2.0 * std::log1p(delta / big_l));
    acc.add(std::log1p(lambda * lambda / (seq.nu[l] * seq.nu[l])));
  }
  // Tail l >= n from the large-l expansion of each summand in 1/L:
  //   (2b + b^2) / L^2 - (3b^2 + 8b^3/3 + b^4/2) / L^4 + O(L^-6),  b = lambda r
  const double b = lambda * r;
  const double c2 = 2.0 * b + b * b;
  const double c4 = -(3.0 * b * b + 8.0 / 3.0 * b * b * b + 0.5 * b * b * b * b);
  const double start = static_cast<double>(n) + 0.5;
  acc.add(c2 * hurwitz_zeta(2.0, start).value.real() / (kPi * kPi));
  acc.add(c4 * hurwitz_zeta(4.0, start).value.real() / (kPi * kPi * kPi * kPi));
  return acc.value();
}

double mode_logdet_zeta(const DirichletFamily& family) {
  require_length(family.r);
  require_lambda(family.lambda);
  if (family.count < kMinRootsForZeta) {
    throw DomainError("mode_logdet_zeta: needs at least 30 explicit roots");
  }
  const double b = family.lambda * family.r;
  const auto mu = dirichlet_mode_eigen(family.lambda, family.r, family.count);
  RealSum acc;
  acc.add(hurwitz_baseline(family.r, 1.0));
  for (int k = 1; k <= family.count; ++k) {
    const double nu2 = mu[k - 1] - family.lambda * family.lambda;
    acc.add(std::log1p(family.lambda * family.lambda / nu2));
  }
  // log(1 + b^2/K^2) = b^2/K^2 - b^4/(2K^4) + O(K^-6),  K = k pi
  const double start = family.count + 1.0;
  acc.add(b * b * hurwitz_zeta(2.0, start).value.real() / (kPi * kPi));
  acc.add(-0.5 * b * b * b * b * hurwitz_zeta(4.0, start).value.real() /
          (kPi * kPi * kPi * kPi));
  return acc.value();
}

double mode_poisson_dtn(double lambda, double r, ModeBC far_bc) {
  require_length(r);
  require_lambda(lambda);
  if (far_bc != ModeBC::Dirichlet) {
    throw DomainError("mode_poisson_dtn: far end must be Dirichlet");
  }
  if (lambda == 0.0) return 1.0 / r;
  return lambda / std::tanh(lambda * r);
}

double mode_poisson_dtn_shooting(double lambda, double r, int steps) {
  require_length(r);
  require_lambda(lambda);
  steps = std::max(steps, 10000);
  const double h = r / steps;
  const double l2 = lambda * lambda;
  // y'' = lambda^2 y from the far end: y(0) = 0, y'(0) = 1
  double y = 0.0;
  double v = 1.0;
  for (int i = 0; i < steps; ++i) {
    const double k1y = v, k1v = l2 * y;
    const double k2y = v + 0.5 * h * k1v, k2v = l2 * (y + 0.5 * h * k1y);
    const double k3y = v + 0.5 * h * k2v, k3v = l2 * (y + 0.5 * h * k2y);
    const double k4y = v + h * k3v, k4v = l2 * (y + h * k3y);
    y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    if (std::abs(y) > 1e200) {  // linear problem: rescale freely
      v /= std::abs(y);
      y /= std::abs(y);
    }
  }
  return v / y;
}

double mode_q_value(double lambda, double r) {
  require_length(r);
  if (!std::isfinite(lambda)) throw DomainError("mode_q_value: lambda must be finite");
  const double a = std::abs(lambda);
  if (a == 0.0) return 1.0 / r;
  return 2.0 * a / -std::expm1(-2.0 * a * r);
}

}  // namespace zdet
