#pragma once

#include <vector>

namespace zdet {

/// End condition of a single B-eigenmode on [0, r].
///  RobinAbs: phi' + |lambda| phi = 0 with phi' the outward normal derivative.
///  Neumann:  phi' = 0, the lambda = 0 degeneration of RobinAbs.
enum class ModeBC { Dirichlet, RobinAbs, Neumann };

const char* to_string(ModeBC bc);

/// -phi'' + lambda^2 phi = mu phi on an interval of length r.
struct ModeProblem {
  double lambda = 0.0;  // |lambda| of the B-eigenmode
  double r = 1.0;
  ModeBC left = ModeBC::Dirichlet;
  ModeBC right = ModeBC::Dirichlet;
};

/// Roots mu_l > lambda^2 of  nu cos(nu r) + lambda sin(nu r) = 0,  nu = sqrt(mu - lambda^2).
///
/// nu_l lies in ((l + 1/2) pi / r, (l + 1) pi / r). For large l,
///   nu_l r = (l + 1/2) pi + c1 / nu_l + c3 / nu_l^3 + ...
/// with c1 = lambda and c3 = -lambda^3 / 3; tail_c1 / tail_c3 hold the values
/// fitted from the last computed roots.
struct RootSequence {
  double lambda = 0.0;
  double r = 1.0;
  std::vector<double> nu;
  std::vector<double> roots;  // mu_l = lambda^2 + nu_l^2
  double tail_c1 = 0.0;
  double tail_c3 = 0.0;
  double max_residual = 0.0;

  std::size_t count() const { return roots.size(); }
};

/// The closed Dirichlet family lambda^2 + (k pi / r)^2, k = 1..count.
struct DirichletFamily {
  double lambda = 0.0;
  double r = 1.0;
  int count = 40;
};

/// Normalized defining function (nu cos(nu r) + lambda sin(nu r)) / hypot(nu, lambda).
double robin_residual(double lambda, double r, double nu);

std::vector<double> dirichlet_mode_eigen(double lambda, double r, int count);

/// First `count` Robin roots by bisection, |d nu| <= 1e-13. Throws
/// BracketError if a bracket shows no sign change (lambda <= 0 misuse) and
/// NumericalError if any residual exceeds 1e-12.
RootSequence robin_mode_roots(double lambda, double r, int count);

/// Re-checks the residual of every root of an externally supplied sequence
/// (NumericalError above 1e-12) and refits tail_c1 / tail_c3.
RootSequence validate_robin_roots(RootSequence seq);

/// The lambda = 0 limit: nu_l = (l + 1/2) pi / r exactly.
RootSequence neumann_mode_roots(double r, int count);

/// Closed-form zeta-regularized log-determinant of a mode problem:
///   (D,D)        log(2 sinh(lambda r) / lambda),  lambda = 0: log(2r)
///   (D,RobinAbs) log 2 + lambda r,                lambda = 0: log 2
/// The reflected pair (RobinAbs,D) is isospectral to (D,RobinAbs).
double mode_logdet_gy(const ModeProblem& problem);

/// mode_logdet_gy split as  linear * lambda r + log_coeff * log(lambda) + constant + tail
/// where tail is exponentially small in lambda r. Only for lambda > 0.
struct ModeLogdetSplit {
  double linear = 0.0;
  double log_coeff = 0.0;
  double constant = 0.0;
  double tail = 0.0;
};
ModeLogdetSplit mode_logdet_split(const ModeProblem& problem);

/// -zeta'(0) of the root sequence, continued from the explicitly computed
/// roots plus a Hurwitz-summed asymptotic tail. Needs >= 30 roots.
double mode_logdet_zeta(const RootSequence& seq);
double mode_logdet_zeta(const DirichletFamily& family);

/// Outward normal derivative at the near end of the solution of
/// -phi'' + lambda^2 phi = 0 with phi(far) = 0, phi(near) = 1:
/// lambda coth(lambda r), or 1/r for lambda = 0.
double mode_poisson_dtn(double lambda, double r, ModeBC far_bc);

/// Same quantity by RK4 shooting with `steps` steps (at least 10^4).
double mode_poisson_dtn_shooting(double lambda, double r, int steps = 10000);

/// Eigenvalue of Q_{(d_u + |B|), r} on a mode: 2|lambda| / (1 - exp(-2|lambda| r)), 1/r at 0.
double mode_q_value(double lambda, double r);

}  // namespace zdet
