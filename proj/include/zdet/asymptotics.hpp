#pragma once

#include <string>
#include <vector>

#include "zdet/cylinder.hpp"
#include "zdet/special.hpp"
#include "zdet/spectral_model.hpp"

namespace zdet {

/// A complex ray alpha = e^{i theta}, |theta| < pi.
/// Rays from angle_set carry (m, k); rays from ray_at_angle have m = 0.
struct Ray {
  int m = 0;
  int k = 0;
  double theta = 0.0;
  cplx alpha{1.0, 0.0};
};

/// alpha_k = alpha_0 e^{2 pi i k / m} with theta_k = (2k - m + 1) pi / m.
Ray make_ray(int m, int k);
Ray ray_at_angle(double theta);
std::vector<Ray> angle_set(int m);

/// sum of theta over the rays, added in mirror pairs (exactly 0 for angle_set).
double theta_sum(const std::vector<Ray>& rays);

/// Q_{(d_u+|B|),r}(z) on a mode: w + |lambda| + 2w e^{-wr} / (e^{wr} - e^{-wr}),
/// w = sqrt(lambda^2 + z) on the principal branch. BranchCutError on the cut.
cplx q_alpha_mode(double lambda, double r, cplx z);

/// log Det Q_{(d_u+|B|),r}(alpha t), regularized.
///
/// The pieces hold log 2 zeta_{B^2}(0) and 1/2 log Det B^2 (the log(2|lambda|)
/// part of every mode); convergent_tail holds the rest: exact modes below a
/// cutoff, the continued large-mode expansion, and the exponential cylinder
/// corrections. kernel_part is k log(w_0 coth(w_0 r)), w_0 = sqrt(z).
ComplexRegScalar logdet_q_alpha(const TangentialModel& model, double r, const Ray& ray, double t);
ComplexRegScalar logdet_q_z(const TangentialModel& model, double r, cplx z);

struct AsymptoticSample {
  double t = 0.0;
  cplx value;
};

/// One basis function t^power (log t)^{0 or 1}.
struct BasisTerm {
  double power = 0.0;
  bool log = false;

  std::string label() const;
  double operator()(double t) const;
};

/// Asymptotic basis for a model whose multiplicities grow with degree p,
/// n = p + 1: t^{(n-k)/2} for k = 0..n+2+2*extra and t^j log t for integer
/// j = (n-k)/2 >= 0. For n = 1 and extra = 0 this is
/// {t^{1/2}, log t, 1, t^{-1/2}, t^{-1}}.
std::vector<BasisTerm> asymptotic_basis(int growth, int extra = 0);

struct AsymptoticFit {
  std::vector<BasisTerm> basis;
  std::vector<cplx> coefficients;
  double residual_norm = 0.0;
  double condition = 0.0;
  int extra_terms = 0;

  /// Coefficient of t^power (log t)^log; zero if absent.
  cplx coefficient(double power, bool log = false) const;
};

/// Least squares over >= 8 samples spanning >= 2 decades in t.
/// IllConditionedError when the scaled design matrix has condition > 1e10.
AsymptoticFit fit_asymptotic(const std::vector<AsymptoticSample>& samples,
                             const std::vector<BasisTerm>& basis);

/// Fits with asymptotic_basis(growth); while the residual exceeds
/// 1e-10 (1 + max |value|), retries with up to four further decaying terms.
AsymptoticFit fit_asymptotic(const std::vector<AsymptoticSample>& samples, int growth = 1);

struct ConstantTermFit {
  AsymptoticFit fit;
  cplx pi0;
  cplx predicted;  // (i/2) theta d_{m-1}
  double residual_norm = 0.0;
};

ConstantTermFit fit_constant_term(const std::vector<AsymptoticSample>& samples,
                                  const TangentialModel& model, const Ray& ray);

/// Log-spaced grid of n points in [t_min, t_max].
std::vector<double> log_grid(double t_min, double t_max, int n);

std::vector<AsymptoticSample> sample_ray(const TangentialModel& model, double r, const Ray& ray,
                                         const std::vector<double>& t_grid);

struct SumCkReport {
  std::vector<Ray> rays;
  std::vector<ConstantTermFit> fits;
  double theta_sum = 0.0;
  cplx sum_c;
  cplx sum_predicted;
};

/// Fits the constant term on every ray of angle_set(m) and sums them.
SumCkReport sum_ck_check(const TangentialModel& model, int m, double r,
                         const std::vector<double>& t_grid);

}  // namespace zdet
