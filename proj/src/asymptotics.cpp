#include "zdet/asymptotics.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "zdet/error.hpp"
#include "zdet/summation.hpp"

namespace zdet {

namespace {

constexpr double kEps = 2.220446049250313e-16;
constexpr int kSeriesOrder = 64;

struct LogSeries {
  std::array<double, kSeriesOrder + 1> l{};   // ell(u) = log((1 + sqrt(1+u)) / 2)
  std::array<double, kSeriesOrder + 1> l2{};  // ell(u)^2
};

LogSeries make_log_series() {
  LogSeries s;
  std::array<double, kSeriesOrder + 1> g{};  // (1 + sqrt(1+u)) / 2
  double binom = 1.0;                         // binom(1/2, j)
  g[0] = 1.0;
  for (int j = 1; j <= kSeriesOrder; ++j) {
    binom *= (0.5 - (j - 1)) / j;
    g[j] = 0.5 * binom;
  }
  // n L_n = n g_n - sum_{k<n} k L_k g_{n-k}
  for (int n = 1; n <= kSeriesOrder; ++n) {
    double acc = n * g[n];
    for (int k = 1; k < n; ++k) acc -= k * s.l[k] * g[n - k];
    s.l[n] = acc / n;
  }
  for (int n = 2; n <= kSeriesOrder; ++n) {
    double acc = 0.0;
    for (int k = 1; k < n; ++k) acc += s.l[k] * s.l[n - k];
    s.l2[n] = acc;
  }
  return s;
}

const LogSeries& log_series() {
  static const LogSeries s = make_log_series();
  return s;
}

void require_length(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("cylinder length r must be > 0");
}

cplx principal_sqrt(cplx x) {
  if (x.imag() == 0.0 && x.real() < 0.0) {
    throw BranchCutError("lambda^2 + z lies on the branch cut of the square root");
  }
  return std::sqrt(x);
}

// w coth(w r), with the series 1/r (1 + u/3 - u^2/45 + 2u^3/945), u = (wr)^2, near w = 0
cplx w_coth(cplx w, double r) {
  const cplx wr = w * r;
  if (std::abs(wr) < 1e-3) {
    const cplx u = wr * wr;
    return (1.0 + u / 3.0 - u * u / 45.0 + 2.0 * u * u * u / 945.0) / r;
  }
  const cplx q = std::exp(-2.0 * wr);
  return w * (1.0 + q) / (1.0 - q);
}

}  // namespace

Ray make_ray(int m, int k) {
  if (m < 2) throw DomainError("ray set needs m >= 2");
  if (k < 0 || k >= m) throw DomainError("ray index k must lie in 0..m-1");
  Ray ray;
  ray.m = m;
  ray.k = k;
  ray.theta = (2 * k - m + 1) * kPi / m;
  ray.alpha = std::polar(1.0, ray.theta);
  return ray;
}

Ray ray_at_angle(double theta) {
  if (!(std::abs(theta) < kPi)) throw DomainError("ray angle must lie in (-pi, pi)");
  Ray ray;
  ray.theta = theta;
  ray.alpha = std::polar(1.0, theta);
  return ray;
}

std::vector<Ray> angle_set(int m) {
  std::vector<Ray> rays;
  for (int k = 0; k < m; ++k) rays.push_back(make_ray(m, k));
  return rays;
}

double theta_sum(const std::vector<Ray>& rays) {
  const std::size_t n = rays.size();
  double sum = 0.0;
  for (std::size_t k = 0; k < n / 2; ++k) sum += rays[k].theta + rays[n - 1 - k].theta;
  if (n % 2 == 1) sum += rays[n / 2].theta;
  return sum;
}

cplx q_alpha_mode(double lambda, double r, cplx z) {
  require_length(r);
  const double l = std::abs(lambda);
  const cplx w = principal_sqrt(l * l + z);
  return l + w_coth(w, r);
}

ComplexRegScalar logdet_q_z(const TangentialModel& model, double r, cplx z) {
  require_length(r);
  const SpectralInvariants inv = spectral_invariants(model);
  ComplexRegScalar out;
  out.count_part = {cplx(kLog2), inv.zeta0};
  out.log_part = {cplx(-0.5), inv.dzeta0};
  if (inv.kernel_dim > 0) out.kernel_part = double(inv.kernel_dim) * std::log(q_alpha_mode(0.0, r, z));

  ComplexSum acc;
  double err = 0.0;
  // Modes below the cutoff are summed exactly; above it the expansion of
  // log((w + lambda) / (2 lambda)) in z / lambda^2 has ratio <= 1/4.
  const double cutoff = model.is_finite() ? std::numeric_limits<double>::infinity()
                                          : 2.0 * std::sqrt(std::abs(z));
  model.for_each_line([&](const EigenLine& line) {
    const double l = line.lambda;
    const cplx w = principal_sqrt(l * l + z);
    const cplx q = std::exp(-2.0 * w * r);
    const cplx corr = std::log(1.0 + 2.0 * w * q / ((1.0 - q) * (w + l)));
    const double m2 = 2.0 * line.multiplicity;
    if (l < cutoff) acc.add(m2 * (std::log(w + l) - std::log(2.0 * l)));
    acc.add(m2 * corr);
    if (l >= cutoff && std::abs(m2 * corr) < 1e-20 && 2.0 * w.real() * r > 40.0) return false;
    return true;
  });

  if (!model.is_finite()) {
    const LogSeries& ls = log_series();
    const double a = model.offset();
    const double d = model.gap();
    const double n_cut = std::max(0.0, std::ceil(cutoff / d - a));
    const double b = a + n_cut;
    const auto w = shifted_multiplicity_weights(model);
    const double logd = std::log(d);
    const double psi_b = digamma(b);
    cplx zj = 1.0;
    bool converged = false;
    for (int j = 1; j <= kSeriesOrder; ++j) {
      zj *= z;
      // Z(sigma) = 2 sum_i w_i d^{-sigma} zeta_H(sigma - i, b) = R / (sigma - 2j) + F near sigma = 2j
      double res = 0.0, fin = 0.0, fin_err = 0.0;
      const double dpow = std::pow(d, -2.0 * j);
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] == 0.0) continue;
        const double coeff = 2.0 * w[i] * dpow;
        const int e = 2 * j - static_cast<int>(i);
        if (e == 1) {
          res += coeff;
          fin += coeff * (-psi_b - logd);
        } else {
          const ZetaValue h = hurwitz_zeta(static_cast<double>(e), b);
          fin += coeff * h.value.real();
          fin_err += std::abs(coeff) * h.est_error;
        }
      }
      const cplx term = zj * (ls.l[j] * fin - 0.5 * ls.l2[j] * res - ls.l[j] * res * kLog2);
      acc.add(term);
      err += std::abs(zj) * std::abs(ls.l[j]) * fin_err;
      if (j >= 3 && std::abs(term) < 1e-18 * (1.0 + std::abs(acc.value()))) {
        err += std::abs(term);
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw ConvergenceError("logdet_q_alpha: large-mode expansion did not decay");
    }
  }
  out.convergent_tail = acc.value();
  out.truncation_bound = err;
  out.value = out.recombine();
  out.est_error = (kLog2 + 0.5) * inv.est_error + err +
                  4.0 * kEps * (acc.magnitude() + std::abs(out.count_part.value()) +
                                std::abs(out.log_part.value()) + std::abs(out.kernel_part));
  return out;
}

ComplexRegScalar logdet_q_alpha(const TangentialModel& model, double r, const Ray& ray, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("logdet_q_alpha: t must be > 0");
  return logdet_q_z(model, r, ray.alpha * t);
}

std::string BasisTerm::label() const {
  std::string p;
  if (power == 0.0) {
    p = log ? "" : "1";
  } else {
    char buf[32];
    std::snprintf(buf, sizeof buf, "t^%g", power);
    p = buf;
  }
  if (!log) return p;
  return p.empty() ? "log t" : p + " log t";
}

double BasisTerm::operator()(double t) const {
  const double v = power == 0.0 ? 1.0 : std::pow(t, power);
  return log ? v * std::log(t) : v;
}

std::vector<BasisTerm> asymptotic_basis(int growth, int extra) {
  if (growth < 1) throw DomainError("asymptotic basis needs growth >= 1");
  std::vector<BasisTerm> basis;
  for (int k = 0; k <= growth + 2 + 2 * extra; ++k) {
    const int twice = growth - k;  // power = twice / 2
    basis.push_back({0.5 * twice, false});
    if (twice >= 0 && twice % 2 == 0) basis.push_back({0.5 * twice, true});
  }
  return basis;
}

cplx AsymptoticFit::coefficient(double power, bool log) const {
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].power == power && basis[i].log == log) return coefficients[i];
  }
  return {};
}

AsymptoticFit fit_asymptotic(const std::vector<AsymptoticSample>& samples,
                             const std::vector<BasisTerm>& basis) {
  const std::size_t n = samples.size();
  const std::size_t nb = basis.size();
  if (n < 8) throw DomainError("asymptotic fit needs at least 8 samples");
  if (n < nb) throw DomainError("asymptotic fit has more basis terms than samples");
  double tmin = samples.front().t, tmax = samples.front().t;
  for (const auto& s : samples) {
    if (!(s.t > 0.0)) throw DomainError("asymptotic fit needs t > 0");
    tmin = std::min(tmin, s.t);
    tmax = std::max(tmax, s.t);
  }
  if (tmax < 100.0 * tmin) throw DomainError("asymptotic fit samples must span >= 2 decades");

  Eigen::MatrixXd x(n, nb);
  Eigen::MatrixXd y(n, 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < nb; ++j) x(i, j) = basis[j](samples[i].t);
    y(i, 0) = samples[i].value.real();
    y(i, 1) = samples[i].value.imag();
  }
  const Eigen::VectorXd scale = x.colwise().norm().transpose();
  const Eigen::MatrixXd xs = x * scale.cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(xs, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  AsymptoticFit fit;
  fit.basis = basis;
  fit.condition = sv(0) / sv(sv.size() - 1);
  if (!(fit.condition <= 1e10)) {
    throw IllConditionedError("asymptotic fit design matrix has condition " +
                              std::to_string(fit.condition));
  }
  const Eigen::MatrixXd coef = scale.cwiseInverse().asDiagonal() * svd.solve(y);
  for (std::size_t j = 0; j < nb; ++j) fit.coefficients.emplace_back(coef(j, 0), coef(j, 1));
  fit.residual_norm = (x * coef - y).norm();
  return fit;
}

AsymptoticFit fit_asymptotic(const std::vector<AsymptoticSample>& samples, int growth) {
  double scale = 1.0;
  for (const auto& s : samples) scale = std::max(scale, 1.0 + std::abs(s.value));
  AsymptoticFit best = fit_asymptotic(samples, asymptotic_basis(growth));
  for (int extra = 1; extra <= 2 && best.residual_norm > 1e-10 * scale; ++extra) {
    const auto basis = asymptotic_basis(growth, extra);
    if (basis.size() > samples.size()) break;
    try {
      AsymptoticFit next = fit_asymptotic(samples, basis);
      next.extra_terms = extra;
      best = std::move(next);
    } catch (const IllConditionedError&) {
      break;
    }
  }
  return best;
}

ConstantTermFit fit_constant_term(const std::vector<AsymptoticSample>& samples,
                                  const TangentialModel& model, const Ray& ray) {
  ConstantTermFit out;
  const int growth = model.is_finite() ? 1 : model.degree() + 1;
  out.fit = fit_asymptotic(samples, growth);
  out.pi0 = out.fit.coefficient(0.0);
  out.predicted = cplx(0.0, 0.5 * ray.theta * d_coefficient(model));
  out.residual_norm = out.fit.residual_norm;
  return out;
}

std::vector<double> log_grid(double t_min, double t_max, int n) {
  if (!(t_min > 0.0) || !(t_max > t_min) || n < 2) {
    throw DomainError("log grid needs 0 < t_min < t_max and n >= 2");
  }
  std::vector<double> t(static_cast<std::size_t>(n));
  const double lo = std::log(t_min), hi = std::log(t_max);
  for (int i = 0; i < n; ++i) t[i] = std::exp(lo + (hi - lo) * i / (n - 1));
  t.front() = t_min;
  t.back() = t_max;
  return t;
}

std::vector<AsymptoticSample> sample_ray(const TangentialModel& model, double r, const Ray& ray,
                                         const std::vector<double>& t_grid) {
  std::vector<AsymptoticSample> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) out.push_back({t, logdet_q_alpha(model, r, ray, t).value});
  return out;
}

SumCkReport sum_ck_check(const TangentialModel& model, int m, double r,
                         const std::vector<double>& t_grid) {
  SumCkReport rep;
  rep.rays = angle_set(m);
  rep.theta_sum = theta_sum(rep.rays);
  for (const Ray& ray : rep.rays) {
    rep.fits.push_back(fit_constant_term(sample_ray(model, r, ray, t_grid), model, ray));
  }
  const std::size_t n = rep.fits.size();
  for (std::size_t k = 0; k < n / 2; ++k) {
    rep.sum_c += rep.fits[k].pi0 + rep.fits[n - 1 - k].pi0;
    rep.sum_predicted += rep.fits[k].predicted + rep.fits[n - 1 - k].predicted;
  }
  if (n % 2 == 1) {
    rep.sum_c += rep.fits[n / 2].pi0;
    rep.sum_predicted += rep.fits[n / 2].predicted;
  }
  return rep;
}

}  // namespace zdet
