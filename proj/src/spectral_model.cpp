#include "zdet/spectral_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "zdet/error.hpp"
#include "zdet/summation.hpp"

namespace zdet {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw ConfigError(std::string(what) + " must be finite");
}

}  // namespace

// Weights w_i with sum_p c_p n^p = sum_i w_i (n+a)^i.
std::vector<double> shifted_multiplicity_weights(const TangentialModel& model) {
  const auto& c = model.mult_coeffs();
  const double a = model.offset();
  std::vector<double> w(c.size(), 0.0);
  for (std::size_t p = 0; p < c.size(); ++p) {
    for (std::size_t i = 0; i <= p; ++i) {
      w[i] += c[p] * binomial(static_cast<int>(p), static_cast<int>(i)) *
              std::pow(-a, static_cast<double>(p - i));
    }
  }
  return w;
}

TangentialModel TangentialModel::make_explicit(std::vector<EigenLine> lines, int kernel_dim) {
  if (kernel_dim < 0) throw ConfigError("kernel dimension must be >= 0");
  for (const auto& l : lines) {
    require_finite(l.lambda, "eigenvalue");
    require_finite(l.multiplicity, "multiplicity");
    if (!(l.lambda > 0.0)) {
      throw ConfigError("explicit lines must have lambda > 0; zero modes go in the kernel count");
    }
    if (l.multiplicity < 1.0 || l.multiplicity != std::floor(l.multiplicity)) {
      throw ConfigError("explicit multiplicities must be positive integers");
    }
  }
  std::sort(lines.begin(), lines.end(),
            [](const EigenLine& x, const EigenLine& y) { return x.lambda < y.lambda; });
  // merge repeated magnitudes
  std::vector<EigenLine> merged;
  for (const auto& l : lines) {
    if (!merged.empty() && merged.back().lambda == l.lambda) {
      merged.back().multiplicity += l.multiplicity;
    } else {
      merged.push_back(l);
    }
  }
  TangentialModel m;
  m.kind_ = Kind::Explicit;
  m.kernel_dim_ = kernel_dim;
  m.lines_ = std::move(merged);
  return m;
}

TangentialModel TangentialModel::make_arithmetic(double offset, double gap,
                                                 std::vector<double> mult_coeffs,
                                                 int kernel_dim) {
  require_finite(offset, "offset a");
  require_finite(gap, "gap d");
  if (!(offset > 0.0)) throw ConfigError("arithmetic model needs offset a > 0");
  if (!(gap > 0.0)) throw ConfigError("arithmetic model needs gap d > 0");
  if (kernel_dim < 0) throw ConfigError("kernel dimension must be >= 0");
  if (mult_coeffs.empty()) throw ConfigError("multiplicity polynomial is empty");
  while (mult_coeffs.size() > 1 && mult_coeffs.back() == 0.0) mult_coeffs.pop_back();
  if (static_cast<int>(mult_coeffs.size()) - 1 > kMaxDegree) {
    throw ConfigError("multiplicity polynomial degree exceeds " + std::to_string(kMaxDegree));
  }
  bool any = false;
  for (double c : mult_coeffs) {
    require_finite(c, "multiplicity coefficient");
    if (c < 0.0) throw ConfigError("multiplicity coefficients must be >= 0");
    any = any || c > 0.0;
  }
  if (!any) throw ConfigError("multiplicity coefficients are all zero");
  TangentialModel m;
  m.kind_ = Kind::Arithmetic;
  m.kernel_dim_ = kernel_dim;
  m.offset_ = offset;
  m.gap_ = gap;
  m.coeffs_ = std::move(mult_coeffs);
  return m;
}

double TangentialModel::spectral_growth() const {
  return kind_ == Kind::Arithmetic ? degree() + 1.0 : 0.0;
}

double TangentialModel::multiplicity(long n) const {
  double m = 0.0;
  double np = 1.0;
  for (double c : coeffs_) {
    m += c * np;
    np *= static_cast<double>(n);
  }
  return m;
}

double TangentialModel::lambda_min() const {
  if (kind_ == Kind::Explicit) {
    if (lines_.empty()) throw DomainError("model has no nonzero eigenvalues");
    return lines_.front().lambda;
  }
  return multiplicity(0) > 0.0 ? level(0) : level(1);
}

void TangentialModel::for_each_line(const std::function<bool(const EigenLine&)>& fn) const {
  if (kind_ == Kind::Explicit) {
    for (const auto& l : lines_) {
      if (!fn(l)) return;
    }
    return;
  }
  for (long n = 0;; ++n) {
    const double m = multiplicity(n);
    if (m <= 0.0) continue;
    if (!fn(EigenLine{level(n), m})) return;
  }
}

ZetaValue zeta_B2(const TangentialModel& model, cplx s) {
  ZetaValue out;
  out.s = s;
  if (model.is_finite()) {
    ComplexSum acc;
    for (const auto& l : model.lines()) {
      acc.add(2.0 * l.multiplicity * std::exp(-s * std::log(l.lambda * l.lambda)));
    }
    out.value = acc.value();
    out.scheme = ZetaScheme::FiniteSum;
    out.est_error = 4.0 * kEps * acc.magnitude();
    return out;
  }
  const auto w = shifted_multiplicity_weights(model);
  const cplx scale = 2.0 * std::exp(-2.0 * s * std::log(model.gap()));
  ComplexSum acc;
  double err = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    const ZetaValue h = hurwitz_zeta(2.0 * s - static_cast<double>(i), model.offset());
    acc.add(scale * w[i] * h.value);
    err += std::abs(scale * w[i]) * h.est_error;
  }
  out.value = acc.value();
  out.scheme = ZetaScheme::ClosedFormHurwitz;
  out.est_error = err + 4.0 * kEps * acc.magnitude();
  return out;
}

RealEstimate zeta_B2_deriv0(const TangentialModel& model) {
  RealEstimate out;
  if (model.is_finite()) {
    RealSum acc;
    for (const auto& l : model.lines()) {
      acc.add(-2.0 * l.multiplicity * std::log(l.lambda * l.lambda));
    }
    out.value = acc.value();
    out.est_error = 4.0 * kEps * acc.magnitude();
    return out;
  }
  // d/ds [2 d^{-2s} sum_i w_i zeta_H(2s - i, a)] at s = 0
  const auto w = shifted_multiplicity_weights(model);
  const double a = model.offset();
  const double logd = std::log(model.gap());
  RealSum acc;
  double err = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    const HurwitzJet jet = hurwitz_zeta_jet(-static_cast<double>(i), a);
    const double dz = (i == 0) ? hurwitz_zeta_zero_deriv(a) : jet.deriv.real();
    acc.add(2.0 * w[i] * (-2.0 * logd * jet.value.real()));
    acc.add(2.0 * w[i] * 2.0 * dz);
    err += 2.0 * std::abs(w[i]) * (2.0 * std::abs(logd) * jet.est_error + 2.0 * jet.deriv_est_error);
  }
  out.value = acc.value();
  out.est_error = err + 4.0 * kEps * acc.magnitude();
  return out;
}

double logdet_B2(const TangentialModel& model) { return -zeta_B2_deriv0(model).value; }

ZetaValue zeta_absB(const TangentialModel& model, cplx s) {
  ZetaValue z = zeta_B2(model, 0.5 * s);
  z.s = s;
  return z;
}

ZetaValue half_zeta_absB(const TangentialModel& model, cplx s) {
  ZetaValue z = zeta_absB(model, s);
  z.value *= 0.5;
  z.est_error *= 0.5;
  return z;
}

ModeList enumerate_modes(const TangentialModel& model, double lambda_max) {
  if (!(lambda_max > 0.0)) throw DomainError("enumerate_modes: lambda_max must be > 0");
  ModeList out;
  out.kernel_dim = model.kernel_dim();
  model.for_each_line([&](const EigenLine& l) {
    if (l.lambda > lambda_max) return false;
    out.lines.push_back(l);
    return true;
  });
  return out;
}

double d_coefficient(const TangentialModel& model) {
  return zeta_B2(model, 0.0).value.real() + model.kernel_dim();
}

SpectralInvariants spectral_invariants(const TangentialModel& model) {
  SpectralInvariants inv;
  const ZetaValue z0 = zeta_B2(model, 0.0);
  const RealEstimate dz0 = zeta_B2_deriv0(model);
  const ZetaValue zm1 = zeta_absB(model, -1.0);
  inv.zeta0 = z0.value.real();
  inv.dzeta0 = dz0.value;
  inv.zeta_abs_m1 = zm1.value.real();
  inv.kernel_dim = model.kernel_dim();
  inv.est_error = std::max({z0.est_error, dz0.est_error, zm1.est_error});
  return inv;
}

TailSum sum_exponential_tail(const TangentialModel& model, double rate, double envelope,
                             const std::function<double(double)>& term, double tol,
                             long max_modes) {
  if (!(rate > 0.0)) throw DomainError("sum_exponential_tail: decay rate must be > 0");
  TailSum out;
  RealSum acc;
  if (model.is_finite()) {
    for (const auto& l : model.lines()) {
      acc.add(l.multiplicity * term(l.lambda));
      ++out.modes_used;
    }
    out.value = acc.value();
    out.rounding = 4.0 * kEps * acc.magnitude();
    return out;
  }
  const double q = std::exp(-rate * model.gap());
  const double base = envelope * std::exp(-rate * model.gap() * model.offset());
  const auto& c = model.mult_coeffs();
  for (long n = 0;; ++n) {
    if (n >= 1) {
      // sum_{k>=n} k^p q^k <= n^p q^n / (1 - q (1 + 1/n)^p)
      double bound = 0.0;
      bool valid = true;
      const double qn = std::pow(q, static_cast<double>(n));
      for (std::size_t p = 0; p < c.size() && valid; ++p) {
        if (c[p] == 0.0) continue;
        const double ratio = q * std::pow(1.0 + 1.0 / n, static_cast<double>(p));
        if (ratio >= 1.0) {
          valid = false;
          break;
        }
        bound += c[p] * std::pow(static_cast<double>(n), static_cast<double>(p)) * qn /
                 (1.0 - ratio);
      }
      if (valid) {
        bound *= base;
        if (bound <= tol) {
          out.truncation_bound = bound;
          break;
        }
      }
    }
    if (n >= max_modes) {
      throw ConvergenceError("exponential tail did not reach tolerance within " +
                             std::to_string(max_modes) + " modes");
    }
    const double m = model.multiplicity(n);
    if (m > 0.0) acc.add(m * term(model.level(n)));
    out.modes_used = n + 1;
  }
  out.value = acc.value();
  out.rounding = 4.0 * kEps * acc.magnitude();
  return out;
}

}  // namespace zdet
