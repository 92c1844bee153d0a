#include "zdet/gluing.hpp"

#include <cmath>
#include <limits>

#include "zdet/error.hpp"
#include "zdet/special.hpp"
#include "zdet/summation.hpp"

namespace zdet {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTailTol = 1e-14;
constexpr long kMaxScanModes = 10'000'000;

void require_length(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("cylinder length r must be > 0");
}

void require_no_kernel(const TangentialModel& model, const char* what) {
  if (model.kernel_dim() > 0) {
    throw KernelModeError(std::string(what) + " requires Ker B = 0 (model has kernel_dim " +
                          std::to_string(model.kernel_dim()) + ")");
  }
}

// |lambda| (coth(|lambda| r) - 1) = 2|lambda| e^{-2x} / (1 - e^{-2x})
double coth_excess(double lambda, double r) {
  const double x = lambda * r;
  return 2.0 * lambda * std::exp(-2.0 * x) / -std::expm1(-2.0 * x);
}

// Excess of a variant's eigenvalue over mu + |lambda| on the signed mode.
double dtn_excess(double lambda, double r, DtNVariant variant) {
  const double a = std::abs(lambda);
  switch (variant) {
    case DtNVariant::M1_Dirichlet:
    case DtNVariant::M2_Dirichlet:
      return coth_excess(a, r);
    case DtNVariant::M1_APS:
      return lambda > 0.0 ? 0.0 : coth_excess(a, r);
    case DtNVariant::M2_APS:
      return lambda < 0.0 ? 0.0 : coth_excess(a, r);
  }
  return 0.0;
}

// Sums f(signed lambda) over both signs, each with envelope 2 e^{-2|lambda| r} / (1 - e^{-2 lmin r}).
double signed_difference_sum(const TangentialModel& model, double r,
                             const std::function<double(double)>& f) {
  const double envelope = 2.0 / -std::expm1(-2.0 * model.lambda_min() * r);
  RealSum acc;
  for (double sign : {-1.0, 1.0}) {
    const TailSum s = sum_exponential_tail(
        model, 2.0 * r, envelope, [&](double l) { return f(sign * l); }, kTailTol);
    acc.add(s.value);
  }
  return acc.value();
}

}  // namespace

const char* to_string(CapOperator::Kind kind) {
  return kind == CapOperator::Kind::Zero ? "zero" : "absB_plus";
}

const char* to_string(DtNVariant v) {
  switch (v) {
    case DtNVariant::M1_Dirichlet:
      return "M1_Dirichlet";
    case DtNVariant::M2_Dirichlet:
      return "M2_Dirichlet";
    case DtNVariant::M1_APS:
      return "M1_APS";
    case DtNVariant::M2_APS:
      return "M2_APS";
  }
  return "unknown";
}

CapOperator CapOperator::make(Kind kind, double c, double beta, double kernel_value,
                              const TangentialModel& model) {
  if (!std::isfinite(c) || !std::isfinite(beta) || !std::isfinite(kernel_value)) {
    throw ConfigError("cap parameters must be finite");
  }
  if (kernel_value < 0.0) throw ConfigError("cap kernel_value must be >= 0");
  CapOperator cap;
  cap.kind_ = kind;
  cap.kernel_value_ = kernel_value;
  if (kind == Kind::Zero) return cap;

  cap.c_ = c;
  cap.beta_ = beta;
  if (c == 0.0) return cap;
  if (beta < 1.0) throw ConfigError("cap perturbation exponent beta must be >= 1");
  if (!model.is_finite() && !(2.0 * beta > model.degree())) {
    throw ConfigError("cap perturbation c (1+lambda^2)^-beta is not summable against the model's "
                      "multiplicities (need 2 beta > degree)");
  }
  if (c < 0.0) {
    // mu >= |lambda| + c, so only lambda < -c can violate mu >= 0
    bool bad = false;
    double where = 0.0;
    model.for_each_line([&](const EigenLine& l) {
      if (l.lambda > -c) return false;
      if (cap.mu(l.lambda) < 0.0) {
        bad = true;
        where = l.lambda;
        return false;
      }
      return true;
    });
    if (bad) {
      throw ConfigError("cap eigenvalue mu is negative at lambda = " + std::to_string(where));
    }
  }
  return cap;
}

double CapOperator::mu(double lambda) const {
  if (kind_ == Kind::Zero) return 0.0;
  const double a = std::abs(lambda);
  if (c_ == 0.0) return a;
  return a + c_ * std::pow(1.0 + a * a, -beta_);
}

double CapOperator::mu_lower(double lambda) const {
  if (kind_ == Kind::Zero) return 0.0;
  return std::abs(lambda) + std::min(0.0, c_);
}

double Block2x2::min_eigenvalue() const {
  const double mean = 0.5 * (a + c);
  const double rad = std::hypot(0.5 * (a - c), b);
  const double lo = mean - rad;
  const double hi = mean + rad;
  // avoid cancellation when the small eigenvalue is tiny against the large one
  if (hi > 0.0 && std::abs(lo) < 1e-3 * hi) return (a * c - b * b) / hi;
  return lo;
}

double dtn_eigenvalue(const CapOperator& cap, double lambda, double r, DtNVariant variant) {
  require_length(r);
  if (lambda == 0.0) throw KernelModeError("dtn_eigenvalue is undefined on Ker B");
  const double a = std::abs(lambda);
  return cap.mu(a) + a + dtn_excess(lambda, r, variant);
}

RegScalar q_logdet(const TangentialModel& model, double r) {
  require_length(r);
  const SpectralInvariants inv = spectral_invariants(model);
  RegScalar out;
  out.count_part = {kLog2, inv.zeta0};
  out.log_part = {-0.5, inv.dzeta0};
  out.kernel_part = inv.kernel_dim * std::log(1.0 / r);
  const double envelope = 1.0 / -std::expm1(-2.0 * model.lambda_min() * r);
  const TailSum tail = sum_exponential_tail(
      model, 2.0 * r, envelope, [r](double l) { return std::log(-std::expm1(-2.0 * l * r)); },
      1e-12);
  // both signs of the spectrum
  out.convergent_tail = -2.0 * tail.value;
  out.truncation_bound = 2.0 * (tail.truncation_bound + tail.rounding);
  out.value = out.recombine();
  const double piece_mag = std::abs(out.count_part.value()) + std::abs(out.log_part.value()) +
                           std::abs(out.kernel_part) + std::abs(out.convergent_tail);
  out.est_error = (kLog2 + 0.5) * inv.est_error + out.truncation_bound + 4.0 * kEps * piece_mag;
  return out;
}

double q_logdet_limit(const TangentialModel& model) {
  const SpectralInvariants inv = spectral_invariants(model);
  return kLog2 * inv.zeta0 + 0.5 * inv.logdet_B2();
}

double dtn_difference_logdet(const TangentialModel& model, const CapOperator& cap, double r,
                             DtNVariant a, DtNVariant b) {
  require_length(r);
  require_no_kernel(model, "dtn_difference_logdet");
  if (a == b) return 0.0;
  return signed_difference_sum(model, r, [&](double lambda) {
    const double base = cap.mu(lambda) + std::abs(lambda);
    const double ea = dtn_excess(lambda, r, a);
    const double eb = dtn_excess(lambda, r, b);
    if (!(base + eb > 0.0)) {
      throw DomainError("dtn eigenvalue vanishes; cap violates its invariants");
    }
    return std::log1p((ea - eb) / (base + eb));
  });
}

double dtn_perturbation_trace(const TangentialModel& model, const CapOperator& cap, double r,
                              DtNVariant a, DtNVariant b) {
  require_length(r);
  require_no_kernel(model, "dtn_perturbation_trace");
  if (a == b) return 0.0;
  return signed_difference_sum(model, r, [&](double lambda) {
    const double base = cap.mu(lambda) + std::abs(lambda);
    const double eb = dtn_excess(lambda, r, b);
    return (dtn_excess(lambda, r, a) - eb) / (base + eb);
  });
}

double adiabatic_bracket(const TangentialModel& model, const CapOperator& cap1,
                         const CapOperator& cap2, double r) {
  require_no_kernel(model, "adiabatic_bracket");
  RealSum acc;
  acc.add(-q_logdet(model, r).value);
  acc.add(dtn_difference_logdet(model, cap1, r, DtNVariant::M1_Dirichlet, DtNVariant::M1_APS));
  acc.add(dtn_difference_logdet(model, cap2, r, DtNVariant::M2_Dirichlet, DtNVariant::M2_APS));
  return acc.value();
}

double adiabatic_limit(const TangentialModel& model) { return -q_logdet_limit(model); }

double q_limit_bound(const TangentialModel& model, double r) {
  require_length(r);
  const double denom = -std::expm1(-2.0 * model.lambda_min() * r);
  const TailSum s = sum_exponential_tail(
      model, 2.0 * r, 1.0, [r](double l) { return std::exp(-2.0 * l * r); }, 1e-18);
  return 2.0 * (s.value + s.truncation_bound) / denom;
}

double fit_decay_rate(const std::vector<double>& r, const std::vector<double>& deviation) {
  if (r.size() != deviation.size() || r.size() < 2) {
    throw DomainError("fit_decay_rate needs at least two matching samples");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(std::abs(deviation[i]) > 0.0)) {
      throw NumericalError("fit_decay_rate: deviation vanished at r = " + std::to_string(r[i]));
    }
    const double y = std::log(std::abs(deviation[i]));
    sx += r[i];
    sy += y;
    sxx += r[i] * r[i];
    sxy += r[i] * y;
  }
  const double det = n * sxx - sx * sx;
  if (det == 0.0) throw DomainError("fit_decay_rate: r samples must differ");
  return -(n * sxy - sx * sy) / det;
}

Block2x2 r_block(const CapOperator& cap1, const CapOperator& cap2, double lambda, double r) {
  require_length(r);
  const double l = std::abs(lambda);
  if (l == 0.0) throw KernelModeError("R_{-r,r} blocks are built for Ker B = 0");
  const double x = l * r;
  // A = 2l / (e^{2x} - e^{-2x}),  A e^{-2x} = 2l e^{-4x} / (1 - e^{-4x})
  const double one_minus = -std::expm1(-4.0 * x);
  const double big_a = 2.0 * l * std::exp(-2.0 * x) / one_minus;
  const double diag = 2.0 * l * std::exp(-4.0 * x) / one_minus;
  Block2x2 blk;
  blk.a = cap1.mu(l) + l + diag;
  blk.c = cap2.mu(l) + l + diag;
  blk.b = -big_a;
  return blk;
}

BlockScan r_blocks_min_eig(const TangentialModel& model, const CapOperator& cap1,
                           const CapOperator& cap2, double r) {
  require_length(r);
  require_no_kernel(model, "r_blocks_min_eig");
  BlockScan scan;
  scan.min_eigenvalue = std::numeric_limits<double>::infinity();
  model.for_each_line([&](const EigenLine& line) {
    // every eigenvalue of the block is >= min(mu_i) + |lambda| tanh(|lambda| r),
    // which is nondecreasing in |lambda|
    const double lower = std::min(cap1.mu_lower(line.lambda), cap2.mu_lower(line.lambda)) +
                         line.lambda * std::tanh(line.lambda * r);
    if (scan.modes_scanned > 0 && lower > scan.min_eigenvalue) return false;
    if (scan.modes_scanned >= kMaxScanModes) {
      throw ConvergenceError("r_blocks_min_eig: mode scan did not terminate");
    }
    const double e = r_block(cap1, cap2, line.lambda, r).min_eigenvalue();
    if (e < scan.min_eigenvalue) {
      scan.min_eigenvalue = e;
      scan.argmin_lambda = line.lambda;
    }
    ++scan.modes_scanned;
    return true;
  });
  return scan;
}

ThresholdReport blocks_threshold(const TangentialModel& model, const CapOperator& cap1,
                                 const CapOperator& cap2, const std::vector<double>& r_grid) {
  ThresholdReport rep;
  rep.r = r_grid;
  for (double r : r_grid) rep.scans.push_back(r_blocks_min_eig(model, cap1, cap2, r));
  rep.r0 = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = r_grid.size(); i-- > 0;) {
    if (!(rep.scans[i].min_eigenvalue > 0.0)) break;
    rep.r0 = r_grid[i];
  }
  return rep;
}

std::vector<OffendingMode> extended_solution_detect(const TangentialModel& model,
                                                    const CapOperator& cap1,
                                                    const CapOperator& cap2) {
  constexpr double kZeroTol = 1e-12;
  std::vector<OffendingMode> out;
  const CapOperator* caps[2] = {&cap1, &cap2};
  for (int i = 0; i < 2; ++i) {
    const CapOperator& cap = *caps[i];
    if (model.kernel_dim() > 0 && cap.kernel_value() == 0.0) {
      out.push_back({0.0, i + 1, "kernel mode with kernel_value = 0"});
    }
    model.for_each_line([&](const EigenLine& line) {
      if (cap.mu_lower(line.lambda) + line.lambda > kZeroTol) return false;
      if (std::abs(cap.mu(line.lambda) + line.lambda) <= kZeroTol) {
        out.push_back({line.lambda, i + 1, "mu + |lambda| = 0"});
      }
      return true;
    });
  }
  return out;
}

}  // namespace zdet
