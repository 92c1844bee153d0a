#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "zdet/special.hpp"

namespace zdet {

/// One eigenvalue magnitude of B. The spectrum is symmetric, so a line
/// stands for both +lambda and -lambda, each carrying `multiplicity`.
struct EigenLine {
  double lambda = 0.0;
  double multiplicity = 1.0;

  friend bool operator==(const EigenLine&, const EigenLine&) = default;
};

/// Positive-magnitude lines plus the dimension of Ker B, reported apart.
struct ModeList {
  std::vector<EigenLine> lines;
  int kernel_dim = 0;
};

/// Model of Spec(B).
///
/// Two kinds are supported:
///  * explicit: a finite list of lines lambda > 0 with integer multiplicity;
///  * arithmetic: |B|-spectrum d(n+a), n = 0,1,2,..., with per-sign
///    multiplicity sum_p c_p n^p (degree <= 3).
///
/// Zero modes are never part of a line; they are counted by kernel_dim and
/// every consumer handles them explicitly.
class TangentialModel {
 public:
  enum class Kind { Explicit, Arithmetic };

  static constexpr int kMaxDegree = 3;

  static TangentialModel make_explicit(std::vector<EigenLine> lines, int kernel_dim);
  static TangentialModel make_arithmetic(double offset, double gap,
                                         std::vector<double> mult_coeffs, int kernel_dim);

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Explicit; }
  int kernel_dim() const { return kernel_dim_; }

  // arithmetic parameters
  double offset() const { return offset_; }
  double gap() const { return gap_; }
  const std::vector<double>& mult_coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  // explicit parameters
  const std::vector<EigenLine>& lines() const { return lines_; }

  /// Smallest sigma with sum m(lambda) lambda^{-sigma} finite; 0 for finite models.
  double spectral_growth() const;

  /// Smallest nonzero |lambda|.
  double lambda_min() const;

  /// Per-sign multiplicity of the n-th arithmetic level.
  double multiplicity(long n) const;
  /// n-th arithmetic level d(n+a).
  double level(long n) const { return gap_ * (static_cast<double>(n) + offset_); }

  /// Calls fn(line) for every line in ascending order until fn returns false.
  /// Arithmetic models are enumerated lazily; explicit models stop at the end.
  void for_each_line(const std::function<bool(const EigenLine&)>& fn) const;

 private:
  TangentialModel() = default;

  Kind kind_ = Kind::Explicit;
  int kernel_dim_ = 0;
  double offset_ = 0.0;
  double gap_ = 0.0;
  std::vector<double> coeffs_;
  std::vector<EigenLine> lines_;
};

/// Weights w_i with sum_p c_p n^p = sum_i w_i (n+a)^i for an arithmetic model.
std::vector<double> shifted_multiplicity_weights(const TangentialModel& model);

/// zeta_{B^2}(s) = sum over nonzero eigenvalues of m (lambda^2)^{-s}.
ZetaValue zeta_B2(const TangentialModel& model, cplx s);

/// d/ds zeta_{B^2}(s) at s = 0, with error estimate.
struct RealEstimate {
  double value = 0.0;
  double est_error = 0.0;
};
RealEstimate zeta_B2_deriv0(const TangentialModel& model);

/// log Det B^2 = -zeta'_{B^2}(0), kernel excluded.
double logdet_B2(const TangentialModel& model);

/// zeta_{|B|}(s) = zeta_{B^2}(s/2).
ZetaValue zeta_absB(const TangentialModel& model, cplx s);
/// Sum over lambda > 0 only; half of zeta_absB by symmetry.
ZetaValue half_zeta_absB(const TangentialModel& model, cplx s);

/// Lines with |lambda| <= lambda_max, ascending, kernel reported separately.
ModeList enumerate_modes(const TangentialModel& model, double lambda_max);

/// d_{m-1} = zeta_{B^2}(0) + dim Ker B.
double d_coefficient(const TangentialModel& model);

/// The regularized invariants every cylinder and gluing assembly is built from.
struct SpectralInvariants {
  double zeta0 = 0.0;         // zeta_{B^2}(0)
  double dzeta0 = 0.0;        // zeta'_{B^2}(0)
  double zeta_abs_m1 = 0.0;   // zeta_{|B|}(-1)
  int kernel_dim = 0;
  double est_error = 0.0;     // max of the three component errors

  double logdet_B2() const { return -dzeta0; }
};
SpectralInvariants spectral_invariants(const TangentialModel& model);

/// Result of summing an exponentially decaying function over the lines of
/// a model (one sign; callers account for the mirror image).
struct TailSum {
  double value = 0.0;
  double truncation_bound = 0.0;
  double rounding = 0.0;
  long modes_used = 0;
};

/// Sums sum_{lines} multiplicity * term(lambda) where the caller guarantees
/// |term(lambda)| <= envelope * exp(-rate * lambda). Arithmetic models are
/// truncated adaptively once the dropped tail is provably below tol;
/// ConvergenceError if that needs more than max_modes levels.
TailSum sum_exponential_tail(const TangentialModel& model, double rate, double envelope,
                             const std::function<double(double)>& term, double tol = 1e-14,
                             long max_modes = 20'000'000);

}  // namespace zdet
