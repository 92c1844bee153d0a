#pragma once

#include <string>
#include <vector>

#include "zdet/cylinder.hpp"
#include "zdet/spectral_model.hpp"

namespace zdet {

/// Diagonal model of a cap Dirichlet-to-Neumann operator Q_i.
///
/// On the mode pair +-lambda it acts by mu(lambda) = |lambda| + c (1 + lambda^2)^(-beta)
/// (kind AbsBPlus; c = 0 gives the unperturbed |B| cap) or by 0 (kind Zero,
/// a degenerate cap used to probe the failure of the invertibility margin).
/// On Ker B it acts by kernel_value.
class CapOperator {
 public:
  enum class Kind { AbsBPlus, Zero };

  /// Validates mu >= 0 on the model's spectrum, kernel_value >= 0, and for a
  /// nonzero perturbation beta >= 1 and sum m |p| / |lambda| < infinity.
  static CapOperator make(Kind kind, double c, double beta, double kernel_value,
                          const TangentialModel& model);
  static CapOperator abs_b(const TangentialModel& model, double kernel_value = 0.0) {
    return make(Kind::AbsBPlus, 0.0, 1.0, kernel_value, model);
  }

  Kind kind() const { return kind_; }
  double c() const { return c_; }
  double beta() const { return beta_; }
  double kernel_value() const { return kernel_value_; }

  double mu(double lambda) const;
  /// A lower bound for mu that is nondecreasing in |lambda|.
  double mu_lower(double lambda) const;

 private:
  CapOperator() = default;
  Kind kind_ = Kind::AbsBPlus;
  double c_ = 0.0;
  double beta_ = 1.0;
  double kernel_value_ = 0.0;
};

const char* to_string(CapOperator::Kind kind);

/// The four Dirichlet-to-Neumann operators of the pieces M_{1,r}, M_{2,r}
/// with Dirichlet or APS conditions at the far end of the attached cylinder.
enum class DtNVariant { M1_Dirichlet, M2_Dirichlet, M1_APS, M2_APS };

const char* to_string(DtNVariant v);

/// Symmetric 2x2 block [[a, b], [b, c]].
struct Block2x2 {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double min_eigenvalue() const;
};

/// Eigenvalue of a DtN variant on the mode with signed eigenvalue lambda:
/// mu(|lambda|) + |lambda| coth(|lambda| r), except on the side flattened by
/// the APS projector (lambda > 0 for M1_APS, lambda < 0 for M2_APS) where it
/// is mu(|lambda|) + |lambda|. KernelModeError for lambda = 0.
double dtn_eigenvalue(const CapOperator& cap, double lambda, double r, DtNVariant variant);

/// log Det Q_{(d_u+|B|),r} = log 2 zeta_{B^2}(0) + 1/2 log Det B^2
///                            - sum_{lambda != 0} m log(1 - e^{-2|lambda| r}) + k log(1/r).
RegScalar q_logdet(const TangentialModel& model, double r);

/// log 2 zeta_{B^2}(0) + 1/2 log Det B^2, the r -> infinity limit of q_logdet for k = 0.
double q_logdet_limit(const TangentialModel& model);

/// sum over signed modes of m log(eig_A / eig_B); absolutely convergent.
/// KernelModeError if the model has a kernel.
double dtn_difference_logdet(const TangentialModel& model, const CapOperator& cap, double r,
                             DtNVariant a, DtNVariant b);

/// Trace of K_r = R_b^{-1} (R_a - R_b), the varying part of R_a relative to R_b.
double dtn_perturbation_trace(const TangentialModel& model, const CapOperator& cap, double r,
                              DtNVariant a, DtNVariant b);

/// -q_logdet + [R_{M1,D} vs R_{M1,APS}] + [R_{M2,D} vs R_{M2,APS}], the
/// r-dependent part of the gluing bracket. KernelModeError if Ker B != 0.
double adiabatic_bracket(const TangentialModel& model, const CapOperator& cap1,
                         const CapOperator& cap2, double r);

/// -log 2 zeta_{B^2}(0) - 1/2 log Det B^2.
double adiabatic_limit(const TangentialModel& model);

/// sum m e^{-2|lambda| r} / (1 - e^{-2 lambda_min r}) over signed modes.
double q_limit_bound(const TangentialModel& model, double r);

/// Least-squares slope of -log|dev| against r, i.e. the exponential decay rate.
double fit_decay_rate(const std::vector<double>& r, const std::vector<double>& deviation);

/// Block of R_{-r,r} on the mode pair with |lambda| = lambda.
Block2x2 r_block(const CapOperator& cap1, const CapOperator& cap2, double lambda, double r);

struct BlockScan {
  double min_eigenvalue = 0.0;
  double argmin_lambda = 0.0;
  long modes_scanned = 0;
};

/// Minimum over all modes of the smaller eigenvalue of the R_{-r,r} blocks.
BlockScan r_blocks_min_eig(const TangentialModel& model, const CapOperator& cap1,
                           const CapOperator& cap2, double r);

struct ThresholdReport {
  std::vector<double> r;
  std::vector<BlockScan> scans;
  /// Smallest grid r from which every min eigenvalue is positive; NaN if none.
  double r0 = 0.0;
};

ThresholdReport blocks_threshold(const TangentialModel& model, const CapOperator& cap1,
                                 const CapOperator& cap2, const std::vector<double>& r_grid);

struct OffendingMode {
  double lambda = 0.0;  // 0 for a kernel mode
  int cap = 1;          // 1 or 2
  std::string reason;
};

/// Modes where mu_i(lambda) + |lambda| vanishes (within 1e-12) and kernel
/// modes capped by kernel_value = 0.
std::vector<OffendingMode> extended_solution_detect(const TangentialModel& model,
                                                    const CapOperator& cap1,
                                                    const CapOperator& cap2);

}  // namespace zdet
