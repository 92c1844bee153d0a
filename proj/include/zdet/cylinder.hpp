#pragma once

#include <complex>
#include <string>

#include "zdet/mode_problem.hpp"
#include "zdet/spectral_model.hpp"

namespace zdet {

/// Boundary condition at one end of the cylinder [-r, 0] (left end at -r).
enum class CylinderEnd {
  Dirichlet,
  APS_Pneg,     // P_<
  APS_Pnonneg,  // P_>=
  APS_Ppos,     // P_>
  APS_Pnonpos,  // P_<=
  RobinAbsB,    // d_u + |B|
};

const char* to_string(CylinderEnd end);

/// Accepted pairs: (D,D), (D,P<), (D,P<=), (P>=,D), (P>,D), (D,R), (R,D).
struct CylinderBC {
  CylinderEnd left = CylinderEnd::Dirichlet;
  CylinderEnd right = CylinderEnd::Dirichlet;

  /// Throws ConfigError for any pair outside the accepted list.
  void validate() const;

  /// Parses "D,D", "D,P<", "D,P<=", "P>=,D", "P>,D", "D,R", "R,D".
  static CylinderBC parse(const std::string& text);
  std::string to_string() const;

  friend bool operator==(const CylinderBC&, const CylinderBC&) = default;
};

struct ModeBCPair {
  ModeBC left = ModeBC::Dirichlet;
  ModeBC right = ModeBC::Dirichlet;
};

/// Per-mode boundary conditions induced by `bc` on the B-eigenmode with
/// signed eigenvalue lambda_signed.
ModeBCPair mode_bc_projection(const CylinderBC& bc, double lambda_signed);

/// A regularized scalar kept together with the pieces it was recombined from.
///
/// The three paired pieces are coefficient * invariant with invariants
/// zeta_{|B|}(-1), zeta'_{B^2}(0) and zeta_{B^2}(0) respectively.
template <class T>
struct BasicRegScalar {
  struct Paired {
    T coefficient{};
    double invariant = 0.0;

    T value() const { return coefficient * invariant; }
  };

  T value{};
  Paired linear_in_r;
  Paired log_part;
  Paired count_part;
  T kernel_part{};
  T convergent_tail{};
  double est_error = 0.0;
  double truncation_bound = 0.0;

  /// Sum of the pieces in a fixed order.
  T recombine() const {
    return ((linear_in_r.value() + log_part.value()) + count_part.value()) +
           (kernel_part + convergent_tail);
  }
};

using RegScalar = BasicRegScalar<double>;
using ComplexRegScalar = BasicRegScalar<std::complex<double>>;

/// log Det(-d_u^2 + B^2) on a cylinder of length r with boundary pair bc,
/// assembled from the projected per-mode closed forms with the divergent
/// mode sums replaced by their zeta-regularized values.
RegScalar cylinder_logdet(const TangentialModel& model, double r, const CylinderBC& bc);

struct GluingIdentityResult {
  double residual = 0.0;
  double est_error = 0.0;
  double lhs = 0.0;  // logdet(D,P<) + logdet(P>=,D) - 2 logdet(D,D)
  double rhs = 0.0;  // q_logdet
};

/// [logdet(D,P<) + logdet(P>=,D) - 2 logdet(D,D)] - log Det Q_{(d_u+|B|),r}.
GluingIdentityResult gluing_identity_residual(const TangentialModel& model, double r);

}  // namespace zdet
