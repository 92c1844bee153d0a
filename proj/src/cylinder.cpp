#include "zdet/cylinder.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "zdet/error.hpp"
#include "zdet/gluing.hpp"
#include "zdet/summation.hpp"

namespace zdet {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTailTol = 1e-12;

bool is_aps(CylinderEnd e) {
  return e == CylinderEnd::APS_Pneg || e == CylinderEnd::APS_Pnonneg ||
         e == CylinderEnd::APS_Ppos || e == CylinderEnd::APS_Pnonpos;
}

struct EndToken {
  const char* text;
  CylinderEnd end;
};

constexpr std::array<EndToken, 6> kTokens{{
    {"D", CylinderEnd::Dirichlet},
    {"P<", CylinderEnd::APS_Pneg},
    {"P>=", CylinderEnd::APS_Pnonneg},
    {"P>", CylinderEnd::APS_Ppos},
    {"P<=", CylinderEnd::APS_Pnonpos},
    {"R", CylinderEnd::RobinAbsB},
}};

CylinderEnd parse_end(const std::string& s) {
  for (const auto& t : kTokens) {
    if (s == t.text) return t.end;
  }
  throw ConfigError("unknown cylinder end condition '" + s + "'");
}

const char* end_token(CylinderEnd e) {
  for (const auto& t : kTokens) {
    if (t.end == e) return t.text;
  }
  return "?";
}

// The end condition an APS projector induces on the mode lambda.
// `killed` is true when the projector acts nontrivially on lambda, which
// makes the end Dirichlet; otherwise the complementary Robin condition
// (Neumann at lambda = 0) applies.
ModeBC aps_mode(bool killed, double lambda) {
  if (killed) return ModeBC::Dirichlet;
  return lambda == 0.0 ? ModeBC::Neumann : ModeBC::RobinAbs;
}

ModeBC project_end(CylinderEnd e, double lambda) {
  switch (e) {
    case CylinderEnd::Dirichlet:
      return ModeBC::Dirichlet;
    case CylinderEnd::RobinAbsB:
      return lambda == 0.0 ? ModeBC::Neumann : ModeBC::RobinAbs;
    case CylinderEnd::APS_Pneg:
      return aps_mode(lambda < 0.0, lambda);
    case CylinderEnd::APS_Pnonpos:
      return aps_mode(lambda <= 0.0, lambda);
    case CylinderEnd::APS_Pnonneg:
      return aps_mode(lambda >= 0.0, lambda);
    case CylinderEnd::APS_Ppos:
      return aps_mode(lambda > 0.0, lambda);
  }
  return ModeBC::Dirichlet;
}

double kernel_mode_logdet(const ModeBCPair& p, double r) {
  ModeProblem mp;
  mp.lambda = 0.0;
  mp.r = r;
  mp.left = p.left;
  mp.right = p.right;
  return mode_logdet_gy(mp);
}

}  // namespace

const char* to_string(CylinderEnd end) {
  switch (end) {
    case CylinderEnd::Dirichlet:
      return "Dirichlet";
    case CylinderEnd::APS_Pneg:
      return "APS_Pneg";
    case CylinderEnd::APS_Pnonneg:
      return "APS_Pnonneg";
    case CylinderEnd::APS_Ppos:
      return "APS_Ppos";
    case CylinderEnd::APS_Pnonpos:
      return "APS_Pnonpos";
    case CylinderEnd::RobinAbsB:
      return "RobinAbsB";
  }
  return "unknown";
}

void CylinderBC::validate() const {
  using E = CylinderEnd;
  const bool ok = (left == E::Dirichlet && right == E::Dirichlet) ||
                  (left == E::Dirichlet && (right == E::APS_Pneg || right == E::APS_Pnonpos)) ||
                  (right == E::Dirichlet && (left == E::APS_Pnonneg || left == E::APS_Ppos)) ||
                  (left == E::Dirichlet && right == E::RobinAbsB) ||
                  (left == E::RobinAbsB && right == E::Dirichlet);
  if (!ok) {
    std::string why = "unsupported cylinder boundary pair " + to_string();
    if (is_aps(left) && is_aps(right)) why += " (double-APS cylinders are not supported)";
    throw ConfigError(why);
  }
}

CylinderBC CylinderBC::parse(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw ConfigError("boundary pair must look like 'D,P<', got '" + text + "'");
  }
  CylinderBC bc;
  bc.left = parse_end(text.substr(0, comma));
  bc.right = parse_end(text.substr(comma + 1));
  bc.validate();
  return bc;
}

std::string CylinderBC::to_string() const {
  return std::string(end_token(left)) + "," + end_token(right);
}

ModeBCPair mode_bc_projection(const CylinderBC& bc, double lambda_signed) {
  bc.validate();
  return {project_end(bc.left, lambda_signed), project_end(bc.right, lambda_signed)};
}

RegScalar cylinder_logdet(const TangentialModel& model, double r, const CylinderBC& bc) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("cylinder length r must be > 0");
  bc.validate();
  const SpectralInvariants inv = spectral_invariants(model);

  // Every nonzero mode on one side of the spectrum projects to the same
  // pair, so each side contributes uniform split coefficients.
  double lin = 0.0, logc = 0.0, cst = 0.0;
  int dd_sides = 0;
  for (double sign : {-1.0, 1.0}) {
    const ModeBCPair p = mode_bc_projection(bc, sign);
    ModeProblem mp;
    mp.lambda = 1.0;
    mp.r = r;
    mp.left = p.left;
    mp.right = p.right;
    const ModeLogdetSplit s = mode_logdet_split(mp);
    lin += s.linear;
    logc += s.log_coeff;
    cst += s.constant;
    if (s.log_coeff != 0.0) ++dd_sides;
  }

  RegScalar out;
  // sum_side m |lambda| r -> r zeta_{|B|}(-1) / 2
  out.linear_in_r = {0.5 * r * lin, inv.zeta_abs_m1};
  // sum_side m log|lambda| -> -zeta'_{B^2}(0) / 4
  out.log_part = {-0.25 * logc, inv.dzeta0};
  // sum_side m -> zeta_{B^2}(0) / 2
  out.count_part = {0.5 * cst, inv.zeta0};
  if (inv.kernel_dim > 0) {
    out.kernel_part = inv.kernel_dim * kernel_mode_logdet(mode_bc_projection(bc, 0.0), r);
  }
  if (dd_sides > 0) {
    const double lmin = model.lambda_min();
    const double envelope = 1.0 / -std::expm1(-2.0 * lmin * r);
    const TailSum tail = sum_exponential_tail(
        model, 2.0 * r, envelope, [r](double l) { return std::log(-std::expm1(-2.0 * l * r)); },
        kTailTol);
    out.convergent_tail = dd_sides * tail.value;
    out.truncation_bound = dd_sides * (tail.truncation_bound + tail.rounding);
  }
  out.value = out.recombine();

  const double coeff_mag = std::abs(out.linear_in_r.coefficient) +
                           std::abs(out.log_part.coefficient) +
                           std::abs(out.count_part.coefficient);
  const double piece_mag = std::abs(out.linear_in_r.value()) + std::abs(out.log_part.value()) +
                           std::abs(out.count_part.value()) + std::abs(out.kernel_part) +
                           std::abs(out.convergent_tail);
  out.est_error = coeff_mag * inv.est_error + out.truncation_bound + 4.0 * kEps * piece_mag;
  return out;
}

GluingIdentityResult gluing_identity_residual(const TangentialModel& model, double r) {
  const RegScalar dp = cylinder_logdet(model, r, CylinderBC::parse("D,P<"));
  const RegScalar pd = cylinder_logdet(model, r, CylinderBC::parse("P>=,D"));
  const RegScalar dd = cylinder_logdet(model, r, CylinderBC::parse("D,D"));
  const RegScalar q = q_logdet(model, r);
  GluingIdentityResult res;
  RealSum lhs;
  lhs.add(dp.value);
  lhs.add(pd.value);
  lhs.add(-2.0 * dd.value);
  res.lhs = lhs.value();
  res.rhs = q.value;
  res.residual = res.lhs - res.rhs;
  res.est_error = dp.est_error + pd.est_error + 2.0 * dd.est_error + q.est_error +
                  4.0 * kEps * (std::abs(dp.value) + std::abs(pd.value) +
                                2.0 * std::abs(dd.value) + std::abs(q.value));
  return res;
}

}  // namespace zdet
