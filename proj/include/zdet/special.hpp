#pragma once

#include <complex>

namespace zdet {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kLog2 = 0.693147180559945309417232121458176568;
inline constexpr double kLog2Pi = 1.837877066409345483560659472811235279;

enum class ZetaScheme { ClosedFormHurwitz, EulerMaclaurin, FiniteSum };

const char* to_string(ZetaScheme scheme);

/// A computed zeta value with its provenance and an honest error estimate.
struct ZetaValue {
  cplx s;
  cplx value;
  ZetaScheme scheme = ZetaScheme::EulerMaclaurin;
  double est_error = 0.0;
};

/// Hurwitz zeta value together with its s-derivative.
struct HurwitzJet {
  cplx value;
  cplx deriv;
  double est_error = 0.0;        // of value
  double deriv_est_error = 0.0;  // of deriv
};

/// Natural log of Gamma(x) for real x > 0 (shifted Stirling series).
double log_gamma(double x);

/// Digamma psi(x) for real x > 0.
double digamma(double x);

/// Bernoulli number B_{2k}, k = 1..15.
double bernoulli_2k(int k);

/// zeta_H(s, a) = sum_{n>=0} (n+a)^{-s}, analytically continued in s.
///
/// Euler-Maclaurin with an adaptive split point and order. Throws
/// PoleError within 1e-8 of s = 1 and DomainError for a <= 0.
ZetaValue hurwitz_zeta(cplx s, double a);

/// Value and d/ds of zeta_H(s, a) from the same Euler-Maclaurin expansion,
/// differentiated term by term.
HurwitzJet hurwitz_zeta_jet(cplx s, double a);

/// d/ds zeta_H(s, a) at s = 0, i.e. log Gamma(a) - log(2 pi)/2.
double hurwitz_zeta_zero_deriv(double a);

}  // namespace zdet
