#pragma once

#include <cmath>
#include <complex>
#include <type_traits>

namespace zdet {

// Neumaier compensated accumulator. Results depend only on the order in
// which terms are added, never on platform-specific reassociation.
template <class T>
class CompensatedSum {
 public:
  CompensatedSum() = default;

  void add(T x) {
    if constexpr (std::is_same_v<T, double>) {
      add_real(sum_, comp_, x);
    } else {
      double sr = sum_.real(), cr = comp_.real();
      double si = sum_.imag(), ci = comp_.imag();
      add_real(sr, cr, x.real());
      add_real(si, ci, x.imag());
      sum_ = T(sr, si);
      comp_ = T(cr, ci);
    }
    abs_ += std::abs(x);
  }

  CompensatedSum& operator+=(T x) {
    add(x);
    return *this;
  }

  T value() const { return sum_ + comp_; }
  /// Sum of |terms|; scales the rounding estimate.
  double magnitude() const { return abs_; }

 private:
  static void add_real(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }

  T sum_{};
  T comp_{};
  double abs_ = 0.0;
};

using RealSum = CompensatedSum<double>;
using ComplexSum = CompensatedSum<std::complex<double>>;

}  // namespace zdet
