#pragma once

#include <cmath>
#include <complex>

namespace charmean {

/// Extended-precision floating type used for every inexact accumulation.
using SumReal = long double;
using Cplx = std::complex<SumReal>;

/// Compensated (Kahan) accumulator. Adding a value and then its negation
/// returns the running sum to its prior state up to an ulp-scale residue.
template <typename T>
struct KahanSum {
  T sum{0};
  T comp{0};

  void add(T v) {
    const T y = v - comp;
    const T t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }

  T value() const { return sum; }
};

/// |z|^2 without the intermediate sqrt of std::abs.
inline SumReal norm_sq(const Cplx& z) {
  return z.real() * z.real() + z.imag() * z.imag();
}

/// Complex accumulator with independent compensation per part.
struct ComplexAccumulator {
  KahanSum<SumReal> re;
  KahanSum<SumReal> im;

  void add(const Cplx& z) {
    re.add(z.real());
    im.add(z.imag());
  }

  void add(SumReal r, SumReal i) {
    re.add(r);
    im.add(i);
  }

  Cplx value() const { return {re.value(), im.value()}; }

  SumReal norm_sq() const {
    return re.value() * re.value() + im.value() * im.value();
  }

  SumReal magnitude() const { return std::sqrt(norm_sq()); }
};

}  // namespace charmean
