#pragma once

// Unevaluated sum hi + lo carrying roughly 106 bits; only addition is needed
// for compensated accumulation.

namespace zetalab {

struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  static DoubleDouble two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return {s, err};
  }

  DoubleDouble& operator+=(double x) {
    const DoubleDouble s = two_sum(hi, x);
    const double lo_sum = s.lo + lo;
    const DoubleDouble r = two_sum(s.hi, lo_sum);
    hi = r.hi;
    lo = r.lo;
    return *this;
  }

  DoubleDouble& operator+=(const DoubleDouble& x) {
    const DoubleDouble s = two_sum(hi, x.hi);
    const double lo_sum = s.lo + lo + x.lo;
    const DoubleDouble r = two_sum(s.hi, lo_sum);
    hi = r.hi;
    lo = r.lo;
    return *this;
  }

  double value() const { return hi + lo; }
};

}  // namespace zetalab
