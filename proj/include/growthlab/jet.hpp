#pragma once

#include "growthlab/multi_index.hpp"

#include <array>

namespace growthlab {

// Truncated Taylor series c[0] + c[1] e + ... + c[n] e^n in one variable.
struct Jet {
  std::array<double, kMaxOracleOrder + 1> c{};
  int n = 0;

  Jet() = default;
  Jet(double value, int order) : n(order) { c[0] = value; }
  static Jet variable(double at, int order) {
    Jet j(at, order);
    if (order > 0) j.c[1] = 1;
    return j;
  }
  double derivative(int m) const;  // m! c[m]
};

Jet operator+(const Jet& a, const Jet& b);
Jet operator-(const Jet& a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator-(const Jet& a);
Jet operator+(const Jet& a, double b);
Jet operator+(double a, const Jet& b);
Jet operator-(const Jet& a, double b);
Jet operator-(double a, const Jet& b);
Jet operator*(const Jet& a, double b);
Jet operator*(double a, const Jet& b);
Jet operator/(const Jet& a, double b);
Jet operator/(double a, const Jet& b);

Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet pow(const Jet& a, double t);
Jet sqrt(const Jet& a);

}  // namespace growthlab
