#include "growthlab/jet.hpp"

#include <algorithm>
#include <cmath>

namespace growthlab {

double Jet::derivative(int m) const {
  double f = 1;
  for (int i = 2; i <= m; ++i) f *= i;
  return f * c[static_cast<std::size_t>(m)];
}

namespace {
inline std::size_t u(int i) { return static_cast<std::size_t>(i); }
}  // namespace

Jet operator+(const Jet& a, const Jet& b) {
  Jet r;
  r.n = std::max(a.n, b.n);
  for (int i = 0; i <= r.n; ++i) r.c[u(i)] = a.c[u(i)] + b.c[u(i)];
  return r;
}

Jet operator-(const Jet& a, const Jet& b) {
  Jet r;
  r.n = std::max(a.n, b.n);
  for (int i = 0; i <= r.n; ++i) r.c[u(i)] = a.c[u(i)] - b.c[u(i)];
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet r;
  r.n = std::max(a.n, b.n);
  for (int k = 0; k <= r.n; ++k) {
    double s = 0;
    for (int j = 0; j <= k; ++j) s += a.c[u(j)] * b.c[u(k - j)];
    r.c[u(k)] = s;
  }
  return r;
}

Jet operator/(const Jet& a, const Jet& b) {
  Jet r;
  r.n = std::max(a.n, b.n);
  for (int k = 0; k <= r.n; ++k) {
    double s = a.c[u(k)];
    for (int j = 0; j < k; ++j) s -= r.c[u(j)] * b.c[u(k - j)];
    r.c[u(k)] = s / b.c[0];
  }
  return r;
}

Jet operator-(const Jet& a) {
  Jet r = a;
  for (int i = 0; i <= r.n; ++i) r.c[u(i)] = -r.c[u(i)];
  return r;
}

Jet operator+(const Jet& a, double b) {
  Jet r = a;
  r.c[0] += b;
  return r;
}
Jet operator+(double a, const Jet& b) { return b + a; }
Jet operator-(const Jet& a, double b) { return a + (-b); }
Jet operator-(double a, const Jet& b) { return (-b) + a; }

Jet operator*(const Jet& a, double b) {
  Jet r = a;
  for (int i = 0; i <= r.n; ++i) r.c[u(i)] *= b;
  return r;
}
Jet operator*(double a, const Jet& b) { return b * a; }
Jet operator/(const Jet& a, double b) { return a * (1.0 / b); }
Jet operator/(double a, const Jet& b) { return Jet(a, b.n) / b; }

Jet exp(const Jet& a) {
  Jet r;
  r.n = a.n;
  r.c[0] = std::exp(a.c[0]);
  for (int k = 1; k <= r.n; ++k) {
    double s = 0;
    for (int j = 1; j <= k; ++j) s += j * a.c[u(j)] * r.c[u(k - j)];
    r.c[u(k)] = s / k;
  }
  return r;
}

Jet log(const Jet& a) {
  Jet r;
  r.n = a.n;
  r.c[0] = std::log(a.c[0]);
  for (int k = 1; k <= r.n; ++k) {
    double s = 0;
    for (int j = 1; j < k; ++j) s += j * r.c[u(j)] * a.c[u(k - j)];
    r.c[u(k)] = (a.c[u(k)] - s / k) / a.c[0];
  }
  return r;
}

Jet pow(const Jet& a, double t) {
  Jet r;
  r.n = a.n;
  r.c[0] = std::pow(a.c[0], t);
  for (int k = 1; k <= r.n; ++k) {
    double s = 0;
    for (int j = 1; j <= k; ++j) s += (t * j - (k - j)) * a.c[u(j)] * r.c[u(k - j)];
    r.c[u(k)] = s / (k * a.c[0]);
  }
  return r;
}

Jet sqrt(const Jet& a) { return pow(a, 0.5); }

}  // namespace growthlab
