#pragma once

#include "growthlab/exponents.hpp"
#include "growthlab/quadrature.hpp"

#include <functional>
#include <string_view>
#include <vector>

namespace growthlab {

struct RadialProfile {
  std::function<double(double)> f;
  std::function<double(double)> df;  // optional; central differences otherwise
  bool decay = false;                // f(r) -> 0 as r -> infinity
  double extent = 16;                // no new features beyond this radius

  double operator()(double r) const { return f(r); }
  double derivative(double r) const;
};

struct HardyPair {
  double lhs = 0;
  double rhs = 0;
  double ratio() const;  // NaN when rhs = 0
};

// Integrals over (rho, inf) with f - f(rho); s > -1, p <= q < inf.
HardyPair hardy_pair_power_above(const RadialProfile& f, double s, double p, double q, double rho, int N,
                                 const GridOptions& grid = {});
// sup over r >= R of (1+r)^{-(s+1)} |f(r) - f(R)| against the gradient integral over (R, inf).
HardyPair hardy_sup_power_above(const RadialProfile& f, double s, double p, double R, int N,
                                const GridOptions& grid = {});
// Integrals over (0, inf) for f vanishing at infinity; s < -1.
HardyPair hardy_pair_power_below(const RadialProfile& f, double s, double p, double q, int N,
                                 const GridOptions& grid = {});
// sup over r >= R of (1+r)^{-(s+1)} |f(r)|; s < -1 and p > N.
HardyPair hardy_sup_power_below(const RadialProfile& f, double s, double p, double R, int N,
                                const GridOptions& grid = {});

enum class Verdict { Finite, Divergent };
std::string_view to_string(Verdict v);

struct CriterionPoint {
  double xi, A, B, product;
};

struct CriterionResult {
  double sup_estimate = 0;
  Verdict verdict = Verdict::Finite;
  double growth_small = 1;  // product ratio over the last decade toward xi -> 0
  double growth_large = 1;  // same toward xi -> infinity
  std::vector<CriterionPoint> profile;
};

// sup over xi of A(xi) B(xi) on a log grid over [1e-6, 1e6]; Divergent when the product
// grows by more than 10% across the last decade at either end.
CriterionResult ok_criterion(double s, const ExtendedExponent& p, const ExtendedExponent& q, int N,
                             int points_per_decade = 4);

enum class ExpVariant { Above, Below };
// Weight e^{-spr} r^{N-1}. Above: s > 0, integrals over (rho, inf) with f - f(rho).
// Below: s < 0, integrals over (0, inf), f vanishing at infinity.
HardyPair hardy_exponential(const RadialProfile& f, double s, double p, int N, ExpVariant variant, double rho = 1,
                            const GridOptions& grid = {});

}  // namespace growthlab
