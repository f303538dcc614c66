#pragma once

#include "growthlab/exponents.hpp"
#include "growthlab/field.hpp"
#include "growthlab/polynomial.hpp"
#include "growthlab/quadrature.hpp"
#include "growthlab/weighted_norm.hpp"

#include <map>
#include <optional>
#include <vector>

namespace growthlab {

// Spherical means of the derivative at r0 * 2^m, m < radii, extrapolated to infinity.
struct LimitOptions {
  double r0 = 8;
  int radii = 6;
};

struct LimitResult {
  double value = 0;
  double residual = 0;  // size of the last extrapolation correction
  std::vector<double> means;
};

// (alpha!)^{-1} times the mean of d^alpha u over B(x0, rho).
double ball_average_coeff(const ScalarField& u, const MultiIndex& alpha, std::span<const double> x0, double rho,
                          const PolarGrid& grid);
// (alpha!)^{-1} lim spherical mean of d^alpha u as r -> infinity.
LimitResult limit_coeff_detail(const ScalarField& u, const MultiIndex& alpha, const PolarGrid& grid,
                               LimitOptions options = {});
double limit_coeff(const ScalarField& u, const MultiIndex& alpha, const PolarGrid& grid, LimitOptions options = {});
// (alpha!)^{-1} d^alpha u(x0).
double taylor_coeff(const ScalarField& u, const MultiIndex& alpha, std::span<const double> x0);

enum class PiStrategy { Auto, BallAverages, Taylor };

struct Ball {
  std::vector<double> center;
  double rho = 1;
};

struct PiOptions {
  PiStrategy strategy = PiStrategy::Auto;
  Ball ball;                               // BallAverages default; Auto always uses B(0, 1)
  std::map<MultiIndex, Ball> ball_for;     // per-coefficient overrides for BallAverages
  std::vector<double> taylor_point;        // Taylor; empty means the origin
  // Number of layers actually built, from degree k-1 down. Lower layers are left zero.
  // Negative builds all k layers.
  int levels = -1;
  Scale scale = Scale::ShiftedPower;
  LimitOptions limit;
};

// The recursive construction of pi_u in P_{k-1}: layers of degree k-1 down to 0, each
// computed from v = u minus the layers already built.
MultiIndexPolynomial construct_pi(const ScalarField& u, int k, double s, const ExtendedExponent& p,
                                  const PolarGrid& grid, const PiOptions& options = {});

// pi = 0 or deg pi < s + k.
bool poly_membership(const MultiIndexPolynomial& pi, double s, int k, const ExtendedExponent& q, double tol = 1e-8);

}  // namespace growthlab
