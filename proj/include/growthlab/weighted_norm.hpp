#pragma once

#include "growthlab/exponents.hpp"
#include "growthlab/field.hpp"
#include "growthlab/quadrature.hpp"

#include <functional>
#include <span>
#include <string_view>

namespace growthlab {

enum class Scale { ShiftedPower, PurePower, Exponential };
std::string_view to_string(Scale s);
Scale parse_scale(std::string_view text);

// Pointwise factor applied inside a norm: (1+r)^t, r^t or e^{-t r}.
struct Weight {
  Scale kind = Scale::ShiftedPower;
  double t = 0;

  static Weight shifted(double t) { return {Scale::ShiftedPower, t}; }
  static Weight pure(double t) { return {Scale::PurePower, t}; }
  static Weight exponential(double s) { return {Scale::Exponential, s}; }
  double operator()(double r) const;
};

// The factor for L^q_s in the given scale: (1+|x|)^{-s-N/q}, |x|^{-s-N/q} or e^{-s|x|}.
Weight norm_weight(Scale scale, double s, double q, int dim);

struct Region {
  enum class Kind { Full, Ball, Exterior, Annulus };
  Kind kind = Kind::Full;
  double radius = 0;

  static Region full() { return {}; }
  static Region ball(double R);
  static Region exterior(double R);
  static Region annulus(double tau);  // tau < |x| < 2 tau
  double inner() const;
  double outer() const;
};

// |integrand(x)| evaluated pointwise; `radial` allows one direction per radius.
struct Integrand {
  int dim = 1;
  std::function<double(std::span<const double>)> magnitude;
  bool radial = false;
  double extent = 16;
};

struct NormResult {
  double value = 0;  // +inf when divergent
  double tail = 0;   // geometric tail added (q-th power units)
  double r_end = 0;
  bool noise_floor = false;
  bool finite() const;
};

NormResult lp_norm(const Integrand& f, const Weight& w, double q, const Region& region, const PolarGrid& grid);

double weighted_norm(const ScalarField& u, double s, const ExtendedExponent& q, Scale scale, const Region& region,
                     const PolarGrid& grid);
double tensor_norm(const TensorField& T, double s, const ExtendedExponent& p, Scale scale, const Region& region,
                   const PolarGrid& grid);
NormResult tensor_norm_detail(const TensorField& T, double s, double p, Scale scale, const Region& region,
                              const PolarGrid& grid);
// True iff the weighted norm over the whole space is finite.
bool membership(const ScalarField& u, double s, const ExtendedExponent& q, Scale scale, const PolarGrid& grid);

}  // namespace growthlab
