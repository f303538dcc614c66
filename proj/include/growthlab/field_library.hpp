#pragma once

#include "growthlab/field.hpp"
#include "growthlab/jet.hpp"

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace growthlab {

// A field F(|x - center|^2). F is given as a jet map so that every derivative up to
// kMaxOracleOrder is exact.
using RhoProfile = std::function<Jet(const Jet& rho)>;
ScalarField rho_field(int dim, std::vector<double> center, RhoProfile F, std::string name);

ScalarField gaussian(int dim, double a = 1);
ScalarField bump(int dim, double R = 1);
ScalarField shifted_bump(std::vector<double> center, double R);
ScalarField power_field(int dim, double t);  // (1+|x|)^t
ScalarField aubin_talenti(int dim, double n);  // (1+|x|^2)^{-(n-2)/2}
ScalarField coord_poly(const MultiIndex& alpha);  // x^alpha
// Piecewise cubic in r through (r_i, v_i); zero slope at both ends, r_0 = 0 and the last
// value 0 so the field is C^1 with compact support.
ScalarField radial_spline(int dim, std::vector<double> radii, std::vector<double> values);

// Builds a field from text such as "gaussian(1.5)", "2*bump(1)+constant(5)" or
// "coord_poly(1,0,0)". Unknown names raise Config errors.
ScalarField make_field(std::string_view spec, int dim);
const std::vector<std::string>& field_names();

}  // namespace growthlab
