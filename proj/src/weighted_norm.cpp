#include "growthlab/weighted_norm.hpp"

#include "growthlab/errors.hpp"
#include "growthlab/parallel.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace growthlab {

std::string_view to_string(Scale s) {
  switch (s) {
    case Scale::ShiftedPower: return "shifted";
    case Scale::PurePower: return "pure";
    case Scale::Exponential: return "exp";
  }
  return "unknown";
}

Scale parse_scale(std::string_view text) {
  if (text == "shifted" || text == "power") return Scale::ShiftedPower;
  if (text == "pure") return Scale::PurePower;
  if (text == "exp" || text == "exponential") return Scale::Exponential;
  throw Error(Errc::InvalidArgument, "unknown scale '" + std::string(text) + "'");
}

double Weight::operator()(double r) const {
  switch (kind) {
    case Scale::ShiftedPower: return std::pow(1 + r, t);
    case Scale::PurePower: return t == 0 ? 1.0 : std::pow(r, t);
    case Scale::Exponential: return std::exp(-t * r);
  }
  return 1;
}

Weight norm_weight(Scale scale, double s, double q, int dim) {
  const double nq = std::isinf(q) ? 0.0 : dim / q;
  switch (scale) {
    case Scale::ShiftedPower: return Weight::shifted(-s - nq);
    case Scale::PurePower: return Weight::pure(-s - nq);
    case Scale::Exponential: return Weight::exponential(s);
  }
  return {};
}

Region Region::ball(double R) {
  if (!(R > 0)) throw Error(Errc::InvalidArgument, "ball radius must be positive");
  return {Kind::Ball, R};
}
Region Region::exterior(double R) {
  if (!(R > 0)) throw Error(Errc::InvalidArgument, "exterior radius must be positive");
  return {Kind::Exterior, R};
}
Region Region::annulus(double tau) {
  if (!(tau > 0)) throw Error(Errc::InvalidArgument, "annulus radius must be positive");
  return {Kind::Annulus, tau};
}

double Region::inner() const {
  switch (kind) {
    case Kind::Full:
    case Kind::Ball: return 0;
    case Kind::Exterior:
    case Kind::Annulus: return radius;
  }
  return 0;
}

double Region::outer() const {
  switch (kind) {
    case Kind::Full:
    case Kind::Exterior: return std::numeric_limits<double>::infinity();
    case Kind::Ball: return radius;
    case Kind::Annulus: return 2 * radius;
  }
  return 0;
}

bool NormResult::finite() const { return std::isfinite(value); }

namespace {

inline double power(double t, double q) {
  if (t == 0) return 0;
  if (q == 1) return t;
  if (q == 2) return t * t;
  return std::pow(t, q);
}

}  // namespace

NormResult lp_norm(const Integrand& f, const Weight& w, double q, const Region& region, const PolarGrid& grid) {
  if (f.dim != grid.dim()) throw Error(Errc::InvalidArgument, "integrand and grid dimensions differ");
  if (!(q >= 1)) throw Error(Errc::InvalidArgument, "norm exponent below 1");
  const SphereRule& sphere = grid.sphere();
  const int dim = f.dim;
  const std::size_t nd = static_cast<std::size_t>(dim);
  const bool sup = std::isinf(q);

  auto node_value = [&](double r) {
    const double wr = w(r);
    std::array<double, kMaxDim> x{};
    if (f.radial) {
      auto pole = sphere.pole();
      for (std::size_t i = 0; i < nd; ++i) x[i] = r * pole[i];
      double m = f.magnitude(std::span<const double>(x.data(), nd));
      if (sup) return m == 0 ? 0.0 : wr * m;
      return power(m == 0 ? 0.0 : wr * m, q) * sphere.measure;
    }
    double acc = 0;
    for (std::size_t j = 0; j < sphere.size(); ++j) {
      auto sigma = sphere.node(j);
      for (std::size_t i = 0; i < nd; ++i) x[i] = r * sigma[i];
      double m = f.magnitude(std::span<const double>(x.data(), nd));
      if (m == 0) continue;
      if (sup) acc = std::max(acc, wr * m);
      else acc += sphere.weights[j] * power(wr * m, q);
    }
    return acc;
  };

  NormResult out;
  if (sup) {
    RadialBatch g = [&](std::span<const double> r, std::span<double> v) {
      parallel_for(r.size(), [&](std::size_t i) { v[i] = node_value(r[i]); });
    };
    RadialMax m = scan_radial_max(g, region.inner(), region.outer(), grid.options(), f.extent);
    out.value = m.divergent ? std::numeric_limits<double>::infinity() : m.value;
    out.r_end = m.at;
    return out;
  }
  RadialBatch g = [&](std::span<const double> r, std::span<double> v) {
    parallel_for(r.size(), [&](std::size_t i) { v[i] = node_value(r[i]) * std::pow(r[i], dim - 1); });
  };
  RadialIntegral I = integrate_radial(g, region.inner(), region.outer(), grid.options(), f.extent);
  if (I.divergent && I.at_origin && w.kind == Scale::PurePower)
    throw Error(Errc::OriginSingular, "pure-power weight is not integrable at the origin");
  out.value = I.divergent ? std::numeric_limits<double>::infinity() : std::pow(I.value, 1.0 / q);
  out.tail = I.tail + I.inner_tail;
  out.r_end = I.r_end;
  out.noise_floor = I.noise_floor;
  return out;
}

double weighted_norm(const ScalarField& u, double s, const ExtendedExponent& q, Scale scale, const Region& region,
                     const PolarGrid& grid) {
  Integrand f{u.dim(), [&u](std::span<const double> x) { return std::abs(u(x)); }, u.flags().radial, u.extent()};
  return lp_norm(f, norm_weight(scale, s, q.to_double(), u.dim()), q.to_double(), region, grid).value;
}

NormResult tensor_norm_detail(const TensorField& T, double s, double p, Scale scale, const Region& region,
                              const PolarGrid& grid) {
  Integrand f{T.dim(), [&T](std::span<const double> x) { return T.magnitude(x); }, T.radial(), T.extent()};
  return lp_norm(f, norm_weight(scale, s, p, T.dim()), p, region, grid);
}

double tensor_norm(const TensorField& T, double s, const ExtendedExponent& p, Scale scale, const Region& region,
                   const PolarGrid& grid) {
  return tensor_norm_detail(T, s, p.to_double(), scale, region, grid).value;
}

bool membership(const ScalarField& u, double s, const ExtendedExponent& q, Scale scale, const PolarGrid& grid) {
  return std::isfinite(weighted_norm(u, s, q, scale, Region::full(), grid));
}

}  // namespace growthlab
