#include "growthlab/projection.hpp"

#include "growthlab/errors.hpp"
#include "growthlab/parallel.hpp"

#include <cmath>
#include <functional>

namespace growthlab {

namespace {

using PointFn = std::function<double(std::span<const double>)>;

std::size_t usz(int v) { return static_cast<std::size_t>(v); }

double ball_mean(const PointFn& g, int dim, std::span<const double> x0, double rho, const SphereRule& sphere) {
  const GaussRule& gl = gauss_legendre(24);
  std::array<double, kMaxDim> y{};
  double sum = 0, mass = 0;
  for (std::size_t a = 0; a < gl.nodes.size(); ++a) {
    double r = 0.5 * rho * (gl.nodes[a] + 1);
    double wr = 0.5 * rho * gl.weights[a] * std::pow(r, dim - 1);
    for (std::size_t j = 0; j < sphere.size(); ++j) {
      auto sigma = sphere.node(j);
      for (int i = 0; i < dim; ++i) y[usz(i)] = x0[usz(i)] + r * sigma[usz(i)];
      double w = wr * sphere.weights[j];
      sum += w * g(std::span<const double>(y.data(), usz(dim)));
      mass += w;
    }
  }
  return sum / mass;
}

double sphere_mean(const PointFn& g, int dim, double r, const SphereRule& sphere) {
  std::array<double, kMaxDim> y{};
  double sum = 0;
  for (std::size_t j = 0; j < sphere.size(); ++j) {
    auto sigma = sphere.node(j);
    for (int i = 0; i < dim; ++i) y[usz(i)] = r * sigma[usz(i)];
    sum += sphere.weights[j] * g(std::span<const double>(y.data(), usz(dim)));
  }
  return sum / sphere.measure;
}

// One Aitken delta-squared sweep. Near-constant or non-contracting triples are passed
// through unchanged so roundoff is never amplified.
std::vector<double> aitken(const std::vector<double>& a, double scale) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 2 < a.size(); ++i) {
    double d1 = a[i + 1] - a[i], d2 = a[i + 2] - a[i + 1], den = d2 - d1;
    bool flat = std::abs(d2) <= 1e-13 * scale || std::abs(den) <= 1e-13 * scale;
    bool stalled = std::abs(den) < 1e-3 * std::abs(d2);
    out.push_back(flat || stalled ? a[i + 2] : a[i + 2] - d2 * d2 / den);
  }
  return out;
}

LimitResult extrapolate(const PointFn& g, int dim, const SphereRule& sphere, const LimitOptions& o,
                        const std::string& what) {
  if (o.radii < 5) throw Error(Errc::InvalidArgument, "limit extrapolation needs at least five radii");
  LimitResult res;
  for (int m = 0; m < o.radii; ++m) res.means.push_back(sphere_mean(g, dim, o.r0 * std::ldexp(1.0, m), sphere));
  const auto& a = res.means;
  double scale = 1e-300;
  for (double v : a) scale = std::max(scale, std::abs(v));
  const double noise = 1e-11 * scale + 1e-14;
  const std::size_t n = a.size();
  double d3 = std::abs(a[n - 3] - a[n - 4]), d4 = std::abs(a[n - 2] - a[n - 3]), d5 = std::abs(a[n - 1] - a[n - 2]);
  bool settled = d5 <= noise;
  if (!settled && !(d5 < d4 && d4 < d3))
    throw Error(Errc::NoConvergence, "spherical means of " + what + " do not settle as r grows");
  auto level1 = aitken(a, scale);
  auto level2 = aitken(level1, scale);
  res.value = level2.back();
  res.residual = std::abs(level2.back() - level2[level2.size() - 2]);
  return res;
}

}  // namespace

double ball_average_coeff(const ScalarField& u, const MultiIndex& alpha, std::span<const double> x0, double rho,
                          const PolarGrid& grid) {
  if (!(rho > 0)) throw Error(Errc::InvalidArgument, "ball radius must be positive");
  std::vector<double> c(x0.begin(), x0.end());
  if (c.empty()) c.assign(usz(u.dim()), 0.0);
  PointFn g = [&](std::span<const double> x) { return u.partial(alpha, x); };
  return ball_mean(g, u.dim(), c, rho, grid.sphere()) / alpha.factorial();
}

LimitResult limit_coeff_detail(const ScalarField& u, const MultiIndex& alpha, const PolarGrid& grid,
                               LimitOptions options) {
  PointFn g = [&](std::span<const double> x) { return u.partial(alpha, x); };
  LimitResult r = extrapolate(g, u.dim(), grid.sphere(), options, "d^" + alpha.str() + " " + u.name());
  r.value /= alpha.factorial();
  r.residual /= alpha.factorial();
  return r;
}

double limit_coeff(const ScalarField& u, const MultiIndex& alpha, const PolarGrid& grid, LimitOptions options) {
  return limit_coeff_detail(u, alpha, grid, options).value;
}

double taylor_coeff(const ScalarField& u, const MultiIndex& alpha, std::span<const double> x0) {
  std::vector<double> c(x0.begin(), x0.end());
  if (c.empty()) c.assign(usz(u.dim()), 0.0);
  return u.partial(alpha, c) / alpha.factorial();
}

MultiIndexPolynomial construct_pi(const ScalarField& u, int k, double s, const ExtendedExponent& p,
                                  const PolarGrid& grid, const PiOptions& options) {
  const int dim = u.dim();
  if (grid.dim() != dim) throw Error(Errc::InvalidArgument, "grid and field dimensions differ");
  const RegimeInfo reg = regime(s, k);
  // Degrees >= unique_from are determined by the behavior at infinity.
  int unique_from = 0;
  if (options.scale == Scale::Exponential) {
    if (s == 0) throw Error(Errc::SZero, "s = 0 has no exponential-scale construction");
    unique_from = s < 0 ? 0 : k;
  } else {
    if (reg.component == RegimeComponent::Excluded)
      throw Error(Errc::ExcludedS, "s = " + std::to_string(static_cast<int>(s)) + " is excluded for k = " +
                                       std::to_string(k));
    unique_from = reg.k_s;
  }
  const bool needs_limits = options.scale == Scale::Exponential ? s < 0 : s < -1;
  if (dim == 1 && u.domain() == Domain::FullSpace && needs_limits)
    throw Error(Errc::DimensionOne, "limits at infinity on the whole line are not available for N = 1");
  if (options.strategy == PiStrategy::Taylor && (p.is_infinite() ? false : !(p.to_double() > dim)))
    throw Error(Errc::InadmissiblePQ, "Taylor coefficients require p > N");

  const int levels = options.levels < 0 ? k : std::min(options.levels, k);
  MultiIndexPolynomial pi(dim, k);
  const MultiIndexTable& tab = u.table();
  const SphereRule& sphere = grid.sphere();
  std::vector<double> origin(usz(dim), 0.0);

  for (int m = k - 1; m >= k - levels; --m) {
    const MultiIndexPolynomial built = pi;
    const std::size_t lo = tab.offset(m), hi = tab.size_up_to(m);
    std::vector<double> value(hi - lo);
    std::vector<CoeffSource> source(hi - lo);
    parallel_for(hi - lo, [&](std::size_t j) {
      const MultiIndex& alpha = tab.at(lo + j);
      PointFn dv = [&](std::span<const double> x) { return u.partial(alpha, x) - built.derivative(alpha, x); };
      CoeffSource src;
      double c = 0;
      if (m >= unique_from) {
        LimitResult lr = extrapolate(dv, dim, sphere, options.limit, "d^" + alpha.str() + " " + u.name());
        c = lr.value;
        src.kind = Provenance::LimitAtInfinity;
        src.residual = lr.residual / alpha.factorial();
      } else if (options.strategy == PiStrategy::Taylor) {
        src.kind = Provenance::TaylorPoint;
        src.x0 = options.taylor_point.empty() ? origin : options.taylor_point;
        c = dv(src.x0);
      } else {
        Ball b{origin, 1};
        if (options.strategy == PiStrategy::BallAverages) {
          auto it = options.ball_for.find(alpha);
          b = it != options.ball_for.end() ? it->second : options.ball;
          if (b.center.empty()) b.center = origin;
        }
        src.kind = Provenance::BallAverage;
        src.x0 = b.center;
        src.rho = b.rho;
        c = ball_mean(dv, dim, b.center, b.rho, sphere);
      }
      value[j] = c / alpha.factorial();
      source[j] = std::move(src);
    });
    for (std::size_t j = 0; j < value.size(); ++j) pi.set(lo + j, value[j], std::move(source[j]));
  }
  return pi;
}

bool poly_membership(const MultiIndexPolynomial& pi, double s, int k, const ExtendedExponent& q, double tol) {
  (void)q;  // the degree test does not depend on q
  if (regime(s, k).component == RegimeComponent::Excluded)
    throw Error(Errc::ExcludedS, "s is excluded for this k");
  int d = pi.degree(tol);
  return d < 0 || d < s + k;
}

}  // namespace growthlab
