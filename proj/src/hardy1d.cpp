#include "growthlab/hardy1d.hpp"

#include "growthlab/errors.hpp"
#include "growthlab/parallel.hpp"

#include <cmath>
#include <limits>

namespace growthlab {

double RadialProfile::derivative(double r) const {
  if (df) return df(r);
  const double h = 1e-6 * (1 + r);
  if (r < h) return (-3 * f(r) + 4 * f(r + h) - f(r + 2 * h)) / (2 * h);
  return (f(r + h) - f(r - h)) / (2 * h);
}

double HardyPair::ratio() const { return rhs > 0 ? lhs / rhs : std::numeric_limits<double>::quiet_NaN(); }

std::string_view to_string(Verdict v) { return v == Verdict::Finite ? "Finite" : "Divergent"; }

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// (integral over (a, inf) of g)^{1/q}
double norm_on(const std::function<double(double)>& g, double a, double q, const GridOptions& o, double settle) {
  RadialBatch batch = [&](std::span<const double> r, std::span<double> out) {
    parallel_for(r.size(), [&](std::size_t i) { out[i] = g(r[i]); });
  };
  RadialIntegral I = integrate_radial(batch, a, kInf, o, settle);
  return I.divergent ? kInf : std::pow(I.value, 1 / q);
}

double pw(double v, double p) {
  if (v == 0) return 0;
  return p == 1 ? v : std::pow(v, p);
}

void check_rhs(double rhs) {
  if (!std::isfinite(rhs)) throw Error(Errc::DivergentRHS, "the gradient side is infinite, the inequality is vacuous");
}

void check_pq(double p, double q) {
  if (!(p >= 1)) throw Error(Errc::InvalidArgument, "p must be at least 1");
  if (!(q >= p)) throw Error(Errc::InvalidArgument, "q must be at least p");
}

double gradient_side(const RadialProfile& f, double s, double p, double from, int N, const GridOptions& o) {
  return norm_on(
      [&](double r) { return std::pow(1 + r, -s * p - N) * std::pow(r, N - 1) * pw(std::abs(f.derivative(r)), p); },
      from, p, o, f.extent);
}

// Sampled sup of (1+r)^{-(s+1)} |f(r) - base| over r >= R, 512 points per decade.
double sampled_sup(const RadialProfile& f, double s, double R, double base) {
  const double start = R > 0 ? R : 1e-8;
  const double stop = std::max(1e10, 1e10 * R);
  const int per_decade = 512;
  const long n = static_cast<long>(std::ceil(std::log10(stop / start) * per_decade));
  std::vector<double> v(static_cast<std::size_t>(n) + 1);
  parallel_for(v.size(), [&](std::size_t i) {
    double r = start * std::pow(10.0, static_cast<double>(i) / per_decade);
    v[i] = std::pow(1 + r, -(s + 1)) * std::abs(f(r) - base);
  });
  double m = 0;
  for (double x : v) {
    if (std::isnan(x)) throw Error(Errc::InvalidArgument, "profile is NaN");
    m = std::max(m, x);
  }
  return m;
}

void check_decay(const RadialProfile& f) {
  if (!f.decay) throw Error(Errc::NoDecay, "profile is not flagged as vanishing at infinity");
  double prev = kInf;
  for (int m = 10; m <= 40; m += 10) {
    double v = std::abs(f(std::ldexp(1.0, m)));
    if (v > prev && v > 1e-12) throw Error(Errc::NoDecay, "profile does not decay on geometric radii");
    prev = v;
  }
  if (prev > 1e-3) throw Error(Errc::NoDecay, "profile does not decay on geometric radii");
}

}  // namespace

HardyPair hardy_pair_power_above(const RadialProfile& f, double s, double p, double q, double rho, int N,
                                 const GridOptions& o) {
  if (!(s > -1)) throw Error(Errc::InvalidArgument, "this variant requires s > -1");
  if (!(rho > 0)) throw Error(Errc::InvalidArgument, "rho must be positive");
  check_pq(p, q);
  if (std::isinf(q)) throw Error(Errc::InvalidArgument, "use the sup variant for q = inf");
  HardyPair out;
  out.rhs = gradient_side(f, s, p, rho, N, o);
  check_rhs(out.rhs);
  const double base = f(rho);
  out.lhs = norm_on(
      [&](double r) { return std::pow(1 + r, -(s + 1) * q - N) * std::pow(r, N - 1) * pw(std::abs(f(r) - base), q); },
      rho, q, o, f.extent);
  return out;
}

HardyPair hardy_sup_power_above(const RadialProfile& f, double s, double p, double R, int N, const GridOptions& o) {
  if (!(s > -1)) throw Error(Errc::InvalidArgument, "this variant requires s > -1");
  if (!(R > 0)) throw Error(Errc::InvalidArgument, "R must be positive");
  check_pq(p, p);
  HardyPair out;
  out.rhs = gradient_side(f, s, p, R, N, o);
  check_rhs(out.rhs);
  out.lhs = sampled_sup(f, s, R, f(R));
  return out;
}

HardyPair hardy_pair_power_below(const RadialProfile& f, double s, double p, double q, int N, const GridOptions& o) {
  if (!(s < -1)) throw Error(Errc::InvalidArgument, "this variant requires s < -1");
  check_pq(p, q);
  if (std::isinf(q)) throw Error(Errc::InvalidArgument, "use the sup variant for q = inf");
  check_decay(f);
  HardyPair out;
  out.rhs = gradient_side(f, s, p, 0, N, o);
  check_rhs(out.rhs);
  out.lhs = norm_on(
      [&](double r) { return std::pow(1 + r, -(s + 1) * q - N) * std::pow(r, N - 1) * pw(std::abs(f(r)), q); }, 0, q,
      o, f.extent);
  return out;
}

HardyPair hardy_sup_power_below(const RadialProfile& f, double s, double p, double R, int N, const GridOptions& o) {
  if (!(s < -1)) throw Error(Errc::InvalidArgument, "this variant requires s < -1");
  if (!(p > N)) throw Error(Errc::InadmissiblePQ, "the sup variant requires p > N");
  if (!(R >= 0)) throw Error(Errc::InvalidArgument, "R must be nonnegative");
  check_decay(f);
  HardyPair out;
  out.rhs = gradient_side(f, s, p, R, N, o);
  check_rhs(out.rhs);
  out.lhs = sampled_sup(f, s, R, 0);
  return out;
}

// ---- A(xi) B(xi) ----

namespace {

// log of the integral of exp(lg) over [a, b], Gauss-Legendre in log r. Working with logs keeps
// integrands such as (1+r)^50 representable.
double log_integral(const std::function<double(double)>& lg, double a, double b) {
  const GaussRule& gl = gauss_legendre(16);
  double la = std::log(a), lb = std::log(b), mid = 0.5 * (la + lb), half = 0.5 * (lb - la);
  std::vector<double> terms(gl.nodes.size());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    double t = mid + half * gl.nodes[i];
    terms[i] = lg(std::exp(t)) + t;
    top = std::max(top, terms[i]);
  }
  double s = 0;
  for (std::size_t i = 0; i < terms.size(); ++i) s += gl.weights[i] * std::exp(terms[i] - top);
  return top + std::log(half * s);
}

double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (std::isinf(b) && b < 0) return a;
  return a + std::log1p(std::exp(b - a));
}

}  // namespace

CriterionResult ok_criterion(double s, const ExtendedExponent& pe, const ExtendedExponent& qe, int N,
                             int points_per_decade) {
  if (!(s < -1)) throw Error(Errc::InvalidArgument, "the criterion concerns s < -1");
  if (pe.is_infinite()) throw Error(Errc::InvalidArgument, "p must be finite");
  if (qe < pe) throw Error(Errc::InvalidArgument, "q must be at least p");
  if (points_per_decade < 1) throw Error(Errc::InvalidArgument, "points per decade must be positive");
  const double p = pe.to_double();
  const bool q_inf = qe.is_infinite();
  const double q = qe.to_double();

  const double lo = 1e-6, hi = 1e6;
  const int decades = 12;
  const std::size_t n = static_cast<std::size_t>(decades * points_per_decade) + 1;
  std::vector<double> xi(n);
  for (std::size_t i = 0; i < n; ++i) xi[i] = lo * std::pow(10.0, static_cast<double>(i) / points_per_decade);

  // log A: cumulative from 0.
  std::vector<double> logA(n);
  if (q_inf) {
    for (std::size_t i = 0; i < n; ++i) logA[i] = -(s + 1) * std::log1p(xi[i]);
  } else {
    auto lga = [&](double r) { return (-(s + 1) * q - N) * std::log1p(r) + (N - 1) * std::log(r); };
    auto ga = [&](double r) { return std::exp(lga(r)); };
    double cum = std::log(integrate_interval(ga, 0, xi[0], 4, 16));
    logA[0] = cum / q;
    for (std::size_t i = 1; i < n; ++i) {
      cum = log_add(cum, log_integral(lga, xi[i - 1], xi[i]));
      logA[i] = cum / q;
    }
  }

  // log B: cumulative from infinity.
  std::vector<double> logB(n);
  if (p == 1) {
    // B is the sup over r > xi of h(r) = (1+r)^{s+N} r^{1-N}; h is decreasing on (0, inf)
    // because d log h / dr = ((s+1) r - (N-1)) / (r (1+r)) < 0 for s < -1.
    for (std::size_t i = 0; i < n; ++i) logB[i] = (s + N) * std::log1p(xi[i]) + (1 - N) * std::log(xi[i]);
  } else {
    const double pp = p / (p - 1);
    auto lgb = [&](double r) { return (s + N / p) * pp * std::log1p(r) + (1 - N) / p * pp * std::log(r); };
    // Tail beyond the grid: integrate on log panels to 1e14, then the power-law remainder.
    double a = hi;
    double cum = -std::numeric_limits<double>::infinity();
    for (int d = 0; d < 8 * 4; ++d) {
      double b = a * std::pow(10.0, 0.25);
      cum = log_add(cum, log_integral(lgb, a, b));
      a = b;
    }
    const double gamma = pp * (s + 1 / p);  // integrand ~ r^gamma at infinity
    cum = log_add(cum, lgb(a) + std::log(a / (-gamma - 1)));
    logB[n - 1] = cum / pp;
    for (std::size_t i = n - 1; i-- > 0;) {
      cum = log_add(cum, log_integral(lgb, xi[i], xi[i + 1]));
      logB[i] = cum / pp;
    }
  }

  CriterionResult res;
  for (std::size_t i = 0; i < n; ++i) {
    double prod = std::exp(logA[i] + logB[i]);
    res.profile.push_back({xi[i], std::exp(logA[i]), std::exp(logB[i]), prod});
    res.sup_estimate = std::max(res.sup_estimate, prod);
  }
  const std::size_t d = static_cast<std::size_t>(points_per_decade);
  res.growth_small = std::exp(logA[0] + logB[0] - logA[d] - logB[d]);
  res.growth_large = std::exp(logA[n - 1] + logB[n - 1] - logA[n - 1 - d] - logB[n - 1 - d]);
  // Logarithmic blow-up at the origin, B ~ log(1/xi)^{1/p'} when p = N and q = inf, grows by less than
  // 10% per decade. Its index d log(AB) / d log log(1/xi) stays near 1/p' instead of vanishing.
  // Toward infinity AB always tends to a power xi^0, so only the small end needs this.
  const double log_index = (logA[0] + logB[0] - logA[d] - logB[d]) / std::log(std::log(xi[0]) / std::log(xi[d]));
  const bool log_growth = log_index > 0.2;
  res.verdict = (res.growth_small > 1.1 || res.growth_large > 1.1 || log_growth) ? Verdict::Divergent : Verdict::Finite;
  return res;
}

HardyPair hardy_exponential(const RadialProfile& f, double s, double p, int N, ExpVariant variant, double rho,
                            const GridOptions& o) {
  if (s == 0) throw Error(Errc::SZero, "s = 0 is not an exponential-scale case");
  if (!(p >= 1) || std::isinf(p)) throw Error(Errc::InvalidArgument, "p must be finite and at least 1");
  // e^{-spr} |g|^p r^{N-1}, combined in logs so e^{|s|pr} never overflows on its own.
  auto wg = [&](double r, double g) {
    if (g == 0) return 0.0;
    return std::exp(-s * p * r + p * std::log(std::abs(g))) * std::pow(r, N - 1);
  };
  HardyPair out;
  if (variant == ExpVariant::Above) {
    if (!(s > 0)) throw Error(Errc::InvalidArgument, "the variant on (rho, inf) requires s > 0");
    if (!(rho > 0)) throw Error(Errc::InvalidArgument, "rho must be positive");
    out.rhs = norm_on([&](double r) { return wg(r, f.derivative(r)); }, rho, p, o, f.extent);
    check_rhs(out.rhs);
    const double base = f(rho);
    out.lhs = norm_on([&](double r) { return wg(r, f(r) - base); }, rho, p, o, f.extent);
  } else {
    if (!(s < 0)) throw Error(Errc::InvalidArgument, "the variant on (0, inf) requires s < 0");
    check_decay(f);
    out.rhs = norm_on([&](double r) { return wg(r, f.derivative(r)); }, 0, p, o, f.extent);
    check_rhs(out.rhs);
    out.lhs = norm_on([&](double r) { return wg(r, f(r)); }, 0, p, o, f.extent);
  }
  return out;
}

}  // namespace growthlab
