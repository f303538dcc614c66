#include "growthlab/verifier.hpp"

#include "growthlab/errors.hpp"
#include "growthlab/parallel.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

namespace growthlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t usz(int v) { return static_cast<std::size_t>(v); }

ScalarField remainder(const ScalarField& u, const MultiIndexPolynomial& pi) {
  ScalarField p = pi.as_field();
  p.on(u.domain());
  ScalarField w = u - p;
  w.rename(u.name() + " - pi");
  return w;
}

// grad^m (u - pi). Entries below the cancellation floor of the subtraction are set to zero:
// a roundoff-sized constant left over from a limit coefficient is not in L^q_{s+j} for s < -1,
// and would otherwise be reported as a divergent left-hand side.
TensorField remainder_gradient(const ScalarField& u, const MultiIndexPolynomial& pi, int m) {
  constexpr double kFloor = 1e-13;
  ScalarField w = remainder(u, pi);
  auto Tu = std::make_shared<TensorField>(gradient_k(u, m));
  auto poly = std::make_shared<MultiIndexPolynomial>(pi);
  TensorField::Fill fill = [Tu, poly](std::span<const double> x, std::span<double> out) {
    Tu->values(x, out);
    const auto& alphas = Tu->indices();
    for (std::size_t i = 0; i < alphas.size(); ++i) {
      double q = poly->derivative(alphas[i], x), v = out[i] - q;
      out[i] = std::abs(v) <= kFloor * (std::abs(out[i]) + std::abs(q)) ? 0.0 : v;
    }
  };
  return TensorField(u.dim(), m, std::move(fill), w.flags().radial, w.extent());
}

double lhs_level(const InequalityCase& c) { return c.scale == Scale::Exponential ? c.s : c.s + c.j; }

double max_residual(const MultiIndexPolynomial& pi) {
  double r = 0;
  for (std::size_t i = 0; i < pi.size(); ++i) r = std::max(r, pi.source(i).residual);
  return r;
}

MultiIndexPolynomial build_pi(const ScalarField& u, const InequalityCase& c, const PolarGrid& grid) {
  PiOptions po = c.pi;
  po.scale = c.scale;
  return construct_pi(u, c.k, c.s, c.p, grid, po);
}

void check_field(const ScalarField& u, const InequalityCase& c) {
  if (u.dim() != c.N) throw Error(Errc::InvalidArgument, "field dimension differs from the case");
  if (u.domain() != c.domain) throw Error(Errc::InvalidArgument, "field domain differs from the case");
}

}  // namespace

void InequalityCase::validate() const {
  if (N < 1 || N > kMaxDim) throw Error(Errc::InvalidArgument, "N must be in [1, 8]");
  if (k < 1 || k > kMaxOracleOrder) throw Error(Errc::OrderTooHigh, "k must be in [1, 6]");
  if (j < 1 || j > k) throw Error(Errc::InvalidArgument, "j must satisfy 1 <= j <= k");
  if (p.is_infinite()) throw Error(Errc::InvalidArgument, "p must be finite");
  if (domain != Domain::FullSpace && N != 1) throw Error(Errc::InvalidArgument, "half-line domains require N = 1");
  if (scale == Scale::Exponential) {
    if (s == 0) throw Error(Errc::SZero, "s = 0 in the exponential scale; use the power scale instead");
  } else if (regime(s, k).component == RegimeComponent::Excluded) {
    std::ostringstream os;
    os << "s = " << s << " is excluded for k = " << k << " (s must avoid -k..-1)";
    throw Error(Errc::ExcludedS, os.str());
  }
  const bool needs_limits = scale == Scale::Exponential ? s < 0 : s < -1;
  if (N == 1 && domain == Domain::FullSpace && needs_limits)
    throw Error(Errc::DimensionOne, "N = 1 on the whole line is not covered for this s; use a half-line");
  AdmissibleInterval I = admissible_interval(j, p, N);
  if (!I.contains(q)) throw Error(Errc::InadmissiblePQ, "q = " + q.str() + " is outside " + I.str());
}

std::string InequalityCase::str() const {
  std::ostringstream os;
  os << "N=" << N << " k=" << k << " j=" << j << " s=" << s << " p=" << p.str() << " q=" << q.str()
     << " scale=" << to_string(scale);
  return os.str();
}

Report verify_case(const ScalarField& u, const InequalityCase& c, const GridOptions& options) {
  c.validate();
  check_field(u, c);
  PolarGrid grid(c.N, c.domain, options);
  const Region full = Region::full();
  Report rep;
  rep.c = c;
  rep.field = u.name();

  NormResult rn = tensor_norm_detail(gradient_k(u, c.k), c.s, c.p.to_double(), c.scale, full, grid);
  if (!rn.finite()) throw Error(Errc::DivergentRHS, "grad^" + std::to_string(c.k) + " " + u.name() +
                                                        " is not in the weighted L^p space (" + c.str() + ")");
  if (c.scale == Scale::PurePower && c.s < -c.N / c.p.to_double()) {
    TensorField T = gradient_k(u, c.k);
    Integrand f{c.N, [&T](std::span<const double> x) { return T.magnitude(x); }, T.radial(), T.extent()};
    if (!lp_norm(f, Weight::shifted(0), c.p.to_double(), Region::ball(1), grid).finite())
      throw Error(Errc::DivergentRHS, "grad^k u is not locally p-integrable near the origin");
  }
  rep.rhs = rn.value;
  rep.diagnostics.rhs_tail = rn.tail;
  rep.diagnostics.rhs_r_end = rn.r_end;

  MultiIndexPolynomial pi = build_pi(u, c, grid);
  rep.diagnostics.fit_residual = max_residual(pi);
  NormResult ln = tensor_norm_detail(remainder_gradient(u, pi, c.k - c.j), lhs_level(c), c.q.to_double(), c.scale, full, grid);
  rep.pi = std::move(pi);
  rep.lhs = ln.value;
  rep.diagnostics.lhs_tail = ln.tail;
  rep.diagnostics.lhs_r_end = ln.r_end;
  rep.diagnostics.noise_floor = ln.noise_floor || rn.noise_floor;

  if (rep.rhs == 0) {
    rep.vacuous = true;
    rep.ratio = kNaN;
    rep.verdict = "vacuous";
  } else {
    rep.ratio = rep.lhs / rep.rhs;
    rep.verdict = std::isfinite(rep.ratio) ? "ok" : "divergent_lhs";
  }
  return rep;
}

ConstantEstimate estimate_constant(const std::vector<ScalarField>& family, const InequalityCase& c,
                                   const GridOptions& grid) {
  ConstantEstimate est;
  std::vector<std::optional<Report>> reports(family.size());
  std::vector<std::string> errors(family.size());
  parallel_for(family.size(), [&](std::size_t i) {
    try {
      reports[i] = verify_case(family[i], c, grid);
    } catch (const Error& e) {
      errors[i] = family[i].name() + ": " + e.what();
    }
  });
  bool any = false;
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (!reports[i]) {
      est.skipped.push_back(errors[i]);
      continue;
    }
    if (reports[i]->vacuous) {
      est.skipped.push_back(family[i].name() + ": vacuous");
      continue;
    }
    any = true;
    est.value = std::max(est.value, reports[i]->ratio);
    est.reports.push_back(std::move(*reports[i]));
  }
  if (!any) throw Error(Errc::EmptyEffective, "no family member gives a nonvacuous ratio");
  return est;
}

DecayResult decay_check(const ScalarField& u, const InequalityCase& c, const GridOptions& options) {
  c.validate();
  check_field(u, c);
  const Rational p = c.p.value();
  if (!(p * c.j > Rational(c.N) || (p == Rational(1) && c.N == 1 && c.j == 1)))
    throw Error(Errc::InadmissiblePQ, "decay needs p > N/j or p = N = j = 1");
  PolarGrid grid(c.N, c.domain, options);
  MultiIndexPolynomial pi = build_pi(u, c, grid);
  auto T = std::make_shared<TensorField>(remainder_gradient(u, pi, c.k - c.j));
  const double level = lhs_level(c);
  const bool expo = c.scale == Scale::Exponential;
  ScalarField g(
      c.N,
      [T, level, expo](std::span<const double> x) {
        double r = 0;
        for (double v : x) r += v * v;
        r = std::sqrt(r);
        double weight = expo ? std::exp(-level * r) : std::pow(r, -level);
        double m = T->magnitude(x);
        return m == 0 ? 0.0 : weight * m;
      },
      "decay");
  g.flags().radial = T->radial();
  g.on(c.domain);
  DecayResult res;
  for (int m = 0; m <= 12; ++m) {
    double tau = std::ldexp(1.0, m);
    res.profile.push_back({tau, annulus_max(g, tau)});
  }
  const std::size_t n = res.profile.size();
  const double a = res.profile[n - 3].value, b = res.profile[n - 2].value, d = res.profile[n - 1].value;
  res.decaying = (a > b && b > d) || (b == 0 && d == 0);
  return res;
}

Report ckn_split_verify(const ScalarField& u, double a, const ExtendedExponent& p, const ExtendedExponent& q,
                        const GridOptions& options) {
  const int N = u.dim();
  if (N < 2) throw Error(Errc::DimensionOne, "the mean-zero inequality needs N > 1");
  if (p.is_infinite()) throw Error(Errc::InvalidArgument, "p must be finite");
  AdmissibleInterval I = admissible_interval(1, p, N);
  if (!I.contains(q)) throw Error(Errc::InadmissiblePQ, "q = " + q.str() + " is outside " + I.str());
  PolarGrid grid(N, u.domain(), options);
  const SphereRule& sphere = grid.sphere();

  double mean_max = 0, u_max = 0;
  std::array<double, kMaxDim> x{};
  for (int m = -4; m <= 8; ++m) {
    double r = std::ldexp(1.0, m);
    mean_max = std::max(mean_max, std::abs(spherical_mean(u, r, sphere)));
    for (std::size_t j = 0; j < sphere.size(); ++j) {
      auto sigma = sphere.node(j);
      for (int i = 0; i < N; ++i) x[usz(i)] = r * sigma[usz(i)];
      u_max = std::max(u_max, std::abs(u(std::span<const double>(x.data(), usz(N)))));
    }
  }
  if (mean_max >= 1e-8 * std::max(1.0, u_max))
    throw Error(Errc::NotMeanZero, "spherical means of " + u.name() + " reach " + std::to_string(mean_max));

  const double pd = p.to_double();
  Integrand fu{N, [&u](std::span<const double> y) { return std::abs(u(y)); }, u.flags().radial, u.extent()};
  if (!lp_norm(fu, Weight::pure(a / pd), pd, Region::full(), grid).finite())
    throw Error(Errc::NonIntegrable, "|x|^{a/p} u is not in L^p");

  Report rep;
  rep.field = u.name();
  rep.c.N = N;
  rep.c.k = rep.c.j = 1;
  rep.c.s = -1 - (a + N) / pd;
  rep.c.p = p;
  rep.c.q = q;
  rep.c.scale = Scale::PurePower;
  NormResult rn = tensor_norm_detail(gradient_k(u, 1), rep.c.s, pd, Scale::PurePower, Region::full(), grid);
  if (!rn.finite()) throw Error(Errc::DivergentRHS, "|x|^{1+a/p} grad u is not in L^p");
  NormResult ln = tensor_norm_detail(gradient_k(u, 0), -(a + N) / pd, q.to_double(), Scale::PurePower,
                                     Region::full(), grid);
  rep.rhs = rn.value;
  rep.lhs = ln.value;
  rep.diagnostics.rhs_tail = rn.tail;
  rep.diagnostics.lhs_tail = ln.tail;
  rep.diagnostics.rhs_r_end = rn.r_end;
  rep.diagnostics.lhs_r_end = ln.r_end;
  if (rep.rhs == 0) {
    rep.vacuous = true;
    rep.ratio = kNaN;
    rep.verdict = "vacuous";
  } else {
    rep.ratio = rep.lhs / rep.rhs;
    rep.verdict = std::isfinite(rep.ratio) ? "ok" : "divergent_lhs";
  }
  return rep;
}

SplitResult symmetrization_split(const ScalarField& u, const InequalityCase& c, const GridOptions& options) {
  if (c.k != 1) throw Error(Errc::InvalidArgument, "the symmetrization split is a first-order statement (k = 1)");
  c.validate();
  check_field(u, c);
  PolarGrid grid(c.N, c.domain, options);
  ScalarField us = radial_symmetrize(u, grid.sphere());
  ScalarField mz = u - us;
  mz.rename(u.name() + " - sym");
  SplitResult res;
  const double pd = c.p.to_double();
  res.grad_norm = tensor_norm_detail(gradient_k(u, 1), c.s, pd, c.scale, Region::full(), grid).value;
  res.grad_norm_sym = tensor_norm_detail(gradient_k(us, 1), c.s, pd, c.scale, Region::full(), grid).value;
  res.contraction_ok = res.grad_norm_sym <= res.grad_norm * (1 + 1e-6);
  auto vacuous = [&c](const std::string& name) {
    Report zero;
    zero.c = c;
    zero.field = name;
    zero.vacuous = true;
    zero.ratio = kNaN;
    zero.verdict = "vacuous";
    return zero;
  };
  // A symmetrization that only carries quadrature roundoff is the zero field.
  const bool no_radial = res.grad_norm_sym <= 1e-12 * res.grad_norm;
  res.radial = no_radial ? vacuous(us.name()) : verify_case(us, c, options);
  res.meanzero = u.flags().radial ? vacuous(mz.name()) : verify_case(no_radial ? u : mz, c, options);
  return res;
}

std::vector<Report> scaling_experiment(const ScalarField& u, const InequalityCase& c,
                                       const std::vector<double>& lambdas, const GridOptions& grid) {
  if (c.scale != Scale::ShiftedPower) throw Error(Errc::InvalidArgument, "scaling runs in the shifted power scale");
  std::vector<Report> out;
  for (double lambda : lambdas) {
    Report r = verify_case(lambda == 1 ? u : dilate(u, lambda), c, grid);
    out.push_back(std::move(r));
  }
  return out;
}

EmbeddingReport embedding_report(const ScalarField& u, int k, double s, const ExtendedExponent& p,
                                 const ExtendedExponent& q, const GridOptions& options) {
  if (regime(s, k).component == RegimeComponent::Excluded)
    throw Error(Errc::ExcludedS, "s is excluded for this k");
  if (p.is_infinite()) throw Error(Errc::InvalidArgument, "p must be finite");
  PolarGrid grid(u.dim(), u.domain(), options);
  const Region full = Region::full();
  EmbeddingReport rep;
  const double pd = p.to_double();
  rep.seminorm = tensor_norm_detail(gradient_k(u, k), s, pd, Scale::ShiftedPower, full, grid).value;
  rep.norm_u_p = weighted_norm(u, s + k, p, Scale::ShiftedPower, full, grid);
  rep.norm_u_q = q == p ? rep.norm_u_p : weighted_norm(u, s + k, q, Scale::ShiftedPower, full, grid);
  rep.in_Wkpp = std::isfinite(rep.norm_u_p) && std::isfinite(rep.seminorm);
  rep.in_Wkqp = std::isfinite(rep.norm_u_q) && std::isfinite(rep.seminorm);
  rep.full_norm = rep.norm_u_p + rep.seminorm;
  rep.norm_ratio = rep.seminorm > 0 ? rep.full_norm / rep.seminorm : std::numeric_limits<double>::infinity();
  for (int j = 1; j < k; ++j) {
    double v = tensor_norm_detail(gradient_k(u, k - j), s + j, pd, Scale::ShiftedPower, full, grid).value;
    rep.intermediate.push_back(v / rep.full_norm);
  }
  try {
    PiOptions po;
    MultiIndexPolynomial pi = construct_pi(u, k, s, p, grid, po);
    rep.pi_membership = poly_membership(pi, s, k, q);
  } catch (const Error& e) {
    if (e.code() != Errc::NoConvergence) throw;
    rep.pi_membership = false;  // growth beyond any polynomial of degree k-1
  }
  return rep;
}

Report exp_verify(const ScalarField& u, const InequalityCase& c, const GridOptions& grid) {
  if (c.s == 0) throw Error(Errc::SZero, "s = 0 has no exponential-scale statement; use the power scale");
  InequalityCase e = c;
  e.scale = Scale::Exponential;
  return verify_case(u, e, grid);
}

}  // namespace growthlab
