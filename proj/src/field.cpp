#include "growthlab/field.hpp"

#include "growthlab/errors.hpp"
#include "growthlab/weighted_norm.hpp"
#include "scratch.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>

namespace growthlab {

using detail::Scratch;

namespace {

struct Stencil {
  int half;
  std::array<double, 5> coef;  // offsets -half .. half
};

const Stencil& stencil(int order) {
  static const std::array<Stencil, 4> table{{
      {1, {-0.5, 0.0, 0.5, 0, 0}},
      {1, {1.0, -2.0, 1.0, 0, 0}},
      {2, {-0.5, 1.0, 0.0, -1.0, 0.5}},
      {2, {1.0, -4.0, 6.0, -4.0, 1.0}},
  }};
  return table[static_cast<std::size_t>(order - 1)];
}

std::size_t usz(int v) { return static_cast<std::size_t>(v); }

}  // namespace

double default_fd_step(int order) {
  if (order <= 1) return 1e-4;
  if (order == 2) return 5e-4;
  return 5e-3;
}

ScalarField::ScalarField(int dim, Evaluator eval, std::string name)
    : dim_(dim), table_(&MultiIndexTable::get(dim, kMaxOracleOrder)), eval_(std::move(eval)), name_(std::move(name)) {
  if (!eval_) throw Error(Errc::InvalidArgument, "field needs an evaluator");
}

ScalarField& ScalarField::with_oracle(DerivativeOracle oracle, int max_order) {
  if (max_order < 0 || max_order > kMaxOracleOrder)
    throw Error(Errc::OrderTooHigh, "oracle order must be in [0, " + std::to_string(kMaxOracleOrder) + "]");
  oracle_ = std::move(oracle);
  oracle_order_ = max_order;
  return *this;
}

ScalarField& ScalarField::on(Domain d) {
  if (d != Domain::FullSpace && dim_ != 1) throw Error(Errc::InvalidArgument, "half-line domains require N = 1");
  domain_ = d;
  return *this;
}

double ScalarField::fd_partial(const MultiIndex& alpha, std::span<const double> x, FdOptions fd) const {
  const int m = alpha.order();
  if (m == 0) return eval_(x);
  if (m > 4) throw Error(Errc::OrderTooHigh, "finite differences are limited to order 4");
  const double h = (fd.h0 > 0 ? fd.h0 : default_fd_step(m)) * (1 + detail::norm(x));
  std::array<int, kMaxDim> coords{};
  int nc = 0;
  for (int i = 0; i < dim_; ++i)
    if (alpha[i] > 0) coords[usz(nc++)] = i;
  std::array<int, kMaxDim> offset{};
  for (int c = 0; c < nc; ++c) offset[usz(c)] = -stencil(alpha[coords[usz(c)]]).half;
  std::array<double, kMaxDim> y{};
  double total = 0;
  while (true) {
    double weight = 1;
    std::copy(x.begin(), x.end(), y.begin());
    for (int c = 0; c < nc; ++c) {
      const Stencil& st = stencil(alpha[coords[usz(c)]]);
      int off = offset[usz(c)];
      weight *= st.coef[usz(off + st.half)];
      y[usz(coords[usz(c)])] += off * h;
    }
    if (weight != 0) total += weight * eval_(std::span<const double>(y.data(), usz(dim_)));
    int c = 0;
    for (; c < nc; ++c) {
      const Stencil& st = stencil(alpha[coords[usz(c)]]);
      if (++offset[usz(c)] <= st.half) break;
      offset[usz(c)] = -st.half;
    }
    if (c == nc) break;
  }
  return total / std::pow(h, m);
}

void ScalarField::derivatives(std::span<const double> x, int order, std::span<double> out, FdOptions fd) const {
  if (order > kMaxOracleOrder) throw Error(Errc::OrderTooHigh, "derivative order above the oracle limit");
  const std::size_t n = table_->size_up_to(order);
  int have = 0;
  if (oracle_) {
    have = std::min(order, oracle_order_);
    oracle_(x, have, out);
  } else {
    out[0] = eval_(x);
  }
  for (std::size_t i = table_->size_up_to(have); i < n; ++i) out[i] = fd_partial(table_->at(i), x, fd);
}

double ScalarField::partial(const MultiIndex& alpha, std::span<const double> x, FdOptions fd) const {
  const int m = alpha.order();
  if (oracle_ && m <= oracle_order_) {
    Scratch s(table_->size_up_to(m));
    oracle_(x, m, s.span());
    return s[usz(table_->index_of(alpha))];
  }
  return fd_partial(alpha, x, fd);
}

namespace {

std::optional<double> max_support(const ScalarField& a, const ScalarField& b) {
  if (a.flags().compact_support && b.flags().compact_support)
    return std::max(*a.flags().compact_support, *b.flags().compact_support);
  return std::nullopt;
}

void check_compatible(const ScalarField& a, const ScalarField& b) {
  if (a.dim() != b.dim()) throw Error(Errc::InvalidArgument, "field dimensions differ");
  if (a.domain() != b.domain()) throw Error(Errc::InvalidArgument, "field domains differ");
}

}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  check_compatible(a, b);
  auto pa = std::make_shared<const ScalarField>(a);
  auto pb = std::make_shared<const ScalarField>(b);
  ScalarField r(a.dim(), [pa, pb](std::span<const double> x) { return (*pa)(x) + (*pb)(x); },
                "(" + a.name() + " + " + b.name() + ")");
  if (a.has_oracle() || b.has_oracle()) {
    const MultiIndexTable* tab = &a.table();
    r.with_oracle(
        [pa, pb, tab](std::span<const double> x, int order, std::span<double> out) {
          std::size_t n = tab->size_up_to(order);
          Scratch s(n);
          pa->derivatives(x, order, out);
          pb->derivatives(x, order, s.span());
          for (std::size_t i = 0; i < n; ++i) out[i] += s[i];
        },
        std::max(a.oracle_order(), b.oracle_order()));
  }
  r.flags().radial = a.flags().radial && b.flags().radial;
  r.flags().compact_support = max_support(a, b);
  if (a.flags().vanishes_near_origin && b.flags().vanishes_near_origin)
    r.flags().vanishes_near_origin = std::min(*a.flags().vanishes_near_origin, *b.flags().vanishes_near_origin);
  r.on(a.domain()).with_extent(std::max(a.extent(), b.extent()));
  return r;
}

ScalarField operator*(double c, const ScalarField& a) {
  auto pa = std::make_shared<const ScalarField>(a);
  ScalarField r(a.dim(), [pa, c](std::span<const double> x) { return c * (*pa)(x); },
                std::to_string(c) + "*" + a.name());
  if (a.has_oracle()) {
    const MultiIndexTable* tab = &a.table();
    r.with_oracle(
        [pa, c, tab](std::span<const double> x, int order, std::span<double> out) {
          pa->derivatives(x, order, out);
          for (std::size_t i = 0; i < tab->size_up_to(order); ++i) out[i] *= c;
        },
        a.oracle_order());
  }
  r.flags() = a.flags();
  r.on(a.domain()).with_extent(a.extent());
  return r;
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  ScalarField r = a + (-1.0) * b;
  r.rename("(" + a.name() + " - " + b.name() + ")");
  return r;
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  check_compatible(a, b);
  auto pa = std::make_shared<const ScalarField>(a);
  auto pb = std::make_shared<const ScalarField>(b);
  ScalarField r(a.dim(), [pa, pb](std::span<const double> x) { return (*pa)(x) * (*pb)(x); },
                a.name() + "*" + b.name());
  if (a.has_oracle() || b.has_oracle()) {
    const MultiIndexTable* tab = &a.table();
    r.with_oracle(
        [pa, pb, tab](std::span<const double> x, int order, std::span<double> out) {
          std::size_t n = tab->size_up_to(order);
          Scratch A(n), B(n);
          pa->derivatives(x, order, A.span());
          pb->derivatives(x, order, B.span());
          for (std::size_t i = 0; i < n; ++i) {
            double v = 0;
            for (const auto& t : tab->leibniz(i)) v += t.binom * A[usz(t.beta)] * B[usz(t.gamma)];
            out[i] = v;
          }
        },
        std::max(a.oracle_order(), b.oracle_order()));
  }
  r.flags().radial = a.flags().radial && b.flags().radial;
  const auto& ca = a.flags().compact_support;
  const auto& cb = b.flags().compact_support;
  if (ca && cb) r.flags().compact_support = std::min(*ca, *cb);
  else if (ca) r.flags().compact_support = ca;
  else if (cb) r.flags().compact_support = cb;
  const auto& va = a.flags().vanishes_near_origin;
  const auto& vb = b.flags().vanishes_near_origin;
  if (va || vb) r.flags().vanishes_near_origin = std::max(va.value_or(0), vb.value_or(0));
  double extent = r.flags().compact_support ? *r.flags().compact_support : std::max(a.extent(), b.extent());
  r.on(a.domain()).with_extent(extent);
  return r;
}

ScalarField constant_field(int dim, double c) {
  ScalarField r(dim, [c](std::span<const double>) { return c; }, "constant(" + std::to_string(c) + ")");
  const MultiIndexTable* tab = &r.table();
  r.with_oracle(
      [c, tab](std::span<const double>, int order, std::span<double> out) {
        std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(tab->size_up_to(order)), 0.0);
        out[0] = c;
      },
      kMaxOracleOrder);
  r.flags().radial = true;
  r.with_extent(0);
  return r;
}

ScalarField dilate(const ScalarField& u, double lambda) {
  if (!(lambda > 0)) throw Error(Errc::InvalidArgument, "dilation factor must be positive");
  auto pu = std::make_shared<const ScalarField>(u);
  const int dim = u.dim();
  ScalarField r(
      dim,
      [pu, lambda, dim](std::span<const double> x) {
        std::array<double, kMaxDim> y{};
        for (int i = 0; i < dim; ++i) y[usz(i)] = lambda * x[usz(i)];
        return (*pu)(std::span<const double>(y.data(), usz(dim)));
      },
      u.name() + "@" + std::to_string(lambda));
  if (u.has_oracle()) {
    const MultiIndexTable* tab = &u.table();
    r.with_oracle(
        [pu, lambda, dim, tab](std::span<const double> x, int order, std::span<double> out) {
          std::array<double, kMaxDim> y{};
          for (int i = 0; i < dim; ++i) y[usz(i)] = lambda * x[usz(i)];
          pu->derivatives(std::span<const double>(y.data(), usz(dim)), order, out);
          for (std::size_t i = 0; i < tab->size_up_to(order); ++i) out[i] *= std::pow(lambda, tab->at(i).order());
        },
        u.oracle_order());
  }
  r.flags().radial = u.flags().radial;
  if (u.flags().compact_support) r.flags().compact_support = *u.flags().compact_support / lambda;
  if (u.flags().vanishes_near_origin) r.flags().vanishes_near_origin = *u.flags().vanishes_near_origin / lambda;
  r.on(u.domain()).with_extent(u.extent() / lambda);
  return r;
}

TensorField::TensorField(int dim, int order, Fill fill, bool radial, double extent)
    : dim_(dim), order_(order), fill_(std::move(fill)), radial_(radial), extent_(extent),
      alphas_(multi_indices_of_order(dim, order)) {
  double kfact = 1;
  for (int i = 2; i <= order; ++i) kfact *= i;
  for (const auto& a : alphas_) multiplicity_.push_back(kfact / a.factorial());
}

double TensorField::magnitude(std::span<const double> x) const {
  Scratch s(alphas_.size());
  fill_(x, s.span());
  double sum = 0;
  for (std::size_t i = 0; i < alphas_.size(); ++i) sum += multiplicity_[i] * s[i] * s[i];
  return std::sqrt(sum);
}

TensorField gradient_k(const ScalarField& u, int k, FdOptions fd) {
  if (k < 0) throw Error(Errc::InvalidArgument, "negative derivative order");
  const bool exact = u.has_oracle() && u.oracle_order() >= k;
  if (!exact && k > 4) throw Error(Errc::OrderTooHigh, "finite differences requested for order " + std::to_string(k));
  auto pu = std::make_shared<const ScalarField>(u);
  const MultiIndexTable* tab = &u.table();
  TensorField::Fill fill;
  if (exact) {
    fill = [pu, tab, k](std::span<const double> x, std::span<double> out) {
      Scratch s(tab->size_up_to(k));
      pu->derivatives(x, k, s.span());
      for (std::size_t i = tab->offset(k), j = 0; i < tab->size_up_to(k); ++i, ++j) out[j] = s[i];
    };
  } else {
    auto alphas = std::make_shared<const std::vector<MultiIndex>>(multi_indices_of_order(u.dim(), k));
    fill = [pu, alphas, fd](std::span<const double> x, std::span<double> out) {
      for (std::size_t j = 0; j < alphas->size(); ++j) out[j] = pu->partial((*alphas)[j], x, fd);
    };
  }
  return TensorField(u.dim(), k, std::move(fill), u.flags().radial, u.extent());
}

SampledTensor sample(const TensorField& T, const PolarGrid& grid) {
  SampledTensor st;
  st.sphere_size = grid.sphere().size();
  st.entries = T.entries();
  const int dim = grid.dim();
  std::array<double, kMaxDim> x{};
  for (const auto& [r, w] : grid.radial_nodes()) {
    st.radii.push_back(r);
    for (std::size_t j = 0; j < st.sphere_size; ++j) {
      auto sigma = grid.sphere().node(j);
      for (int i = 0; i < dim; ++i) x[usz(i)] = r * sigma[usz(i)];
      std::size_t base = st.values.size();
      st.values.resize(base + st.entries);
      T.values(std::span<const double>(x.data(), usz(dim)), std::span<double>(st.values.data() + base, st.entries));
    }
  }
  return st;
}

double spherical_mean(const ScalarField& u, double r, const SphereRule& sphere) {
  const int dim = sphere.dim;
  std::array<double, kMaxDim> x{};
  double sum = 0;
  for (std::size_t j = 0; j < sphere.size(); ++j) {
    auto sigma = sphere.node(j);
    for (int i = 0; i < dim; ++i) x[usz(i)] = r * sigma[usz(i)];
    sum += sphere.weights[j] * u(std::span<const double>(x.data(), usz(dim)));
  }
  return sum / sphere.measure;
}

double spherical_mean(const ScalarField& u, double r, const PolarGrid& grid) {
  return spherical_mean(u, r, grid.sphere());
}

namespace {

struct SymMoments {
  double mean = 0;
  double slope = 0;  // mean of the radial derivative
};

// Spherical mean and mean radial derivative of u at radius rad. Norm sweeps visit every
// sphere node at one radius in turn, so the last radius is cached per thread.
SymMoments sym_moments(std::uint64_t id, const ScalarField& u, const SphereRule& sphere, double rad, bool with_slope) {
  struct Cache {
    std::uint64_t owner = 0;
    double rad = -1;
    bool slope = false;
    SymMoments m;
  };
  thread_local Cache cache;
  if (cache.owner == id && cache.rad >= 0 && std::abs(cache.rad - rad) <= 1e-13 * rad &&
      (cache.slope || !with_slope))
    return cache.m;
  const int dim = u.dim();
  std::array<double, kMaxDim> y{};
  Scratch s(u.table().size_up_to(1));
  SymMoments m;
  for (std::size_t j = 0; j < sphere.size(); ++j) {
    auto sigma = sphere.node(j);
    for (int i = 0; i < dim; ++i) y[usz(i)] = rad * sigma[usz(i)];
    std::span<const double> point(y.data(), usz(dim));
    if (!with_slope) {
      m.mean += sphere.weights[j] * u(point);
      continue;
    }
    u.derivatives(point, 1, s.span());
    double dr = 0;
    for (int i = 0; i < dim; ++i) dr += s[usz(1 + i)] * sigma[usz(i)];
    m.mean += sphere.weights[j] * s[0];
    m.slope += sphere.weights[j] * dr;
  }
  m.mean /= sphere.measure;
  m.slope /= sphere.measure;
  cache = {id, rad, with_slope, m};
  return m;
}

}  // namespace

ScalarField radial_symmetrize(const ScalarField& u, const SphereRule& sphere) {
  if (sphere.dim != u.dim()) throw Error(Errc::InvalidArgument, "sphere rule dimension mismatch");
  if (u.flags().radial) return u;
  auto pu = std::make_shared<const ScalarField>(u);
  auto ps = std::make_shared<const SphereRule>(sphere);
  static std::atomic<std::uint64_t> next_id{1};
  const std::uint64_t id = next_id++;
  const int dim = u.dim();
  ScalarField r(
      dim,
      [pu, ps, id](std::span<const double> x) {
        double rad = detail::norm(x);
        if (rad == 0) return (*pu)(x);
        return sym_moments(id, *pu, *ps, rad, false).mean;
      },
      "sym(" + u.name() + ")");
  const MultiIndexTable* tab = &u.table();
  r.with_oracle(
      [pu, ps, tab, dim, id](std::span<const double> x, int order, std::span<double> out) {
        double rad = detail::norm(x);
        if (rad == 0) {
          out[0] = (*pu)(x);
          for (std::size_t i = 1; i < tab->size_up_to(order); ++i) out[i] = 0;
          return;
        }
        SymMoments m = sym_moments(id, *pu, *ps, rad, order >= 1);
        out[0] = m.mean;
        if (order >= 1)
          for (int i = 0; i < dim; ++i) out[usz(1 + i)] = m.slope * x[usz(i)] / rad;
      },
      1);
  r.flags().radial = true;
  r.flags().compact_support = u.flags().compact_support;
  r.flags().vanishes_near_origin = u.flags().vanishes_near_origin;
  r.on(u.domain()).with_extent(u.extent());
  return r;
}

ScalarField radial_symmetrize(const ScalarField& u) {
  return radial_symmetrize(u, make_sphere_rule(u.dim(), u.domain()));
}

double mollifier_profile(double r2) { return r2 < 1 ? std::exp(-1.0 / (1.0 - r2)) : 0.0; }

namespace {

struct MollifierRule {
  int dim = 1;
  std::vector<double> nodes;
  std::vector<double> weights;
};

SphereRule coarse_sphere(int dim, int points) {
  if (dim == 1) return make_sphere_rule(1, Domain::FullSpace);
  SphereRule rule;
  rule.dim = dim;
  rule.measure = sphere_measure(dim);
  if (dim == 2) {
    int n = points > 0 ? points : 24;
    for (int i = 0; i < n; ++i) {
      double t = 2 * std::numbers::pi * i / n;
      rule.nodes.push_back(std::cos(t));
      rule.nodes.push_back(std::sin(t));
      rule.weights.push_back(2 * std::numbers::pi / n);
    }
  } else if (dim == 3) {
    int n = points > 0 ? points : 6;
    const auto& gl = gauss_legendre(n);
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      double z = gl.nodes[i], rho = std::sqrt(1 - z * z);
      for (int j = 0; j < 2 * n; ++j) {
        double phi = std::numbers::pi * j / n;
        rule.nodes.insert(rule.nodes.end(), {rho * std::cos(phi), rho * std::sin(phi), z});
        rule.weights.push_back(gl.weights[i] * std::numbers::pi / n);
      }
    }
  } else {
    int n = points > 0 ? points : 512;
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    std::vector<double> v(usz(dim));
    for (int i = 0; i < n; ++i) {
      double s = 0;
      for (auto& c : v) {
        c = g(rng);
        s += c * c;
      }
      s = std::sqrt(s);
      for (double c : v) rule.nodes.push_back(c / s);
      rule.weights.push_back(rule.measure / n);
    }
  }
  return rule;
}

MollifierRule make_mollifier_rule(int dim, const MollifyOptions& o) {
  MollifierRule m;
  m.dim = dim;
  SphereRule sphere = coarse_sphere(dim, o.sphere_points);
  const auto& gl = gauss_legendre(o.radial_points);
  double total = 0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    double r = 0.5 * (1 + gl.nodes[i]);
    double wr = 0.5 * gl.weights[i] * std::pow(r, dim - 1) * mollifier_profile(r * r);
    for (std::size_t j = 0; j < sphere.size(); ++j) {
      auto sigma = sphere.node(j);
      for (int d = 0; d < dim; ++d) m.nodes.push_back(r * sigma[usz(d)]);
      m.weights.push_back(wr * sphere.weights[j]);
      total += m.weights.back();
    }
  }
  for (auto& w : m.weights) w /= total;
  return m;
}

}  // namespace

ScalarField mollify(const ScalarField& u, int n, MollifyOptions options) {
  if (n < 1) throw Error(Errc::InvalidArgument, "mollification scale must be positive");
  auto pu = std::make_shared<const ScalarField>(u);
  auto rule = std::make_shared<const MollifierRule>(make_mollifier_rule(u.dim(), options));
  const int dim = u.dim();
  const double inv = 1.0 / n;
  ScalarField r(
      dim,
      [pu, rule, dim, inv](std::span<const double> x) {
        std::array<double, kMaxDim> y{};
        double sum = 0;
        for (std::size_t j = 0; j < rule->weights.size(); ++j) {
          for (int d = 0; d < dim; ++d) y[usz(d)] = x[usz(d)] - inv * rule->nodes[j * usz(dim) + usz(d)];
          sum += rule->weights[j] * (*pu)(std::span<const double>(y.data(), usz(dim)));
        }
        return sum;
      },
      "mollified(" + u.name() + ")");
  r.flags().radial = u.flags().radial;
  if (u.flags().compact_support) r.flags().compact_support = *u.flags().compact_support + inv;
  r.with_extent(u.extent() + inv);
  return r;
}

std::vector<double> mollify_error(const ScalarField& u, const Weight& w, double p, std::span<const int> scales,
                                  const PolarGrid& grid, MollifyOptions options) {
  if (std::isinf(p)) throw Error(Errc::InvalidArgument, "mollification error needs finite p");
  Integrand base{u.dim(), [&u](std::span<const double> x) { return std::abs(u(x)); }, u.flags().radial, u.extent()};
  if (!lp_norm(base, w, p, Region::full(), grid).finite())
    throw Error(Errc::NonIntegrable, "weighted norm of the field is infinite");
  std::vector<double> errors;
  for (int n : scales) {
    ScalarField m = mollify(u, n, options);
    Integrand diff{u.dim(), [&u, &m](std::span<const double> x) { return std::abs(m(x) - u(x)); },
                   u.flags().radial, m.extent()};
    errors.push_back(lp_norm(diff, w, p, Region::full(), grid).value);
  }
  return errors;
}

double annulus_max(const std::function<double(std::span<const double>)>& f, int dim, double tau, int resolution) {
  if (!(tau > 0)) throw Error(Errc::InvalidArgument, "annulus radius must be positive");
  resolution = std::max(resolution, 1);
  SphereRule sphere = dim <= 3 ? make_sphere_rule(dim, Domain::FullSpace, resolution)
                               : coarse_sphere(dim, 4096 * resolution);
  std::vector<double> dirs = sphere.nodes;
  for (int i = 0; i < dim; ++i)
    for (double sign : {1.0, -1.0}) {
      for (int d = 0; d < dim; ++d) dirs.push_back(d == i ? sign : 0.0);
    }
  const int nr = 64 * resolution;
  std::array<double, kMaxDim> x{};
  double best = 0;
  for (int k = 0; k <= nr; ++k) {
    double r = tau * (1.0 + static_cast<double>(k) / nr);
    for (std::size_t j = 0; j < dirs.size() / usz(dim); ++j) {
      for (int d = 0; d < dim; ++d) x[usz(d)] = r * dirs[j * usz(dim) + usz(d)];
      best = std::max(best, std::abs(f(std::span<const double>(x.data(), usz(dim)))));
    }
  }
  return best;
}

double annulus_max(const ScalarField& u, double tau, int resolution) {
  if (u.flags().radial || u.domain() != Domain::FullSpace) {
    const double sign = u.domain() == Domain::HalfLineNeg ? -1.0 : 1.0;
    const int dim = u.dim();
    std::array<double, kMaxDim> x{};
    const int nr = 64 * std::max(resolution, 1);
    double best = 0;
    for (int k = 0; k <= nr; ++k) {
      x[0] = sign * tau * (1.0 + static_cast<double>(k) / nr);
      best = std::max(best, std::abs(u(std::span<const double>(x.data(), usz(dim)))));
    }
    return best;
  }
  return annulus_max([&u](std::span<const double> x) { return u(x); }, u.dim(), tau, resolution);
}

}  // namespace growthlab
