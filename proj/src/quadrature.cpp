#include "growthlab/quadrature.hpp"

#include "growthlab/errors.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>

namespace growthlab {

const GaussRule& gauss_legendre(int order) {
  if (order < 1 || order > 1024) throw Error(Errc::InvalidArgument, "Gauss-Legendre order out of range");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) {
    auto rule = std::make_unique<GaussRule>();
    gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(order));
    if (!table) throw Error(Errc::InvalidArgument, "could not build Gauss-Legendre table");
    for (int i = 0; i < order; ++i) {
      double x = 0, w = 0;
      gsl_integration_glfixed_point(-1.0, 1.0, static_cast<std::size_t>(i), &x, &w, table);
      rule->nodes.push_back(x);
      rule->weights.push_back(w);
    }
    gsl_integration_glfixed_table_free(table);
    slot = std::move(rule);
  }
  return *slot;
}

double sphere_measure(int dim) {
  return 2 * std::pow(std::numbers::pi, dim / 2.0) / std::tgamma(dim / 2.0);
}

SphereRule make_sphere_rule(int dim, Domain domain, int refine, std::uint64_t seed) {
  if (dim < 1 || dim > 8) throw Error(Errc::InvalidArgument, "dimension must be in [1, 8]");
  if (domain != Domain::FullSpace && dim != 1)
    throw Error(Errc::InvalidArgument, "half-line domains require N = 1");
  refine = std::max(refine, 1);
  SphereRule rule;
  rule.dim = dim;
  if (dim == 1) {
    if (domain != Domain::HalfLineNeg) {
      rule.nodes.push_back(1.0);
      rule.weights.push_back(1.0);
    }
    if (domain != Domain::HalfLinePos) {
      rule.nodes.push_back(-1.0);
      rule.weights.push_back(1.0);
    }
    rule.measure = static_cast<double>(rule.weights.size());
    return rule;
  }
  rule.measure = sphere_measure(dim);
  if (dim == 2) {
    const int n = 256 * refine;
    for (int i = 0; i < n; ++i) {
      double theta = 2 * std::numbers::pi * i / n;
      rule.nodes.push_back(std::cos(theta));
      rule.nodes.push_back(std::sin(theta));
      rule.weights.push_back(2 * std::numbers::pi / n);
    }
    return rule;
  }
  if (dim == 3) {
    const auto& gl = gauss_legendre(32 * refine);
    const int nphi = 64 * refine;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      double z = gl.nodes[i];
      double rho = std::sqrt(std::max(0.0, 1 - z * z));
      for (int j = 0; j < nphi; ++j) {
        double phi = 2 * std::numbers::pi * j / nphi;
        rule.nodes.push_back(rho * std::cos(phi));
        rule.nodes.push_back(rho * std::sin(phi));
        rule.nodes.push_back(z);
        rule.weights.push_back(gl.weights[i] * 2 * std::numbers::pi / nphi);
      }
    }
    return rule;
  }
  rule.monte_carlo = true;
  const std::size_t n = std::size_t{1} << 16;
  const std::size_t count = n * static_cast<std::size_t>(refine);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<double> v(static_cast<std::size_t>(dim));
  for (std::size_t i = 0; i < count; ++i) {
    double norm = 0;
    do {
      norm = 0;
      for (auto& c : v) {
        c = gauss(rng);
        norm += c * c;
      }
    } while (norm == 0);
    norm = std::sqrt(norm);
    for (double c : v) rule.nodes.push_back(c / norm);
    rule.weights.push_back(rule.measure / static_cast<double>(count));
  }
  return rule;
}

GridOptions GridOptions::refined() const {
  GridOptions o = *this;
  o.panels *= 2;
  o.panels_per_decade *= 2;
  o.sphere_refine *= 2;
  return o;
}

double GridOptions::r_min() const { return r_max * std::pow(10.0, -static_cast<double>(panels) / panels_per_decade); }

PolarGrid::PolarGrid(int dim, Domain domain, GridOptions options)
    : dim_(dim), domain_(domain), options_(options),
      sphere_(make_sphere_rule(dim, domain, options.sphere_refine, options.seed)) {
  if (options_.r_max <= 0 || options_.panels < 1 || options_.panels_per_decade < 1 || options_.points_per_panel < 1)
    throw Error(Errc::InvalidArgument, "invalid grid options");
}

namespace {

class Lattice {
 public:
  explicit Lattice(const GridOptions& o) : o_(o) {}
  double edge(long i) const {
    return o_.r_max * std::pow(10.0, static_cast<double>(i - o_.panels) / o_.panels_per_decade);
  }
  // Smallest lattice index whose edge lies strictly above r.
  long above(double r) const {
    long i = static_cast<long>(std::floor(o_.panels + o_.panels_per_decade * std::log10(r / o_.r_max)));
    while (edge(i) <= r * (1 + 1e-12)) ++i;
    while (edge(i - 1) > r * (1 + 1e-12)) --i;
    return i;
  }

 private:
  const GridOptions& o_;
};

class PanelRule {
 public:
  PanelRule(const RadialBatch& g, int order) : g_(g), rule_(gauss_legendre(order)), r_(rule_.nodes.size()), v_(r_.size()) {}
  double operator()(double lo, double hi) {
    double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < r_.size(); ++i) r_[i] = mid + half * rule_.nodes[i];
    g_(r_, v_);
    double s = 0;
    for (std::size_t i = 0; i < r_.size(); ++i) {
      if (std::isnan(v_[i])) throw Error(Errc::InvalidArgument, "integrand is NaN at r = " + std::to_string(r_[i]));
      s += rule_.weights[i] * v_[i];
    }
    return half * s;
  }

 private:
  const RadialBatch& g_;
  const GaussRule& rule_;
  std::vector<double> r_, v_;
};

bool geometric_growth(const std::vector<double>& d, double ratio) {
  std::size_t n = d.size();
  return n >= 3 && d[n - 1] > ratio * d[n - 2] && d[n - 2] > ratio * d[n - 3];
}

}  // namespace

std::vector<std::pair<double, double>> PolarGrid::radial_nodes() const {
  Lattice lat(options_);
  const auto& gl = gauss_legendre(options_.points_per_panel);
  std::vector<std::pair<double, double>> out;
  for (long i = 0; i < options_.panels; ++i) {
    double lo = lat.edge(i), hi = lat.edge(i + 1);
    double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (std::size_t j = 0; j < gl.nodes.size(); ++j) out.emplace_back(mid + half * gl.nodes[j], half * gl.weights[j]);
  }
  return out;
}

RadialIntegral integrate_radial(const RadialBatch& g, double a, double b, const GridOptions& o, double settle) {
  if (!(a >= 0) || !(b > a)) throw Error(Errc::InvalidArgument, "radial integration needs 0 <= a < b");
  RadialIntegral res;
  Lattice lat(o);
  PanelRule panel(g, o.points_per_panel);
  const double r0 = lat.edge(0);
  const double cap = o.r_max * std::pow(10.0, o.extra_decades);
  const bool infinite = std::isinf(b);
  const double check_from = 1e4 * std::max(settle, 1.0);
  const double dead = 1e-15;

  double total = 0;
  std::vector<double> panels, decades;
  double decade_acc = 0;
  double lo = a > 0 ? a : std::min(r0, b);
  if (lo < b) {
    long i = lat.above(lo);
    bool at_cap = false;
    while (lo < b) {
      double hi = std::min(lat.edge(i), b);
      if (infinite && lo >= cap * (1 - 1e-12)) {
        at_cap = true;
        break;
      }
      double S = panel(lo, hi);
      if (!std::isfinite(S)) {
        res.divergent = true;
        res.r_end = hi;
        res.value = std::numeric_limits<double>::infinity();
        return res;
      }
      total += S;
      panels.push_back(S);
      decade_acc += S;
      res.r_end = hi;
      lo = hi;
      if (i % o.panels_per_decade == 0) {
        decades.push_back(decade_acc);
        decade_acc = 0;
        if (infinite && hi >= check_from && geometric_growth(decades, o.growth_ratio) &&
            decades.back() > o.significance * total) {
          res.divergent = true;
          res.value = std::numeric_limits<double>::infinity();
          return res;
        }
      }
      ++i;
      if (infinite && hi >= settle && total > 0 && panels.size() >= 3) {
        std::size_t n = panels.size();
        double s0 = panels[n - 1], s1 = panels[n - 2], s2 = panels[n - 3];
        if (s0 <= dead * total && s1 <= dead * total) break;
        if (s0 < s1 && s1 < s2) {
          double rho = s0 / s1;
          double tail = s0 * rho / (1 - rho);
          if (tail <= o.tail_tol * total) {
            res.tail = tail;
            total += tail;
            break;
          }
        }
      }
    }
    if (at_cap && decades.size() >= 2) {
      double d1 = decades[decades.size() - 1], d0 = decades[decades.size() - 2];
      double rho = d0 > 0 ? d1 / d0 : 0;
      if (rho >= 0.999) {
        if (d1 > o.significance * total) {
          res.divergent = true;
          res.value = std::numeric_limits<double>::infinity();
          return res;
        }
        res.noise_floor = true;
      } else {
        res.tail = d1 * rho / (1 - rho);
        total += res.tail;
      }
    }
  }

  if (a == 0) {
    double hi = std::min(r0, b);
    const double step = std::pow(10.0, 1.0 / o.panels_per_decade);
    double inner = 0, prev = -1;
    bool closed = false;
    for (int k = 1; k <= 80; ++k) {
      double d = 0;
      for (int j = 0; j < o.panels_per_decade; ++j) {
        double l = hi / step;
        d += panel(l, hi);
        hi = l;
      }
      if (!std::isfinite(d)) {
        res.divergent = true;
        res.at_origin = true;
        res.value = std::numeric_limits<double>::infinity();
        return res;
      }
      inner += d;
      double all = total + inner;
      if (all == 0 && k >= 3) {
        closed = true;
        break;
      }
      if (k >= 2 && d < prev && d <= dead * all) {
        double rho = d / prev;
        res.inner_tail = d * rho / (1 - rho);
        inner += res.inner_tail;
        closed = true;
        break;
      }
      prev = d;
    }
    if (!closed) {
      res.divergent = true;
      res.at_origin = true;
      res.value = std::numeric_limits<double>::infinity();
      return res;
    }
    total += inner;
  }
  res.value = total;
  return res;
}

RadialMax scan_radial_max(const RadialBatch& g, double a, double b, const GridOptions& o, double settle) {
  if (!(a >= 0) || !(b > a)) throw Error(Errc::InvalidArgument, "radial scan needs 0 <= a < b");
  RadialMax res;
  Lattice lat(o);
  const auto& rule = gauss_legendre(o.points_per_panel);
  const bool infinite = std::isinf(b);
  const double end = std::min(b, o.r_max);
  const double check_from = std::max(settle, 100.0);
  double lo = std::max(a, std::min(lat.edge(0), end));
  if (a > 0) lo = a;
  std::vector<double> r(rule.nodes.size() + 1), v(r.size());
  std::vector<double> decades;
  double decade_max = 0;
  long i = lat.above(lo);
  while (lo < end) {
    double hi = std::min(lat.edge(i), end);
    double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    r[0] = lo;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) r[j + 1] = mid + half * rule.nodes[j];
    g(r, v);
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (std::isnan(v[j])) throw Error(Errc::InvalidArgument, "sup integrand is NaN");
      if (v[j] > res.value) {
        res.value = v[j];
        res.at = r[j];
      }
      decade_max = std::max(decade_max, v[j]);
    }
    if (std::isinf(res.value)) {
      res.divergent = true;
      return res;
    }
    lo = hi;
    if (i % o.panels_per_decade == 0) {
      decades.push_back(decade_max);
      decade_max = 0;
      if (infinite && hi >= check_from && geometric_growth(decades, o.growth_ratio) &&
          decades.back() >= (1 - 1e-12) * res.value) {
        res.divergent = true;
        res.value = std::numeric_limits<double>::infinity();
        return res;
      }
      std::size_t n = decades.size();
      if (hi >= settle && n >= 2 && decades[n - 1] < decades[n - 2] && decades[n - 1] <= 1e-15 * res.value) break;
    }
    ++i;
  }
  return res;
}

double integrate_interval(const std::function<double(double)>& f, double a, double b, int panels, int order) {
  const auto& rule = gauss_legendre(order);
  double h = (b - a) / panels, s = 0;
  for (int p = 0; p < panels; ++p) {
    double lo = a + p * h, mid = lo + 0.5 * h;
    double part = 0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) part += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
    s += 0.5 * h * part;
  }
  return s;
}

}  // namespace growthlab
