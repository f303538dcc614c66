#include "growthlab/field_library.hpp"

#include "growthlab/errors.hpp"
#include "scratch.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>

namespace growthlab {

namespace {

std::size_t usz(int v) { return static_cast<std::size_t>(v); }

// d^alpha F(|y|^2) = sum over m <= alpha/2 of
//   prod_i alpha_i! / (m_i! (alpha_i - 2 m_i)!) (2 y_i)^{alpha_i - 2 m_i}  F^{(|alpha| - |m|)}(|y|^2).
struct RhoTerm {
  double coef;
  std::array<int, kMaxDim> e;
  int f_order;
};

class RhoTerms {
 public:
  static const RhoTerms& get(int dim) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<RhoTerms>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[dim];
    if (!slot) slot.reset(new RhoTerms(dim));
    return *slot;
  }
  const std::vector<RhoTerm>& operator[](std::size_t i) const { return terms_[i]; }

 private:
  explicit RhoTerms(int dim) {
    const auto& tab = MultiIndexTable::get(dim, kMaxOracleOrder);
    terms_.resize(tab.size());
    for (std::size_t i = 0; i < tab.size(); ++i) {
      const MultiIndex& a = tab.at(i);
      std::array<int, kMaxDim> m{};
      while (true) {
        RhoTerm t{1, {}, a.order()};
        for (int d = 0; d < dim; ++d) {
          int ai = a[d], mi = m[usz(d)], ei = ai - 2 * mi;
          t.coef *= std::tgamma(ai + 1.0) / (std::tgamma(mi + 1.0) * std::tgamma(ei + 1.0)) * std::pow(2.0, ei);
          t.e[usz(d)] = ei;
          t.f_order -= mi;
        }
        terms_[i].push_back(t);
        int d = 0;
        for (; d < dim; ++d) {
          if (2 * (m[usz(d)] + 1) <= a[d]) {
            ++m[usz(d)];
            break;
          }
          m[usz(d)] = 0;
        }
        if (d == dim) break;
      }
    }
  }
  std::vector<std::vector<RhoTerm>> terms_;
};

double ipow(double x, int e) {
  double r = 1;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

ScalarField rho_field(int dim, std::vector<double> center, RhoProfile F, std::string name) {
  if (center.empty()) center.assign(usz(dim), 0.0);
  if (static_cast<int>(center.size()) != dim) throw Error(Errc::InvalidArgument, "center dimension mismatch");
  auto c = std::make_shared<const std::vector<double>>(std::move(center));
  auto f = std::make_shared<const RhoProfile>(std::move(F));
  auto rho_of = [c, dim](std::span<const double> x, std::array<double, kMaxDim>& y) {
    double rho = 0;
    for (int i = 0; i < dim; ++i) {
      y[usz(i)] = x[usz(i)] - (*c)[usz(i)];
      rho += y[usz(i)] * y[usz(i)];
    }
    return rho;
  };
  ScalarField u(
      dim,
      [f, rho_of](std::span<const double> x) {
        std::array<double, kMaxDim> y{};
        return (*f)(Jet(rho_of(x, y), 0)).c[0];
      },
      std::move(name));
  const RhoTerms* terms = &RhoTerms::get(dim);
  const MultiIndexTable* tab = &u.table();
  u.with_oracle(
      [f, rho_of, terms, tab, dim](std::span<const double> x, int order, std::span<double> out) {
        std::array<double, kMaxDim> y{};
        // The profile may be singular exactly at rho = 0 (through sqrt); nudging by a
        // negligible amount keeps every bounded derivative finite.
        double rho = std::max(rho_of(x, y), 1e-30);
        Jet J = (*f)(Jet::variable(rho, order));
        std::array<double, kMaxOracleOrder + 1> d{};
        for (int n = 0; n <= order; ++n) d[usz(n)] = J.derivative(n);
        for (std::size_t i = 0; i < tab->size_up_to(order); ++i) {
          double v = 0;
          for (const auto& t : (*terms)[i]) {
            double term = t.coef * d[usz(t.f_order)];
            for (int k = 0; k < dim; ++k) term *= ipow(y[usz(k)], t.e[usz(k)]);
            v += term;
          }
          out[i] = v;
        }
      },
      kMaxOracleOrder);
  bool centered = std::all_of(c->begin(), c->end(), [](double v) { return v == 0; });
  u.flags().radial = centered;
  return u;
}

ScalarField gaussian(int dim, double a) {
  if (!(a > 0)) throw Error(Errc::InvalidArgument, "gaussian needs a > 0");
  ScalarField u = rho_field(dim, {}, [a](const Jet& rho) { return exp(-a * rho); }, "gaussian(" + fmt(a) + ")");
  u.with_extent(std::sqrt(32 / a));
  return u;
}

namespace {

RhoProfile bump_profile(double R) {
  return [R](const Jet& rho) {
    Jet t = 1.0 - rho / (R * R);
    if (t.c[0] <= 0) return Jet(0.0, rho.n);
    return exp(-1.0 / t);
  };
}

}  // namespace

ScalarField bump(int dim, double R) {
  if (!(R > 0)) throw Error(Errc::InvalidArgument, "bump needs R > 0");
  ScalarField u = rho_field(dim, {}, bump_profile(R), "bump(" + fmt(R) + ")");
  u.flags().compact_support = R;
  u.with_extent(R);
  return u;
}

ScalarField shifted_bump(std::vector<double> center, double R) {
  if (!(R > 0)) throw Error(Errc::InvalidArgument, "shifted_bump needs R > 0");
  const int dim = static_cast<int>(center.size());
  std::string name = "shifted_bump(";
  double norm = 0;
  for (double v : center) {
    name += fmt(v) + ",";
    norm += v * v;
  }
  name += fmt(R) + ")";
  ScalarField u = rho_field(dim, std::move(center), bump_profile(R), name);
  double support = std::sqrt(norm) + R;
  u.flags().compact_support = support;
  u.with_extent(support);
  return u;
}

ScalarField power_field(int dim, double t) {
  ScalarField u =
      rho_field(dim, {}, [t](const Jet& rho) { return pow(1.0 + sqrt(rho), t); }, "power(" + fmt(t) + ")");
  u.with_extent(1);
  return u;
}

ScalarField aubin_talenti(int dim, double n) {
  const double e = -(n - 2) / 2;
  ScalarField u = rho_field(dim, {}, [e](const Jet& rho) { return pow(1.0 + rho, e); },
                            "aubin_talenti(" + fmt(n) + ")");
  u.with_extent(1);
  return u;
}

ScalarField coord_poly(const MultiIndex& alpha) {
  const int dim = alpha.dim();
  ScalarField u(dim, [alpha](std::span<const double> x) { return monomial(alpha, x); }, "coord_poly" + alpha.str());
  const MultiIndexTable* tab = &u.table();
  u.with_oracle(
      [alpha, tab, dim](std::span<const double> x, int order, std::span<double> out) {
        for (std::size_t i = 0; i < tab->size_up_to(order); ++i) {
          const MultiIndex& b = tab->at(i);
          double v = 1;
          for (int d = 0; d < dim && v != 0; ++d) {
            if (b[d] > alpha[d]) {
              v = 0;
              break;
            }
            for (int m = 0; m < b[d]; ++m) v *= alpha[d] - m;
            v *= ipow(x[usz(d)], alpha[d] - b[d]);
          }
          out[i] = v;
        }
      },
      kMaxOracleOrder);
  u.flags().radial = alpha.order() == 0;
  u.with_extent(1);
  return u;
}

ScalarField radial_spline(int dim, std::vector<double> radii, std::vector<double> values) {
  const std::size_t n = radii.size();
  if (n < 2 || values.size() != n) throw Error(Errc::InvalidArgument, "radial_spline needs matching knots, at least two");
  if (radii[0] != 0) throw Error(Errc::InvalidArgument, "radial_spline must start at r = 0");
  if (values.back() != 0) throw Error(Errc::InvalidArgument, "radial_spline must end with value 0");
  for (std::size_t i = 1; i < n; ++i)
    if (!(radii[i] > radii[i - 1])) throw Error(Errc::InvalidArgument, "radial_spline knots must increase");
  std::vector<double> slope(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) slope[i] = (values[i + 1] - values[i - 1]) / (radii[i + 1] - radii[i - 1]);
  // Segment i as a cubic in (r - r_i).
  auto seg = std::make_shared<std::vector<std::array<double, 5>>>();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double h = radii[i + 1] - radii[i];
    double d = (values[i + 1] - values[i]) / h;
    double c2 = (3 * d - 2 * slope[i] - slope[i + 1]) / h;
    double c3 = (slope[i] + slope[i + 1] - 2 * d) / (h * h);
    seg->push_back({radii[i], values[i], slope[i], c2, c3});
  }
  const double end = radii.back();
  std::string name = "radial_spline(";
  for (std::size_t i = 0; i < n; ++i) name += fmt(radii[i]) + "," + fmt(values[i]) + (i + 1 < n ? "," : ")");
  ScalarField u = rho_field(
      dim, {},
      [seg, end](const Jet& rho) {
        Jet r = sqrt(rho);
        if (r.c[0] >= end) return Jet(0.0, rho.n);
        auto it = std::upper_bound(seg->begin(), seg->end(), r.c[0],
                                   [](double v, const std::array<double, 5>& s) { return v < s[0]; });
        const auto& s = *(it - 1);
        Jet t = r - s[0];
        return s[1] + t * (s[2] + t * (s[3] + t * s[4]));
      },
      name);
  u.flags().compact_support = end;
  u.with_extent(end);
  return u;
}

// ---- textual specs ----

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double number(std::string_view s, std::string_view context) {
  s = trim(s);
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw Error(Errc::Config, "bad number '" + std::string(s) + "' in field '" + std::string(context) + "'");
  return v;
}

bool is_number(std::string_view s) {
  s = trim(s);
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return !s.empty() && ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::string_view> split_top(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    else if (s[i] == ')') --depth;
    else if (s[i] == sep && depth == 0) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(s.substr(start));
  return out;
}

std::size_t arg_count(std::string_view name) {
  if (name == "gaussian" || name == "bump" || name == "power" || name == "constant") return 1;
  return 0;  // variadic or optional
}

ScalarField make_term(std::string_view spec, int dim) {
  std::string_view s = trim(spec);
  if (is_number(s)) return constant_field(dim, number(s, spec));
  auto open = s.find('(');
  const bool bare = open == std::string_view::npos;
  if (!bare && s.back() != ')') throw Error(Errc::Config, "field '" + std::string(s) + "' must look like name(args)");
  std::string_view name = bare ? s : trim(s.substr(0, open));
  std::string_view inner = bare ? std::string_view() : s.substr(open + 1, s.size() - open - 2);
  std::vector<double> args;
  if (!trim(inner).empty())
    for (auto a : split_top(inner, ',')) args.push_back(number(a, s));
  auto need = [&](std::size_t n) {
    if (args.size() != n)
      throw Error(Errc::Config, "field '" + std::string(name) + "' takes " + std::to_string(n) + " argument(s)");
  };
  auto names = field_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw Error(Errc::Config, "unknown field '" + std::string(name) + "'");
  if (std::size_t n = arg_count(name)) need(n);
  try {
    if (name == "gaussian") return gaussian(dim, args[0]);
    if (name == "bump") return bump(dim, args[0]);
    if (name == "power") return power_field(dim, args[0]);
    if (name == "constant") return constant_field(dim, args[0]);
    if (name == "aubin_talenti") {
      if (args.size() > 1) need(1);
      return aubin_talenti(dim, args.empty() ? dim : args[0]);
    }
    if (name == "coord_poly") {
      need(usz(dim));
      MultiIndex alpha(dim);
      for (int i = 0; i < dim; ++i) {
        double v = args[usz(i)];
        if (v < 0 || v != std::floor(v)) throw Error(Errc::Config, "coord_poly exponents must be natural numbers");
        alpha[i] = static_cast<int>(v);
      }
      return coord_poly(alpha);
    }
    if (name == "shifted_bump") {
      need(usz(dim) + 1);
      return shifted_bump(std::vector<double>(args.begin(), args.end() - 1), args.back());
    }
    if (name == "radial_spline") {
      if (args.size() < 4 || args.size() % 2 != 0)
        throw Error(Errc::Config, "radial_spline takes pairs r0,v0,r1,v1,...");
      std::vector<double> r, v;
      for (std::size_t i = 0; i < args.size(); i += 2) {
        r.push_back(args[i]);
        v.push_back(args[i + 1]);
      }
      return radial_spline(dim, std::move(r), std::move(v));
    }
  } catch (const Error& e) {
    if (e.code() == Errc::Config) throw;
    throw Error(Errc::Config, std::string(e.what()));
  }
  throw Error(Errc::Config, "unknown field '" + std::string(name) + "'");
}

}  // namespace

ScalarField make_field(std::string_view spec, int dim) {
  if (dim < 1 || dim > kMaxDim) throw Error(Errc::Config, "dimension must be in [1, 8]");
  std::optional<ScalarField> total;
  for (auto term : split_top(spec, '+')) {
    term = trim(term);
    if (term.empty()) throw Error(Errc::Config, "empty term in field '" + std::string(spec) + "'");
    auto parts = split_top(term, '*');
    std::optional<ScalarField> prod;
    double coef = 1;
    for (auto p : parts) {
      if (is_number(p)) {
        coef *= number(p, spec);
        continue;
      }
      ScalarField f = make_term(p, dim);
      prod = prod ? *prod * f : f;
    }
    ScalarField t = prod ? (coef == 1 ? *prod : coef * *prod) : constant_field(dim, coef);
    total = total ? *total + t : t;
  }
  total->rename(std::string(trim(spec)));
  return *total;
}

const std::vector<std::string>& field_names() {
  static const std::vector<std::string> names = {"gaussian",     "bump",          "power",
                                                 "aubin_talenti", "coord_poly",    "shifted_bump",
                                                 "radial_spline", "constant"};
  return names;
}

}  // namespace growthlab
