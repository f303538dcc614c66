#include "growthlab/errors.hpp"
#include "growthlab/exponents.hpp"
#include "growthlab/field_library.hpp"
#include "growthlab/hardy1d.hpp"
#include "growthlab/parallel.hpp"
#include "growthlab/projection.hpp"
#include "growthlab/verifier.hpp"
#include "growthlab/weighted_norm.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace growthlab;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void criterion(int id, const std::string& title, const std::function<bool(std::ostringstream&)>& body) {
  std::ostringstream detail;
  bool ok = false;
  const auto t0 = Clock::now();
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail << "exception: " << e.what();
  }
  if (!ok) ++failures;
  std::printf("%s C%d %s (%s; %.1fs)\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.str().c_str(),
              seconds_since(t0));
  std::fflush(stdout);
}

ExtendedExponent ex(std::int64_t a, std::int64_t b = 1) { return ExtendedExponent(Rational(a, b)); }
const ExtendedExponent inf = ExtendedExponent::infinity();

double unit_sphere_area(int N) {
  switch (N) {
    case 1: return 2;
    case 2: return 2 * std::numbers::pi;
    default: return 4 * std::numbers::pi;
  }
}

ScalarField random_spline(std::mt19937_64& rng, int dim) {
  std::uniform_real_distribution<double> U(-1, 1);
  std::vector<double> r{0.0, 0.5, 1.0, 1.5, 2.0, 3.0}, v;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) v.push_back(U(rng));
  v.push_back(0);
  return radial_spline(dim, r, v);
}

// Random polynomial of degree <= 2 in three variables.
ScalarField random_angular(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1, 1);
  ScalarField p = constant_field(3, U(rng));
  for (const auto& a : multi_indices_of_order(3, 1)) p = p + U(rng) * coord_poly(a);
  for (const auto& a : multi_indices_of_order(3, 2)) p = p + U(rng) * coord_poly(a);
  return p;
}

// Independent oracle for the admissible interval case table.
AdmissibleInterval interval_oracle(int j, Rational p, int N) {
  AdmissibleInterval I{ExtendedExponent(p), inf, true};
  if (N == 1) return I;
  if (p * Rational(j) < Rational(N)) I.upper = ExtendedExponent(Rational(N) * p / (Rational(N) - Rational(j) * p));
  else if (p * Rational(j) == Rational(N)) I.upper_closed = false;
  return I;
}

}  // namespace

int main() {
  set_thread_count(std::max(1u, std::thread::hardware_concurrency()));

  criterion(1, "quadrature oracle agreement", [](std::ostringstream& d) {
    double worst = 0, slowest = 0;
    boost::math::quadrature::exp_sinh<double> es;
    for (int N : {1, 2, 3}) {
      PolarGrid g(N);
      for (double t : {-3.0, -1.5, 0.5})
        for (double gap : {0.5, 1.0, 2.0})
          for (int q : {1, 2, 4}) {
            const double s = t + gap;
            auto t0 = Clock::now();
            double v = weighted_norm(power_field(N, t), s, ex(q), Scale::ShiftedPower, Region::full(), g);
            slowest = std::max(slowest, seconds_since(t0));
            double ref = std::pow(unit_sphere_area(N) * es.integrate([&](double r) {
              return std::pow(1 + r, (t - s - double(N) / q) * q) * std::pow(r, N - 1);
            }, 1e-15), 1.0 / q);
            worst = std::max(worst, std::abs(v - ref) / ref);
          }
    }
    d << "max rel err " << worst << ", slowest norm " << slowest << "s";
    return worst < 1e-6 && slowest < 1;
  });

  criterion(2, "membership law", [](std::ostringstream& d) {
    PolarGrid g(3);
    const std::vector<double> grid{-3, -2, -1, -0.5, 0, 1, 2.5};
    int bad = 0, total = 0;
    for (double t : grid)
      for (double s : grid)
        for (auto q : {ex(1), ex(2), inf}) {
          bool want = q.is_infinite() ? t <= s : t < s;
          bad += membership(power_field(3, t), s, q, Scale::ShiftedPower, g) != want;
          ++total;
        }
    d << bad << "/" << total << " misclassified";
    return bad == 0;
  });

  criterion(3, "constant recovery below -k", [](std::ostringstream& d) {
    PolarGrid g(3);
    double err = 0, spread_p = 0, spread_r = 0;
    for (double c : {-2.0, 0.0, 5.0}) {
      auto u = constant_field(3, c) + bump(3, 2);
      std::vector<double> by_p;
      for (auto p : {ex(1), ex(2), ex(4)}) {
        double a = construct_pi(u, 1, -2, p, g).coeff(0);
        PiOptions o;
        o.limit.r0 *= 2;
        double b = construct_pi(u, 1, -2, p, g, o).coeff(0);
        err = std::max(err, std::abs(a - c));
        spread_r = std::max(spread_r, std::abs(a - b));
        by_p.push_back(a);
      }
      auto [lo, hi] = std::minmax_element(by_p.begin(), by_p.end());
      spread_p = std::max(spread_p, *hi - *lo);
    }
    d << "err " << err << ", p spread " << spread_p << ", r0 spread " << spread_r;
    return err < 1e-4 && spread_p < 1e-6 && spread_r < 1e-5;
  });

  criterion(4, "pi vanishes for compact support", [](std::ostringstream& d) {
    PolarGrid g(3);
    std::mt19937_64 rng(4);
    std::vector<ScalarField> fields{bump(3, 1), bump(3, 2.5), shifted_bump({0.5, -0.3, 0.2}, 1.5), random_spline(rng, 3),
                                    random_spline(rng, 3) * coord_poly({1, 0, 1})};
    double worst = 0;
    for (int k : {1, 2, 3})
      for (const auto& u : fields)
        for (double s : {-k - 0.5, -k - 1.7}) worst = std::max(worst, construct_pi(u, k, s, 2, g).max_abs_coeff());
    d << "max coeff " << worst;
    return worst < 1e-8;
  });

  criterion(5, "symmetrization contraction", [](std::ostringstream& d) {
    constexpr std::size_t count = 100;
    std::mt19937_64 rng(20240611);
    std::vector<ScalarField> fields;
    for (std::size_t i = 0; i < count; ++i) {
      auto radial = random_spline(rng, 3);
      fields.push_back(radial * random_angular(rng));
    }
    PolarGrid g(3);
    std::vector<double> ratio(count);
    parallel_for(count, [&](std::size_t i) {
      auto us = radial_symmetrize(fields[i], g.sphere());
      double a = tensor_norm(gradient_k(fields[i], 1), -2, 2, Scale::ShiftedPower, Region::full(), g);
      double b = tensor_norm(gradient_k(us, 1), -2, 2, Scale::ShiftedPower, Region::full(), g);
      ratio[i] = b / a;
    });
    int violations = 0;
    for (double r : ratio) violations += !(r <= 1 + 1e-6);
    d << violations << "/" << count << " violations, largest ratio " << *std::max_element(ratio.begin(), ratio.end());
    return violations == 0;
  });

  criterion(6, "interval algebra", [](std::ostringstream& d) {
    const std::vector<Rational> ps{Rational(1), Rational(5, 4), Rational(3, 2), Rational(2), Rational(3), Rational(5)};
    int bad = 0, total = 0;
    for (int j = 1; j <= 4; ++j)
      for (const auto& p : ps)
        for (int N = 1; N <= 5; ++N) {
          ++total;
          if (!(admissible_interval(j, ExtendedExponent(p), N) == interval_oracle(j, p, N))) ++bad;
          if (j >= 2 && !interval_composition_check(j, ExtendedExponent(p), N)) ++bad;
        }
    d << bad << " failures over " << total << " triples";
    return bad == 0;
  });

  criterion(7, "criterion and interval agree", [](std::ostringstream& d) {
    int bad = 0, total = 0;
    for (double s : {-1.5, -2.0, -3.7})
      for (int pi : {1, 2, 3, 5})
        for (int N : {2, 3, 5}) {
          ExtendedExponent p(pi);
          auto I = admissible_interval(1, p, N);
          auto ps = sobolev_exponent(p, 1, N);
          const Rational top = ps.is_infinite() ? Rational(pi + 10) : ps.value() + Rational(1);
          std::vector<ExtendedExponent> qs{inf};
          for (Rational q(pi); q <= top; q += Rational(1, 4)) qs.emplace_back(q);
          if (!ps.is_infinite()) qs.push_back(ps);
          for (const auto& q : qs) {
            bool got = ok_criterion(s, p, q, N).verdict == Verdict::Finite;
            bad += got != I.contains(q);
            ++total;
          }
        }
    d << bad << "/" << total << " disagreements";
    return bad == 0;
  });

  criterion(8, "dilation invariance", [](std::ostringstream& d) {
    InequalityCase c;
    c.N = 3;
    c.s = -1.5;
    c.p = 2;
    c.q = 6;
    auto t0 = Clock::now();
    auto reports = scaling_experiment(aubin_talenti(3, 3), c, {0.25, 0.5, 1, 2, 4});
    double elapsed = seconds_since(t0);
    double lo = HUGE_VAL, hi = 0;
    for (const auto& r : reports) lo = std::min(lo, r.ratio), hi = std::max(hi, r.ratio);
    d << "ratios in [" << lo << ", " << hi << "], " << elapsed << "s";
    return std::isfinite(hi) && hi <= lo * 1.01 && elapsed < 30;
  });

  criterion(9, "grid stability", [](std::ostringstream& d) {
    std::mt19937_64 rng(7);
    std::vector<ScalarField> family;
    for (int i = 0; i < 20; ++i) family.push_back(random_spline(rng, 3));
    InequalityCase c;
    auto a = estimate_constant(family, c);
    auto b = estimate_constant(family, c, GridOptions{}.refined());
    double change = std::abs(b.value - a.value) / a.value;
    d << a.value << " -> " << b.value << ", change " << change << ", skipped " << a.skipped.size();
    return std::isfinite(a.value) && a.value > 0 && change < 0.05;
  });

  criterion(10, "blow-up scan", [](std::ostringstream& d) {
    auto u = gaussian(3, 1);
    bool ok = true;
    for (double side : {-1.0, 1.0}) {
      double prev = 0;
      for (double delta : {0.4, 0.2, 0.1, 0.05}) {
        InequalityCase c;
        c.s = -1 + side * delta;
        double r = verify_case(u, c).ratio;
        d << c.s << ":" << r << " ";
        ok = ok && std::isfinite(r) && r > prev;
        prev = r;
      }
    }
    return ok;
  });

  criterion(11, "decay diagnostics", [](std::ostringstream& d) {
    InequalityCase c;
    c.N = 3;
    c.s = -0.75;
    c.p = 4;
    c.q = inf;
    auto res = decay_check(gaussian(3, 1), c);
    const auto& prof = res.profile;
    if (prof.size() < 5) return false;
    bool ok = true;
    for (std::size_t i = prof.size() - 5; i < prof.size(); ++i) {
      d << prof[i].value << " ";
      if (i > prof.size() - 5) ok = ok && prof[i].value < prof[i - 1].value;
    }
    return ok;
  });

  criterion(12, "exponential scale", [](std::ostringstream& d) {
    InequalityCase c;
    c.s = -1;
    c.scale = Scale::Exponential;
    bool ok = true;
    for (double cst : {-2.0, 0.0, 5.0}) {
      auto u = constant_field(3, cst) + gaussian(3, 1);
      auto a = exp_verify(u, c);
      auto b = exp_verify(u, c, GridOptions{}.refined());
      double err = std::abs(a.pi->coeff(0) - cst);
      d << "c=" << cst << " err " << err << " ratio " << a.ratio << "/" << b.ratio << "; ";
      ok = ok && err < 1e-4 && std::isfinite(a.ratio) && std::abs(a.ratio - b.ratio) < 0.01 * a.ratio;
    }
    c.s = 0;
    try {
      exp_verify(gaussian(3, 1), c);
      d << "s = 0 accepted";
      ok = false;
    } catch (const Error& e) {
      d << "s = 0 rejected";
      ok = ok && e.code() == Errc::SZero;
    }
    return ok;
  });

  criterion(13, "embedding norms", [](std::ostringstream& d) {
    std::vector<ScalarField> fields{gaussian(3, 1)};
    for (double a : {0.5, 1.0, 2.0})
      for (double shift : {0.0, 0.5, 1.0}) {
        auto profile = [a](const Jet& r) { return exp(-a * r); };
        fields.push_back(rho_field(3, {shift, 0, 0}, profile, "exp"));
      }
    std::vector<double> base(fields.size()), fine(fields.size());
    parallel_for(fields.size(), [&](std::size_t i) {
      base[i] = embedding_report(fields[i], 2, -2.5, 2, 2).norm_ratio;
      fine[i] = embedding_report(fields[i], 2, -2.5, 2, 2, GridOptions{}.refined()).norm_ratio;
    });
    double bound = 0, drift = 0;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      bound = std::max(bound, base[i]);
      drift = std::max(drift, std::abs(fine[i] - base[i]) / base[i]);
    }
    d << fields.size() << " fields, max ratio " << bound << ", refinement drift " << drift;
    return std::isfinite(bound) && drift < 0.05;
  });

  std::printf("%d of 13 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
