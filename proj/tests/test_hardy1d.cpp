#include "growthlab/errors.hpp"
#include "growthlab/hardy1d.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>

using namespace growthlab;

namespace {

ExtendedExponent ex(std::int64_t a, std::int64_t b = 1) { return ExtendedExponent(Rational(a, b)); }

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return Errc::InvalidArgument;
}

// Simpson in y = log r over [log a, log a + span]; independent of the library quadrature.
double log_simpson(const std::function<double(double)>& g, double a, double span = 80, int n = 200000) {
  const double y0 = std::log(a), h = span / n;
  auto G = [&](double y) {
    double r = std::exp(y);
    return g(r) * r;
  };
  double acc = G(y0) + G(y0 + span);
  for (int i = 1; i < n; ++i) acc += G(y0 + i * h) * (i % 2 ? 4 : 2);
  return acc * h / 3;
}

RadialProfile profile(std::function<double(double)> f, std::function<double(double)> df, bool decay = false) {
  RadialProfile p;
  p.f = std::move(f);
  p.df = std::move(df);
  p.decay = decay;
  return p;
}

}  // namespace

TEST_CASE("power scale above -1: pairs") {
  SUBCASE("constant profiles have zero lhs") {
    auto c = profile([](double) { return 3.0; }, [](double) { return 0.0; });
    for (double s : {-0.5, 0.0, 2.0}) {
      auto h = hardy_pair_power_above(c, s, 2, 3, 1, 3);
      CHECK(h.lhs == 0);
      CHECK(h.rhs == 0);
      CHECK(std::isnan(h.ratio()));
      CHECK(hardy_sup_power_above(c, s, 2, 1, 3).lhs == 0);
    }
  }
  SUBCASE("f = r on (1, inf), N = 1") {
    auto f = profile([](double r) { return r; }, [](double) { return 1.0; });
    // At s = 0 the gradient side is the divergent integral of (1+r)^{-1}.
    CHECK(code_of([&] { hardy_pair_power_above(f, 0, 2, 2, 1, 1); }) == Errc::DivergentRHS);
    // s = 1/2: rhs^2 = int (1+r)^{-2} = 1/2, lhs^2 = int (1+r)^{-4} (r-1)^2 = 1/6.
    auto h = hardy_pair_power_above(f, 0.5, 2, 2, 1, 1);
    CHECK(h.rhs == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
    CHECK(h.lhs == doctest::Approx(std::sqrt(1.0 / 6)).epsilon(1e-9));
  }
  SUBCASE("f = (1+r)^{1/2}, s = 0.6, N = 2") {
    auto f = profile([](double r) { return std::sqrt(1 + r); }, [](double r) { return 0.5 / std::sqrt(1 + r); });
    const double s = 0.6, base = std::sqrt(2.0);
    double lhs = std::sqrt(log_simpson(
        [&](double r) { return std::pow(1 + r, -(s + 1) * 2 - 2) * r * std::pow(std::sqrt(1 + r) - base, 2); }, 1));
    double rhs = std::sqrt(log_simpson([&](double r) { return std::pow(1 + r, -s * 2 - 2) * r * 0.25 / (1 + r); }, 1));
    auto h = hardy_pair_power_above(f, s, 2, 2, 1, 2);
    CHECK(h.lhs == doctest::Approx(lhs).epsilon(1e-7));
    CHECK(h.rhs == doctest::Approx(rhs).epsilon(1e-7));
  }
  SUBCASE("q above p") {
    auto f = profile([](double r) { return std::log(1 + r); }, [](double r) { return 1 / (1 + r); });
    auto h = hardy_pair_power_above(f, 0.25, 2, 5, 0.5, 3);
    CHECK(std::isfinite(h.ratio()));
    CHECK(h.ratio() > 0);
  }
  CHECK_THROWS_AS(hardy_pair_power_above(profile([](double r) { return r; }, {}), -1, 2, 2, 1, 1), Error);
  CHECK_THROWS_AS(hardy_pair_power_above(profile([](double r) { return r; }, {}), 1, 2, 1, 1, 1), Error);
}

TEST_CASE("power scale above -1: sup form") {
  auto f = profile([](double r) { return std::log(1 + r); }, [](double r) { return 1 / (1 + r); });
  // sup over r >= 1 of log((1+r)/2)/(1+r) is 1/(2e) at 1+r = 2e; rhs^3 = int_1^inf (1+r)^{-4} = 1/24.
  auto h = hardy_sup_power_above(f, 0, 3, 1, 1);
  CHECK(h.lhs == doctest::Approx(1 / (2 * std::exp(1.0))).epsilon(1e-5));
  CHECK(h.lhs <= 1 / (2 * std::exp(1.0)));
  CHECK(h.rhs == doctest::Approx(std::cbrt(1.0 / 24)).epsilon(1e-9));

  double last_l = HUGE_VAL, last_r = HUGE_VAL;
  for (double R : {1.0, 2.0, 4.0, 8.0, 16.0, 64.0}) {
    auto hr = hardy_sup_power_above(f, 0, 3, R, 1);
    CAPTURE(R);
    CHECK(hr.lhs <= last_l);
    CHECK(hr.rhs <= last_r);
    last_l = hr.lhs;
    last_r = hr.rhs;
  }
}

TEST_CASE("power scale below -1") {
  SUBCASE("zero profile") {
    auto z = profile([](double) { return 0.0; }, [](double) { return 0.0; }, true);
    auto h = hardy_pair_power_below(z, -2, 2, 2, 3);
    CHECK(h.lhs == 0);
    CHECK(h.rhs == 0);
  }
  SUBCASE("Beta-type closed forms") {
    // (1+r)^{-1} at s = -2, N = 3 has a logarithmically divergent gradient side.
    auto slow = profile([](double r) { return 1 / (1 + r); }, [](double r) { return -1 / ((1 + r) * (1 + r)); }, true);
    CHECK(code_of([&] { hardy_pair_power_below(slow, -2, 2, 2, 3); }) == Errc::DivergentRHS);
    // (1+r)^{-2}: lhs^2 = B(3,2) = 1/12, rhs^2 = 4 B(3,2) = 1/3.
    auto f = profile([](double r) { return std::pow(1 + r, -2); }, [](double r) { return -2 * std::pow(1 + r, -3); }, true);
    auto h = hardy_pair_power_below(f, -2, 2, 2, 3);
    CHECK(h.lhs == doctest::Approx(std::sqrt(1.0 / 12)).epsilon(1e-9));
    CHECK(h.rhs == doctest::Approx(std::sqrt(1.0 / 3)).epsilon(1e-9));
    CHECK(h.ratio() == doctest::Approx(0.5).epsilon(1e-9));
  }
  SUBCASE("e^{-r}, s = -3, p = 1, q = 3/2, N = 3") {
    auto f = profile([](double r) { return std::exp(-r); }, [](double r) { return -std::exp(-r); }, true);
    // lhs^{3/2} = int r^2 e^{-3r/2} = 2/(3/2)^3, rhs = int r^2 e^{-r} = 2.
    auto h = hardy_pair_power_below(f, -3, 1, 1.5, 3);
    CHECK(h.lhs == doctest::Approx(std::pow(2 / 3.375, 2.0 / 3)).epsilon(1e-9));
    CHECK(h.rhs == doctest::Approx(2).epsilon(1e-9));
  }
  SUBCASE("sup form for p > N") {
    auto f = profile([](double r) { return std::pow(1 + r, -2); }, [](double r) { return -2 * std::pow(1 + r, -3); }, true);
    // sup of (1+r)^{-1} is 1 at r = 0; rhs^3 = 8 int r (1+r)^{-5} = 8 B(2,3) = 2/3.
    auto h = hardy_sup_power_below(f, -2, 3, 0, 2);
    CHECK(h.lhs == doctest::Approx(1).epsilon(1e-6));
    CHECK(h.rhs == doctest::Approx(std::cbrt(2.0 / 3)).epsilon(1e-9));
    double last = HUGE_VAL;
    for (double R : {0.0, 0.5, 2.0, 8.0, 32.0}) {
      auto hr = hardy_sup_power_below(f, -2, 3, R, 2);
      CHECK(hr.rhs <= last);
      CHECK(hr.lhs == doctest::Approx(1 / (1 + R)).epsilon(1e-4));
      last = hr.rhs;
    }
    CHECK(code_of([&] { hardy_sup_power_below(f, -2, 2, 0, 2); }) == Errc::InadmissiblePQ);
  }
  SUBCASE("decay is required") {
    auto f = profile([](double r) { return std::pow(1 + r, -2); }, {}, false);
    CHECK(code_of([&] { hardy_pair_power_below(f, -2, 2, 2, 3); }) == Errc::NoDecay);
    auto g = profile([](double r) { return 1 + std::pow(1 + r, -2); }, {}, true);
    CHECK(code_of([&] { hardy_pair_power_below(g, -2, 2, 2, 3); }) == Errc::NoDecay);
  }
}

TEST_CASE("criterion examples") {
  CHECK(ok_criterion(-2, ex(2), ex(2), 3).verdict == Verdict::Finite);
  auto bad = ok_criterion(-2, ex(2), ex(7), 3);
  CHECK(bad.verdict == Verdict::Divergent);
  CHECK(bad.growth_small > 1.1);
  CHECK(ok_criterion(-2, ex(3), ExtendedExponent::infinity(), 2).verdict == Verdict::Finite);
  CHECK(ok_criterion(-2, ex(2), ExtendedExponent::infinity(), 2).verdict == Verdict::Divergent);
  auto ok = ok_criterion(-2, ex(2), ex(6), 3);
  CHECK(ok.verdict == Verdict::Finite);
  CHECK(std::isfinite(ok.sup_estimate));
  CHECK(ok.profile.size() == 49);
  for (const auto& pt : ok.profile) CHECK(pt.product == doctest::Approx(pt.A * pt.B));
  CHECK_THROWS_AS(ok_criterion(-0.5, ex(2), ex(2), 3), Error);
  CHECK_THROWS_AS(ok_criterion(-2, ex(2), ex(3, 2), 3), Error);
}

TEST_CASE("criterion against a direct evaluation of A and B") {
  // s = -2, p = 2, q = 4, N = 3: A^4 = int_0^xi r^2 (1+r)^{1}, B^2 = int_xi^inf (1+r)^{-1} r^{-2}.
  auto res = ok_criterion(-2, ex(2), ex(4), 3);
  for (const auto& pt : res.profile) {
    if (pt.xi < 1e-3 || pt.xi > 1e3) continue;
    double A4 = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      double r = pt.xi * (i + 0.5) / n;
      A4 += r * r * (1 + r) * pt.xi / n;
    }
    double B2 = log_simpson([](double r) { return 1 / ((1 + r) * r * r); }, pt.xi, 40, 20000);
    CAPTURE(pt.xi);
    CHECK(pt.A == doctest::Approx(std::pow(A4, 0.25)).epsilon(1e-6));
    CHECK(pt.B == doctest::Approx(std::sqrt(B2)).epsilon(1e-6));
  }
}

TEST_CASE("criterion verdict equals interval membership") {
  for (double s : {-1.5, -2.0, -3.7})
    for (int pi : {1, 2, 3, 5})
      for (int N : {2, 3, 5}) {
        ExtendedExponent p(pi);
        auto I = admissible_interval(1, p, N);
        std::vector<ExtendedExponent> qs{p, ExtendedExponent::infinity()};
        auto ps = sobolev_exponent(p, 1, N);
        if (!ps.is_infinite()) {
          // From p to p* + 1 in steps of (p* - p)/4, then p* + 1.
          for (int m = 1; m <= 4; ++m) qs.emplace_back(p.value() + (ps.value() - p.value()) * Rational(m, 4));
          qs.emplace_back(ps.value() + Rational(1));
        } else {
          for (int m : {2, 4, 10}) qs.emplace_back(Rational(pi * m));
        }
        for (const auto& q : qs) {
          CAPTURE(s);
          CAPTURE(pi);
          CAPTURE(N);
          CAPTURE(q.str());
          CHECK((ok_criterion(s, p, q, N).verdict == Verdict::Finite) == I.contains(q));
        }
      }
}

TEST_CASE("exponential scale") {
  SUBCASE("above") {
    auto c = profile([](double) { return 2.0; }, [](double) { return 0.0; });
    CHECK(hardy_exponential(c, 1, 2, 3, ExpVariant::Above).lhs == 0);
    auto f = profile([](double r) { return r; }, [](double) { return 1.0; });
    // lhs^2 = int_1^inf e^{-2r} (r-1)^2 = e^{-2}/4, rhs^2 = e^{-2}/2.
    auto h = hardy_exponential(f, 1, 2, 1, ExpVariant::Above, 1);
    CHECK(h.lhs == doctest::Approx(std::exp(-1.0) / 2).epsilon(1e-9));
    CHECK(h.rhs == doctest::Approx(std::exp(-1.0) / std::sqrt(2.0)).epsilon(1e-9));
  }
  SUBCASE("below") {
    // e^{2r} against a polynomially decaying profile diverges.
    auto slow = profile([](double r) { return std::pow(1 + r, -2); }, [](double r) { return -2 * std::pow(1 + r, -3); }, true);
    CHECK(code_of([&] { hardy_exponential(slow, -1, 2, 3, ExpVariant::Below); }) == Errc::DivergentRHS);
    // e^{-2r}: lhs^2 = int r^2 e^{-2r} = 1/4, rhs^2 = 4 int r^2 e^{-2r} = 1.
    auto f = profile([](double r) { return std::exp(-2 * r); }, [](double r) { return -2 * std::exp(-2 * r); }, true);
    auto h = hardy_exponential(f, -1, 2, 3, ExpVariant::Below);
    CHECK(h.lhs == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(h.rhs == doctest::Approx(1).epsilon(1e-9));
    auto nd = profile([](double r) { return std::exp(-2 * r); }, {}, false);
    CHECK(code_of([&] { hardy_exponential(nd, -1, 2, 3, ExpVariant::Below); }) == Errc::NoDecay);
  }
  auto f = profile([](double r) { return r; }, {});
  CHECK(code_of([&] { hardy_exponential(f, 0, 2, 3, ExpVariant::Above); }) == Errc::SZero);
  CHECK(code_of([&] { hardy_exponential(f, -1, 2, 3, ExpVariant::Above); }) == Errc::InvalidArgument);
}

TEST_CASE("ratio estimate is stable under refinement") {
  std::vector<RadialProfile> family{
      profile([](double r) { return std::pow(1 + r, -2); }, {}, true),
      profile([](double r) { return std::exp(-r); }, {}, true),
      profile([](double r) { return 1 / (1 + r * r); }, {}, true),
      profile([](double r) { return std::exp(-r * r) * (1 + r); }, {}, true),
  };
  GridOptions base, fine = base.refined();
  double c1 = 0, c2 = 0;
  for (const auto& f : family) {
    c1 = std::max(c1, hardy_pair_power_below(f, -2.5, 2, 4, 3, base).ratio());
    c2 = std::max(c2, hardy_pair_power_below(f, -2.5, 2, 4, 3, fine).ratio());
  }
  CHECK(std::isfinite(c1));
  CHECK(c2 == doctest::Approx(c1).epsilon(0.05));
  for (const auto& f : family) CHECK(hardy_pair_power_below(f, -2.5, 2, 4, 3).ratio() <= c1);
}
