#include "growthlab/errors.hpp"
#include "growthlab/field_library.hpp"
#include "growthlab/weighted_norm.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace growthlab;

namespace {

const ExtendedExponent inf = ExtendedExponent::infinity();
ExtendedExponent ex(std::int64_t a, std::int64_t b = 1) { return ExtendedExponent(Rational(a, b)); }

// Composite Simpson rule, written here so the oracle shares nothing with the library.
template <class F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4 : 2);
  return acc * h / 3;
}

}  // namespace

TEST_CASE("weight factors") {
  CHECK(Weight::shifted(2)(1) == doctest::Approx(4));
  CHECK(Weight::pure(-1)(4) == doctest::Approx(0.25));
  CHECK(Weight::exponential(2)(1) == doctest::Approx(std::exp(-2.0)));
  auto w = norm_weight(Scale::ShiftedPower, 1, 2, 3);
  CHECK(w.kind == Scale::ShiftedPower);
  CHECK(w.t == doctest::Approx(-2.5));
  CHECK(norm_weight(Scale::ShiftedPower, 1, HUGE_VAL, 3).t == doctest::Approx(-1));
  CHECK(norm_weight(Scale::Exponential, 0.5, 2, 3).t == doctest::Approx(0.5));
  CHECK(parse_scale("pure") == Scale::PurePower);
  CHECK_THROWS_AS(parse_scale("lorentz"), Error);
}

TEST_CASE("weighted_norm examples") {
  PolarGrid g1(1);
  auto one = constant_field(1, 1);
  CHECK(weighted_norm(one, 1, ex(1), Scale::ShiftedPower, Region::full(), g1) == doctest::Approx(2).epsilon(1e-8));

  for (int N : {1, 2, 3}) {
    PolarGrid g(N);
    for (double s : {-1.5, 0.5, 2.0}) {
      auto u = power_field(N, s);
      CHECK(weighted_norm(u, s, inf, Scale::ShiftedPower, Region::full(), g) == doctest::Approx(1).epsilon(1e-12));
    }
  }

  // (1+|x|)^t lies in L^q_s iff t < s for finite q.
  PolarGrid g3(3);
  for (double s : {-2.0, 0.5, 2.0})
    for (double t : {s - 0.5, s - 0.05, s, s + 0.5})
      for (auto q : {ex(1), ex(2), ex(3)}) {
        CAPTURE(s);
        CAPTURE(t);
        CHECK(membership(power_field(3, t), s, q, Scale::ShiftedPower, g3) == (t < s));
      }
}

TEST_CASE("membership examples") {
  PolarGrid g(3);
  CHECK(membership(power_field(3, 1.5), 2, ex(3), Scale::ShiftedPower, g));
  CHECK_FALSE(membership(power_field(3, 2), 2, ex(3), Scale::ShiftedPower, g));
  CHECK(membership(power_field(3, 2), 2, inf, Scale::ShiftedPower, g));
  CHECK_FALSE(membership(power_field(3, 2.5), 2, inf, Scale::ShiftedPower, g));
}

TEST_CASE("tensor_norm examples") {
  PolarGrid g1(1);
  auto T = gradient_k(coord_poly({1}), 1);
  CHECK(tensor_norm(T, 1, ex(1), Scale::ShiftedPower, Region::full(), g1) == doctest::Approx(2).epsilon(1e-8));

  PolarGrid g3(3);
  auto zero = gradient_k(constant_field(3, 0), 2);
  CHECK(tensor_norm(zero, 0, ex(2), Scale::ShiftedPower, Region::full(), g3) == 0);

  auto sq = make_field("coord_poly(2,0,0)+coord_poly(0,2,0)+coord_poly(0,0,2)", 3);
  auto H = gradient_k(sq, 2);
  const double x[3] = {0.4, -1.2, 2.0};
  CHECK(H.magnitude(x) == doctest::Approx(2 * std::sqrt(3.0)).epsilon(1e-6));
  auto one = constant_field(3, 1);
  for (auto p : {ex(1), ex(2), inf}) {
    double a = tensor_norm(H, 2, p, Scale::ShiftedPower, Region::full(), g3);
    double b = weighted_norm(one, 2, p, Scale::ShiftedPower, Region::full(), g3);
    CHECK(a == doctest::Approx(2 * std::sqrt(3.0) * b).epsilon(1e-6));
  }
}

TEST_CASE("non-radial field against a one-dimensional oracle") {
  // u = x1 e^{-|x|^2} in R^2; the angular integral of cos^2 is pi.
  PolarGrid g(2);
  auto u = make_field("coord_poly(1,0)", 2) * gaussian(2, 1);
  for (double s : {-1.0, 0.0, 1.5}) {
    const double e = (-s - 1) * 2;
    double oracle = std::sqrt(std::numbers::pi *
                              simpson([&](double r) { return std::pow(1 + r, e) * r * r * r * std::exp(-2 * r * r); },
                                      0, 12, 24000));
    CAPTURE(s);
    CHECK(weighted_norm(u, s, ex(2), Scale::ShiftedPower, Region::full(), g) == doctest::Approx(oracle).epsilon(1e-8));
  }
}

TEST_CASE("homogeneity") {
  PolarGrid g(3);
  auto u = aubin_talenti(3, 3);
  for (double c : {-3.0, 0.25, 7.0})
    for (auto q : {ex(1), ex(3, 2), ex(4), inf}) {
      double a = weighted_norm(u, 0.5, q, Scale::ShiftedPower, Region::full(), g);
      double b = weighted_norm(c * u, 0.5, q, Scale::ShiftedPower, Region::full(), g);
      CHECK(b == doctest::Approx(std::abs(c) * a).epsilon(1e-12));
    }
}

TEST_CASE("ball and exterior add up at q = 1") {
  for (int N : {1, 2, 3}) {
    PolarGrid g(N);
    auto u = gaussian(N, 0.3) + power_field(N, -N - 1.5);
    for (double R : {0.5, 1.0, 3.0}) {
      double full = weighted_norm(u, 0, ex(1), Scale::ShiftedPower, Region::full(), g);
      double in = weighted_norm(u, 0, ex(1), Scale::ShiftedPower, Region::ball(R), g);
      double out = weighted_norm(u, 0, ex(1), Scale::ShiftedPower, Region::exterior(R), g);
      CAPTURE(N);
      CAPTURE(R);
      CHECK(in + out >= full * (1 - 1e-10));
      CHECK(in + out == doctest::Approx(full).epsilon(1e-10));
    }
  }
}

TEST_CASE("shifted and pure scales are equivalent away from the origin") {
  PolarGrid g(3);
  auto u = power_field(3, -1);
  for (double s : {-0.5, 0.0, 1.0})
    for (auto q : {ex(1), ex(2), inf}) {
      double e = std::abs(-s - 3 / q.to_double());
      double a = weighted_norm(u, s, q, Scale::ShiftedPower, Region::exterior(1), g);
      double b = weighted_norm(u, s, q, Scale::PurePower, Region::exterior(1), g);
      REQUIRE(std::isfinite(a));
      REQUIRE(std::isfinite(b));
      CHECK(a / b >= std::pow(2, -e) * (1 - 1e-9));
      CHECK(a / b <= std::pow(2, e) * (1 + 1e-9));
    }
}

TEST_CASE("pure-power weight that is not integrable at the origin") {
  PolarGrid g(1);
  auto one = constant_field(1, 1);
  CHECK_THROWS_AS(weighted_norm(one, 0, ex(1), Scale::PurePower, Region::ball(1), g), Error);
  try {
    weighted_norm(one, 0, ex(1), Scale::PurePower, Region::ball(1), g);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::OriginSingular);
  }
  // Integrable at the origin: |x|^{-1/2} on (-1, 1) gives 4.
  CHECK(weighted_norm(one, -0.5, ex(1), Scale::PurePower, Region::ball(1), g) == doctest::Approx(4).epsilon(1e-6));
}

TEST_CASE("constants and large polynomials are not members") {
  PolarGrid g(3);
  for (double s : {-1.5, -2.5, -4.0})
    for (auto q : {ex(1), ex(2), inf}) CHECK_FALSE(membership(constant_field(3, 2), s, q, Scale::ShiftedPower, g));
  CHECK(membership(constant_field(3, 2), 0.5, ex(2), Scale::ShiftedPower, g));
  // Degree d polynomial in L^q_{s+k} needs d < s + k.
  auto x1 = coord_poly({1, 0, 0});
  auto x1x2 = coord_poly({1, 1, 0});
  CHECK_FALSE(membership(x1, -2.5 + 3, ex(2), Scale::ShiftedPower, g));
  CHECK(membership(x1, -1.5 + 3, ex(2), Scale::ShiftedPower, g));
  CHECK_FALSE(membership(x1x2, -1.5 + 3, ex(2), Scale::ShiftedPower, g));
  CHECK(membership(x1x2, -0.5 + 3, ex(2), Scale::ShiftedPower, g));
}

TEST_CASE("exponential scale") {
  PolarGrid g(1);
  // e^{-s|x|} u with u = 1, q = 1: 2/s.
  auto one = constant_field(1, 1);
  CHECK(weighted_norm(one, 2, ex(1), Scale::Exponential, Region::full(), g) == doctest::Approx(1).epsilon(1e-8));
  CHECK(weighted_norm(one, 0.5, ex(2), Scale::Exponential, Region::full(), g) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
  CHECK_FALSE(membership(one, -0.5, ex(1), Scale::Exponential, g));
}

TEST_CASE("annulus regions") {
  auto a = Region::annulus(3);
  CHECK(a.inner() == 3);
  CHECK(a.outer() == 6);
  CHECK_THROWS_AS(Region::ball(0), Error);
  CHECK_THROWS_AS(Region::annulus(-1), Error);
  PolarGrid g(1);
  auto one = constant_field(1, 1);
  // Two intervals of length 3 with weight 1.
  CHECK(weighted_norm(one, -1, ex(1), Scale::PurePower, Region::annulus(3), g) == doctest::Approx(6).epsilon(1e-10));
}
