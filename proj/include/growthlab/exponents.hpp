#pragma once

#include <boost/rational.hpp>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace growthlab {

using Rational = boost::rational<std::int64_t>;

// Lebesgue exponent in [1, inf]. Finite values are exact rationals.
class ExtendedExponent {
 public:
  ExtendedExponent(Rational value);
  ExtendedExponent(std::int64_t value) : ExtendedExponent(Rational(value)) {}

  static ExtendedExponent infinity() { return ExtendedExponent(); }
  // Accepts "inf", integers, "a/b" and finite decimals such as "1.25".
  static ExtendedExponent parse(std::string_view text);

  bool is_infinite() const noexcept { return infinite_; }
  Rational value() const;  // throws for infinity
  double to_double() const noexcept;
  std::string str() const;

  friend bool operator==(const ExtendedExponent&, const ExtendedExponent&) = default;
  friend std::strong_ordering operator<=>(const ExtendedExponent& a, const ExtendedExponent& b);

 private:
  ExtendedExponent() : infinite_(true) {}
  Rational value_{1};
  bool infinite_ = false;
};

Rational parse_rational(std::string_view text);
std::string to_string(const Rational& r);

struct AdmissibleInterval {
  ExtendedExponent lower;
  ExtendedExponent upper;
  bool upper_closed = true;

  bool contains(const ExtendedExponent& q) const;
  std::string str() const;
  friend bool operator==(const AdmissibleInterval&, const AdmissibleInterval&) = default;
};

std::int64_t tensor_dim(int k, int N);
ExtendedExponent sobolev_exponent(const ExtendedExponent& p, int j, int N);
AdmissibleInterval admissible_interval(int j, const ExtendedExponent& p, int N);
bool interval_composition_check(int j, const ExtendedExponent& p, int N);

enum class RegimeComponent { AboveMinusOne, Band, BelowMinusK, Excluded };

struct RegimeInfo {
  int k = 1;
  double s = 0;
  RegimeComponent component = RegimeComponent::AboveMinusOne;
  int band = 0;  // for Band: s lies in (-band-1, -band)
  int k_s = 0;   // not meaningful (left 0) when Excluded
};

// Exact comparison: only the integers -k..-1 themselves are excluded.
RegimeInfo regime(double s, int k);
std::string_view to_string(RegimeComponent c);

}  // namespace growthlab
