#include "growthlab/exponents.hpp"

#include "growthlab/errors.hpp"

#include <charconv>
#include <cmath>
#include <limits>

namespace growthlab {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::OrderTooHigh: return "OrderTooHigh";
    case Errc::NonIntegrable: return "NonIntegrable";
    case Errc::OriginSingular: return "OriginSingular";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::ExcludedS: return "ExcludedS";
    case Errc::DimensionOne: return "DimensionOne";
    case Errc::DivergentRHS: return "DivergentRHS";
    case Errc::NoDecay: return "NoDecay";
    case Errc::EmptyEffective: return "EmptyEffective";
    case Errc::InadmissiblePQ: return "InadmissiblePQ";
    case Errc::NotMeanZero: return "NotMeanZero";
    case Errc::SZero: return "SZero";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Config: return "ConfigError";
  }
  return "Unknown";
}

namespace {

std::int64_t parse_int(std::string_view text) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw Error(Errc::InvalidArgument, "not an integer: '" + std::string(text) + "'");
  return v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw Error(Errc::InvalidArgument, "empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto den = parse_int(text.substr(slash + 1));
    if (den == 0) throw Error(Errc::InvalidArgument, "zero denominator in '" + std::string(text) + "'");
    return Rational(parse_int(text.substr(0, slash)), den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    bool negative = text.front() == '-';
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    if (frac.size() > 15) throw Error(Errc::InvalidArgument, "too many decimals: '" + std::string(text) + "'");
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    std::int64_t w = (whole.empty() || whole == "-" || whole == "+") ? 0 : parse_int(whole);
    std::int64_t f = frac.empty() ? 0 : parse_int(frac);
    if (f < 0) throw Error(Errc::InvalidArgument, "malformed decimal: '" + std::string(text) + "'");
    Rational r(w);
    Rational part(f, scale);
    return negative ? r - part : r + part;
  }
  return Rational(parse_int(text));
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

ExtendedExponent::ExtendedExponent(Rational value) : value_(value) {
  if (value_ < Rational(1)) throw Error(Errc::InvalidArgument, "exponent below 1: " + to_string(value_));
}

ExtendedExponent ExtendedExponent::parse(std::string_view text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return infinity();
  return ExtendedExponent(parse_rational(text));
}

Rational ExtendedExponent::value() const {
  if (infinite_) throw Error(Errc::InvalidArgument, "infinite exponent has no rational value");
  return value_;
}

double ExtendedExponent::to_double() const noexcept {
  if (infinite_) return std::numeric_limits<double>::infinity();
  return boost::rational_cast<double>(value_);
}

std::string ExtendedExponent::str() const { return infinite_ ? "inf" : to_string(value_); }

std::strong_ordering operator<=>(const ExtendedExponent& a, const ExtendedExponent& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
  if (a.value_ < b.value_) return std::strong_ordering::less;
  if (b.value_ < a.value_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

bool AdmissibleInterval::contains(const ExtendedExponent& q) const {
  if (q < lower) return false;
  if (q < upper) return true;
  return q == upper && upper_closed;
}

std::string AdmissibleInterval::str() const {
  return "[" + lower.str() + ", " + upper.str() + (upper_closed ? "]" : ")");
}

std::int64_t tensor_dim(int k, int N) {
  if (k < 0 || N < 1) throw Error(Errc::InvalidArgument, "tensor_dim needs k >= 0 and N >= 1");
  // C(N+k-1, k) computed incrementally; each partial product is itself a binomial.
  std::int64_t result = 1;
  for (int i = 1; i <= k; ++i) result = result * (N - 1 + i) / i;
  return result;
}

ExtendedExponent sobolev_exponent(const ExtendedExponent& p, int j, int N) {
  if (p.is_infinite()) return ExtendedExponent::infinity();
  Rational pv = p.value();
  Rational jp = pv * j;
  if (jp < Rational(N)) return ExtendedExponent(pv * N / (Rational(N) - jp));
  return ExtendedExponent::infinity();
}

AdmissibleInterval admissible_interval(int j, const ExtendedExponent& p, int N) {
  if (p.is_infinite()) throw Error(Errc::InvalidArgument, "admissible_interval needs finite p");
  if (j < 1 || N < 1) throw Error(Errc::InvalidArgument, "admissible_interval needs j, N >= 1");
  if (N == 1) return {p, ExtendedExponent::infinity(), true};
  Rational jp = p.value() * j;
  if (jp == Rational(N)) return {p, ExtendedExponent::infinity(), false};
  return {p, sobolev_exponent(p, j, N), true};
}

bool interval_composition_check(int j, const ExtendedExponent& p, int N) {
  if (j < 2) throw Error(Errc::InvalidArgument, "interval_composition_check needs j >= 2");
  AdmissibleInterval first = admissible_interval(1, p, N);
  AdmissibleInterval target = admissible_interval(j, p, N);
  AdmissibleInterval united{p, ExtendedExponent::infinity(), true};
  if (!first.upper.is_infinite()) {
    // Upper endpoints of I_{j-1,p1} increase with p1, so the largest finite p1 decides.
    AdmissibleInterval last = admissible_interval(j - 1, first.upper, N);
    united.upper = last.upper;
    united.upper_closed = last.upper_closed;
  }
  // Otherwise p1 ranges over an unbounded set and large p1 exceed N/(j-1), where inf is attained.
  return united == target;
}

RegimeInfo regime(double s, int k) {
  if (k < 1) throw Error(Errc::InvalidArgument, "regime needs k >= 1");
  RegimeInfo info;
  info.k = k;
  info.s = s;
  if (s > -1) {
    info.component = RegimeComponent::AboveMinusOne;
    info.k_s = k;
  } else if (s < -k) {
    info.component = RegimeComponent::BelowMinusK;
    info.k_s = 0;
  } else if (s == std::floor(s)) {
    info.component = RegimeComponent::Excluded;
  } else {
    info.component = RegimeComponent::Band;
    info.band = static_cast<int>(std::floor(-s));
    info.k_s = static_cast<int>(std::floor(s + k + 1));
  }
  return info;
}

std::string_view to_string(RegimeComponent c) {
  switch (c) {
    case RegimeComponent::AboveMinusOne: return "AboveMinusOne";
    case RegimeComponent::Band: return "Band";
    case RegimeComponent::BelowMinusK: return "BelowMinusK";
    case RegimeComponent::Excluded: return "Excluded";
  }
  return "Unknown";
}

}  // namespace growthlab
