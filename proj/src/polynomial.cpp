#include "growthlab/polynomial.hpp"

#include "growthlab/errors.hpp"

#include <cmath>
#include <memory>

namespace growthlab {

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::Zero: return "zero";
    case Provenance::LimitAtInfinity: return "limit_at_infinity";
    case Provenance::BallAverage: return "ball_average";
    case Provenance::TaylorPoint: return "taylor_point";
  }
  return "unknown";
}

MultiIndexPolynomial::MultiIndexPolynomial(int dim, int k)
    : dim_(dim), k_(k), table_(&MultiIndexTable::get(dim, kMaxOracleOrder)) {
  if (k < 1) throw Error(Errc::InvalidArgument, "polynomial order k must be positive");
  if (k - 1 > kMaxOracleOrder) throw Error(Errc::OrderTooHigh, "polynomial degree above the supported maximum");
  coeffs_.assign(table_->size_up_to(k - 1), 0.0);
  sources_.resize(coeffs_.size());
}

double MultiIndexPolynomial::coeff(const MultiIndex& alpha) const {
  if (alpha.order() > k_ - 1) return 0;
  return coeffs_[static_cast<std::size_t>(table_->index_of(alpha))];
}

void MultiIndexPolynomial::set(std::size_t i, double value, CoeffSource source) {
  coeffs_.at(i) = value;
  sources_.at(i) = std::move(source);
}

void MultiIndexPolynomial::set(const MultiIndex& alpha, double value, CoeffSource source) {
  if (alpha.order() > k_ - 1) throw Error(Errc::InvalidArgument, "coefficient degree exceeds k - 1");
  set(static_cast<std::size_t>(table_->index_of(alpha)), value, std::move(source));
}

double MultiIndexPolynomial::operator()(std::span<const double> x) const {
  double v = 0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) v += coeffs_[i] * monomial(table_->at(i), x);
  return v;
}

double MultiIndexPolynomial::derivative(const MultiIndex& beta, std::span<const double> x) const {
  double v = 0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    const MultiIndex& a = table_->at(i);
    double term = coeffs_[i];
    for (int d = 0; d < dim_ && term != 0; ++d) {
      if (beta[d] > a[d]) {
        term = 0;
        break;
      }
      for (int m = 0; m < beta[d]; ++m) term *= a[d] - m;
      term *= std::pow(x[static_cast<std::size_t>(d)], a[d] - beta[d]);
    }
    v += term;
  }
  return v;
}

void MultiIndexPolynomial::derivatives(std::span<const double> x, int order, std::span<double> out) const {
  for (std::size_t i = 0; i < table_->size_up_to(order); ++i)
    out[i] = table_->at(i).order() > k_ - 1 ? 0.0 : derivative(table_->at(i), x);
}

int MultiIndexPolynomial::degree(double tol) const {
  int deg = -1;
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (std::abs(coeffs_[i]) > tol) deg = std::max(deg, table_->at(i).order());
  return deg;
}

double MultiIndexPolynomial::max_abs_coeff() const {
  double m = 0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

ScalarField MultiIndexPolynomial::as_field() const {
  auto self = std::make_shared<const MultiIndexPolynomial>(*this);
  ScalarField f(dim_, [self](std::span<const double> x) { return (*self)(x); }, "pi");
  f.with_oracle([self](std::span<const double> x, int order, std::span<double> out) { self->derivatives(x, order, out); },
                kMaxOracleOrder);
  f.flags().radial = degree() <= 0;
  f.with_extent(1);
  return f;
}

MultiIndexPolynomial operator+(const MultiIndexPolynomial& a, const MultiIndexPolynomial& b) {
  if (a.dim_ != b.dim_ || a.k_ != b.k_) throw Error(Errc::InvalidArgument, "polynomial shapes differ");
  MultiIndexPolynomial r = a;
  for (std::size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] += b.coeffs_[i];
  return r;
}

MultiIndexPolynomial operator-(const MultiIndexPolynomial& a, const MultiIndexPolynomial& b) {
  if (a.dim_ != b.dim_ || a.k_ != b.k_) throw Error(Errc::InvalidArgument, "polynomial shapes differ");
  MultiIndexPolynomial r = a;
  for (std::size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] -= b.coeffs_[i];
  return r;
}

}  // namespace growthlab
