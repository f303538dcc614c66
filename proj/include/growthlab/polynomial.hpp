#pragma once

#include "growthlab/field.hpp"
#include "growthlab/multi_index.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace growthlab {

enum class Provenance { Zero, LimitAtInfinity, BallAverage, TaylorPoint };
std::string_view to_string(Provenance p);

struct CoeffSource {
  Provenance kind = Provenance::Zero;
  std::vector<double> x0;  // ball center or Taylor point
  double rho = 0;          // ball radius
  double residual = 0;     // extrapolation residual for limit coefficients
};

// Element of P_{k-1}: sum of c_alpha x^alpha over |alpha| <= k-1, stored in
// MultiIndexTable order.
class MultiIndexPolynomial {
 public:
  MultiIndexPolynomial(int dim, int k);

  int dim() const noexcept { return dim_; }
  int k() const noexcept { return k_; }
  std::size_t size() const noexcept { return coeffs_.size(); }
  const MultiIndex& alpha(std::size_t i) const { return table_->at(i); }
  double coeff(std::size_t i) const { return coeffs_[i]; }
  double coeff(const MultiIndex& alpha) const;
  const CoeffSource& source(std::size_t i) const { return sources_[i]; }
  void set(std::size_t i, double value, CoeffSource source);
  void set(const MultiIndex& alpha, double value, CoeffSource source);

  double operator()(std::span<const double> x) const;
  double derivative(const MultiIndex& beta, std::span<const double> x) const;
  // Derivatives of every order <= order at x, in table order.
  void derivatives(std::span<const double> x, int order, std::span<double> out) const;
  // Highest order with a coefficient above tol in magnitude; -1 for the zero polynomial.
  int degree(double tol = 0) const;
  bool is_zero(double tol = 0) const { return degree(tol) < 0; }
  double max_abs_coeff() const;

  ScalarField as_field() const;

  friend MultiIndexPolynomial operator+(const MultiIndexPolynomial& a, const MultiIndexPolynomial& b);
  friend MultiIndexPolynomial operator-(const MultiIndexPolynomial& a, const MultiIndexPolynomial& b);

 private:
  int dim_;
  int k_;
  const MultiIndexTable* table_;
  std::vector<double> coeffs_;
  std::vector<CoeffSource> sources_;
};

}  // namespace growthlab
