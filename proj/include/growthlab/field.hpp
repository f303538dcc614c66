#pragma once

#include "growthlab/multi_index.hpp"
#include "growthlab/quadrature.hpp"

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace growthlab {

using Evaluator = std::function<double(std::span<const double>)>;
// Fills out[i] with the derivative for the i-th multi-index of
// MultiIndexTable::get(dim, kMaxOracleOrder), for every i below size_up_to(order).
using DerivativeOracle = std::function<void(std::span<const double> x, int order, std::span<double> out)>;

struct FieldFlags {
  bool radial = false;
  std::optional<double> compact_support;       // u = 0 for |x| >= radius
  std::optional<double> vanishes_near_origin;  // u = 0 for |x| < radius
};

struct FdOptions {
  double h0 = 0;  // 0 selects the order-dependent default
};

class ScalarField {
 public:
  ScalarField(int dim, Evaluator eval, std::string name = "field");

  int dim() const noexcept { return dim_; }
  double operator()(std::span<const double> x) const { return eval_(x); }
  const std::string& name() const noexcept { return name_; }
  ScalarField& rename(std::string name) {
    name_ = std::move(name);
    return *this;
  }

  ScalarField& with_oracle(DerivativeOracle oracle, int max_order);
  bool has_oracle() const noexcept { return static_cast<bool>(oracle_); }
  int oracle_order() const noexcept { return oracle_ ? oracle_order_ : -1; }

  const FieldFlags& flags() const noexcept { return flags_; }
  FieldFlags& flags() noexcept { return flags_; }
  Domain domain() const noexcept { return domain_; }
  ScalarField& on(Domain d);
  // Radius beyond which the field has no new features (used to delay tail truncation).
  double extent() const noexcept { return extent_; }
  ScalarField& with_extent(double r) {
    extent_ = r;
    return *this;
  }

  // All derivatives of order <= `order` at x in table order. Uses the oracle where it
  // reaches, nested central differences otherwise.
  void derivatives(std::span<const double> x, int order, std::span<double> out, FdOptions fd = {}) const;
  double partial(const MultiIndex& alpha, std::span<const double> x, FdOptions fd = {}) const;
  // Central-difference derivative regardless of any oracle.
  double fd_partial(const MultiIndex& alpha, std::span<const double> x, FdOptions fd = {}) const;
  const MultiIndexTable& table() const noexcept { return *table_; }

 private:
  int dim_;
  const MultiIndexTable* table_;
  Evaluator eval_;
  DerivativeOracle oracle_;
  int oracle_order_ = -1;
  FieldFlags flags_;
  Domain domain_ = Domain::FullSpace;
  double extent_ = 16;
  std::string name_;
};

double default_fd_step(int order);

// Field arithmetic. Oracles propagate (Leibniz rule for products).
ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double c, const ScalarField& a);
ScalarField operator*(const ScalarField& a, const ScalarField& b);
ScalarField constant_field(int dim, double c);
// u_lambda(x) = u(lambda x)
ScalarField dilate(const ScalarField& u, double lambda);

// Pointwise symmetric tensor of order k, stored in multi-index order.
class TensorField {
 public:
  using Fill = std::function<void(std::span<const double> x, std::span<double> out)>;
  TensorField(int dim, int order, Fill fill, bool radial, double extent);

  int dim() const noexcept { return dim_; }
  int order() const noexcept { return order_; }
  std::size_t entries() const noexcept { return alphas_.size(); }
  const std::vector<MultiIndex>& indices() const noexcept { return alphas_; }
  bool radial() const noexcept { return radial_; }
  double extent() const noexcept { return extent_; }
  void values(std::span<const double> x, std::span<double> out) const { fill_(x, out); }
  // Frobenius norm of the full symmetric tensor: sum over |alpha| = k of (k!/alpha!) T_alpha^2.
  double magnitude(std::span<const double> x) const;

 private:
  int dim_;
  int order_;
  Fill fill_;
  bool radial_;
  double extent_;
  std::vector<MultiIndex> alphas_;
  std::vector<double> multiplicity_;
};

TensorField gradient_k(const ScalarField& u, int k, FdOptions fd = {});
// Samples T at every node of the grid (radial nodes times sphere nodes).
struct SampledTensor {
  std::vector<double> radii;
  std::size_t sphere_size = 0;
  std::size_t entries = 0;
  std::vector<double> values;  // [radius][sphere node][entry]
};
SampledTensor sample(const TensorField& T, const PolarGrid& grid);

double spherical_mean(const ScalarField& u, double r, const SphereRule& sphere);
double spherical_mean(const ScalarField& u, double r, const PolarGrid& grid);
ScalarField radial_symmetrize(const ScalarField& u, const SphereRule& sphere);
ScalarField radial_symmetrize(const ScalarField& u);

struct Weight;
struct MollifyOptions {
  int radial_points = 8;  // Gauss points across the mollifier radius
  int sphere_points = 0;  // 0 picks a coarse default per dimension
};
double mollifier_profile(double r2);  // exp(-1/(1-|z|^2)) inside the unit ball
// ||w (theta_n * u - u)||_p for each n, with the mollifier normalized on its own quadrature.
std::vector<double> mollify_error(const ScalarField& u, const Weight& w, double p, std::span<const int> scales,
                                  const PolarGrid& grid, MollifyOptions options = {});
ScalarField mollify(const ScalarField& u, int n, MollifyOptions options = {});

double annulus_max(const ScalarField& u, double tau, int resolution = 1);
double annulus_max(const std::function<double(std::span<const double>)>& f, int dim, double tau, int resolution = 1);

}  // namespace growthlab
