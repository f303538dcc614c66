#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace growthlab {

enum class Domain { FullSpace, HalfLinePos, HalfLineNeg };

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int order);

double sphere_measure(int dim);  // N omega_N, the surface measure of S^{N-1}

struct SphereRule {
  int dim = 1;
  std::vector<double> nodes;  // dim * size() coordinates
  std::vector<double> weights;
  double measure = 2;  // sum of the weights
  bool monte_carlo = false;

  std::size_t size() const noexcept { return weights.size(); }
  std::span<const double> node(std::size_t i) const {
    return {nodes.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
  // Direction used for fields known to be radial.
  std::span<const double> pole() const { return node(pole_index); }
  std::size_t pole_index = 0;
};

SphereRule make_sphere_rule(int dim, Domain domain, int refine = 1, std::uint64_t seed = 20240611);

struct GridOptions {
  double r_max = 1e4;
  int panels = 64;
  int panels_per_decade = 8;
  int points_per_panel = 16;
  int sphere_refine = 1;
  std::uint64_t seed = 20240611;
  int extra_decades = 8;      // integration may continue to r_max * 10^extra_decades
  double tail_tol = 1e-10;    // relative size of a neglected geometric tail
  double growth_ratio = 1.05; // dyadic growth that signals divergence
  double significance = 1e-6; // growth below this fraction of the total is roundoff

  GridOptions refined() const;  // doubles radial and spherical resolution
  double r_min() const;
};

class PolarGrid {
 public:
  explicit PolarGrid(int dim, Domain domain = Domain::FullSpace, GridOptions options = {});

  int dim() const noexcept { return dim_; }
  Domain domain() const noexcept { return domain_; }
  const GridOptions& options() const noexcept { return options_; }
  const SphereRule& sphere() const noexcept { return sphere_; }
  double r_max() const noexcept { return options_.r_max; }
  // Base radial nodes and weights on [r_min, r_max].
  std::vector<std::pair<double, double>> radial_nodes() const;
  PolarGrid refined() const { return PolarGrid(dim_, domain_, options_.refined()); }

 private:
  int dim_;
  Domain domain_;
  GridOptions options_;
  SphereRule sphere_;
};

// Evaluates an integrand at a batch of radii.
using RadialBatch = std::function<void(std::span<const double> r, std::span<double> out)>;

struct RadialIntegral {
  double value = 0;
  bool divergent = false;
  double tail = 0;         // extrapolated remainder added beyond the last panel
  double inner_tail = 0;   // extrapolated remainder added near the origin
  double r_end = 0;        // outermost radius actually integrated
  bool noise_floor = false;
  bool at_origin = false;  // divergence located near r = 0
};

// Integrates a nonnegative radial integrand over (a, b), b may be infinite.
// Early termination and divergence tests only apply beyond `settle`, the radius
// after which the integrand is expected to be monotone.
RadialIntegral integrate_radial(const RadialBatch& g, double a, double b, const GridOptions& options,
                                double settle);

struct RadialMax {
  double value = 0;
  bool divergent = false;
  double at = 0;
};

RadialMax scan_radial_max(const RadialBatch& g, double a, double b, const GridOptions& options, double settle);

// Plain Gauss-Legendre quadrature of a signed integrand on [a, b] with `panels` equal panels.
double integrate_interval(const std::function<double(double)>& f, double a, double b, int panels, int order);

}  // namespace growthlab
