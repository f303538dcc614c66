#pragma once

#include "growthlab/exponents.hpp"
#include "growthlab/field.hpp"
#include "growthlab/polynomial.hpp"
#include "growthlab/projection.hpp"
#include "growthlab/quadrature.hpp"
#include "growthlab/weighted_norm.hpp"

#include <optional>
#include <string>
#include <vector>

namespace growthlab {

struct InequalityCase {
  int N = 3;
  int k = 1;
  int j = 1;
  double s = -2;
  ExtendedExponent p = 2;
  ExtendedExponent q = 2;
  Scale scale = Scale::ShiftedPower;
  Domain domain = Domain::FullSpace;
  PiOptions pi;

  // Throws ExcludedS, DimensionOne or InadmissiblePQ when the hypotheses fail.
  void validate() const;
  std::string str() const;
};

struct DecayPoint {
  double tau;
  double value;
};

struct Diagnostics {
  double lhs_tail = 0;  // geometric tails added, in q-th (resp. p-th) power units
  double rhs_tail = 0;
  double lhs_r_end = 0;
  double rhs_r_end = 0;
  bool noise_floor = false;
  double fit_residual = 0;  // largest limit-extrapolation residual among pi coefficients
};

struct Report {
  InequalityCase c;
  std::string field;
  double lhs = 0;
  double rhs = 0;
  double ratio = 0;  // NaN when vacuous
  bool vacuous = false;
  std::optional<MultiIndexPolynomial> pi;
  std::vector<DecayPoint> decay_profile;
  Diagnostics diagnostics;
  std::string verdict;  // ok, vacuous, divergent_lhs
};

Report verify_case(const ScalarField& u, const InequalityCase& c, const GridOptions& grid = {});

struct ConstantEstimate {
  double value = 0;
  std::vector<Report> reports;  // effective members, in family order
  std::vector<std::string> skipped;
};
// Largest ratio over the family; members that fail or are vacuous are skipped.
ConstantEstimate estimate_constant(const std::vector<ScalarField>& family, const InequalityCase& c,
                                   const GridOptions& grid = {});

struct DecayResult {
  std::vector<DecayPoint> profile;
  bool decaying = false;  // last three values strictly decrease, or vanish
};
// Annulus maxima of |x|^{-(s+j)} |grad^{k-j}(u - pi_u)| for tau = 2^m, m = 0..12.
DecayResult decay_check(const ScalarField& u, const InequalityCase& c, const GridOptions& grid = {});

// Pure-power inequality for mean-zero u:
// || |x|^{(a+N)/p - N/q} u ||_q <= C || |x|^{1+a/p} grad u ||_p.
Report ckn_split_verify(const ScalarField& u, double a, const ExtendedExponent& p, const ExtendedExponent& q,
                        const GridOptions& grid = {});

struct SplitResult {
  std::optional<Report> radial;    // empty when the part vanishes
  std::optional<Report> meanzero;
  double grad_norm = 0;
  double grad_norm_sym = 0;
  bool contraction_ok = false;
};
SplitResult symmetrization_split(const ScalarField& u, const InequalityCase& c, const GridOptions& grid = {});

// verify_case on u(lambda x) for each lambda: the same as the weight (lambda + |x|) on u.
std::vector<Report> scaling_experiment(const ScalarField& u, const InequalityCase& c,
                                       const std::vector<double>& lambdas, const GridOptions& grid = {});

struct EmbeddingReport {
  bool in_Wkqp = false;
  bool in_Wkpp = false;
  double norm_u_q = 0;     // ||u||_{L^q_{s+k}}
  double norm_u_p = 0;     // ||u||_{L^p_{s+k}}
  double seminorm = 0;     // || |grad^k u| ||_{L^p_s}
  double full_norm = 0;    // ||u||_{L^p_{s+k}} + seminorm
  double norm_ratio = 0;   // full_norm / seminorm
  std::vector<double> intermediate;  // ||grad^{k-j} u||_{L^p_{s+j}} / full_norm, j = 1..k-1
  bool pi_membership = false;
};
EmbeddingReport embedding_report(const ScalarField& u, int k, double s, const ExtendedExponent& p,
                                 const ExtendedExponent& q, const GridOptions& grid = {});

// verify_case in the exponential scale; s = 0 is rejected.
Report exp_verify(const ScalarField& u, const InequalityCase& c, const GridOptions& grid = {});

}  // namespace growthlab
