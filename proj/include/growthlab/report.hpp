#pragma once

#include "growthlab/polynomial.hpp"
#include "growthlab/verifier.hpp"

#include <json.hpp>

#include <string>

namespace growthlab {

using Json = nlohmann::ordered_json;

// %.17g, with inf, -inf and nan spelled out.
std::string format_double(double v);

Json to_json(const MultiIndexPolynomial& pi);
Json to_json(const InequalityCase& c);
Json to_json(const Report& r);

// field,N,k,j,s,p,q,scale,lhs,rhs,ratio,pi_degree,verdict
std::string csv_header();
std::string csv_row(const Report& r);
// A row for a (field, case) pair that produced no report.
std::string csv_row(const std::string& field, const InequalityCase& c, const std::string& verdict);

}  // namespace growthlab
