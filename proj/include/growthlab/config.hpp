#pragma once

#include "growthlab/quadrature.hpp"
#include "growthlab/verifier.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace growthlab {

struct FieldSpec {
  std::string name;  // label used in reports
  std::string spec;  // registry expression, instantiated per case dimension
};

struct SweepSpec {
  std::string param;  // s, q or lambda
  std::vector<std::string> values;  // kept as text so q stays exact
};

struct OutputSpec {
  std::string format = "csv";
  std::string path;  // empty writes to stdout
};

struct SuiteConfig {
  std::vector<FieldSpec> fields;
  std::vector<InequalityCase> cases;
  std::optional<SweepSpec> sweep;
  OutputSpec output;
  GridOptions grid;
};

// JSON document; syntax errors carry line and column, semantic errors the key path.
// Every case is validated and every field instantiated for each case dimension.
// All failures raise Errc::Config.
SuiteConfig parse_config(std::string_view text, const std::string& source = "config");
SuiteConfig load_config(const std::string& path);

// "a:b:n" (n evenly spaced values, both ends included) or "v1,v2,...".
std::vector<std::string> parse_range(std::string_view text);

}  // namespace growthlab
