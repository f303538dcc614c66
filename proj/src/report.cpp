#include "growthlab/report.hpp"

#include <cmath>
#include <cstdio>

namespace growthlab {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

Json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

std::string_view domain_name(Domain d) {
  switch (d) {
    case Domain::FullSpace: return "full";
    case Domain::HalfLinePos: return "half+";
    case Domain::HalfLineNeg: return "half-";
  }
  return "full";
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

Json to_json(const MultiIndexPolynomial& pi) {
  Json coeffs = Json::array();
  for (std::size_t i = 0; i < pi.size(); ++i) {
    const CoeffSource& src = pi.source(i);
    Json c;
    c["alpha"] = pi.alpha(i).entries();
    c["value"] = number(pi.coeff(i));
    Json prov;
    prov["kind"] = std::string(to_string(src.kind));
    if (src.kind == Provenance::BallAverage || src.kind == Provenance::TaylorPoint) prov["x0"] = src.x0;
    if (src.kind == Provenance::BallAverage) prov["rho"] = src.rho;
    if (src.kind == Provenance::LimitAtInfinity) prov["residual"] = number(src.residual);
    c["provenance"] = prov;
    coeffs.push_back(c);
  }
  Json j;
  j["N"] = pi.dim();
  j["k"] = pi.k();
  j["coeffs"] = coeffs;
  return j;
}

Json to_json(const InequalityCase& c) {
  Json j;
  j["N"] = c.N;
  j["k"] = c.k;
  j["j"] = c.j;
  j["s"] = number(c.s);
  j["p"] = c.p.str();
  j["q"] = c.q.str();
  j["scale"] = std::string(to_string(c.scale));
  j["domain"] = std::string(domain_name(c.domain));
  return j;
}

Json to_json(const Report& r) {
  Json j;
  j["case"] = to_json(r.c);
  j["field"] = r.field;
  j["lhs"] = number(r.lhs);
  j["rhs"] = number(r.rhs);
  j["ratio"] = number(r.ratio);
  j["verdict"] = r.verdict;
  j["pi_u"] = r.pi ? to_json(*r.pi) : Json();
  Json decay = Json::array();
  for (const auto& d : r.decay_profile) decay.push_back({{"tau", d.tau}, {"value", number(d.value)}});
  j["decay_profile"] = decay;
  const Diagnostics& g = r.diagnostics;
  j["diagnostics"] = {{"lhs_tail", number(g.lhs_tail)},   {"rhs_tail", number(g.rhs_tail)},
                      {"lhs_r_end", number(g.lhs_r_end)}, {"rhs_r_end", number(g.rhs_r_end)},
                      {"noise_floor", g.noise_floor},     {"fit_residual", number(g.fit_residual)}};
  return j;
}

std::string csv_header() { return "field,N,k,j,s,p,q,scale,lhs,rhs,ratio,pi_degree,verdict"; }

namespace {

std::string case_columns(const std::string& field, const InequalityCase& c) {
  return csv_escape(field) + "," + std::to_string(c.N) + "," + std::to_string(c.k) + "," + std::to_string(c.j) + "," +
         format_double(c.s) + "," + c.p.str() + "," + c.q.str() + "," + std::string(to_string(c.scale));
}

}  // namespace

std::string csv_row(const Report& r) {
  int degree = r.pi ? r.pi->degree(1e-10 * std::max(1.0, r.pi->max_abs_coeff())) : -1;
  return case_columns(r.field, r.c) + "," + format_double(r.lhs) + "," + format_double(r.rhs) + "," +
         format_double(r.ratio) + "," + std::to_string(degree) + "," + r.verdict;
}

std::string csv_row(const std::string& field, const InequalityCase& c, const std::string& verdict) {
  return case_columns(field, c) + ",nan,nan,nan,-1," + verdict;
}

}  // namespace growthlab
