#include "growthlab/config.hpp"

#include "growthlab/errors.hpp"
#include "growthlab/field_library.hpp"
#include "growthlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace growthlab {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw Error(Errc::Config, path + ": " + msg); }

void only_keys(const Json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (auto a : allowed) ok = ok || it.key() == a;
    if (!ok) fail(path, "unknown key '" + it.key() + "'");
  }
}

double real(const Json& v, const std::string& path) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return boost::rational_cast<double>(parse_rational(v.get<std::string>()));
    } catch (const std::exception& e) {
      fail(path, e.what());
    }
  }
  fail(path, "expected a number or a rational string");
}

int integer(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<int>();
}

ExtendedExponent exponent(const Json& v, const std::string& path) {
  try {
    if (v.is_number_integer()) return ExtendedExponent(v.get<std::int64_t>());
    if (v.is_string()) return ExtendedExponent::parse(v.get<std::string>());
    if (v.is_number()) return ExtendedExponent::parse(format_double(v.get<double>()));
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
  fail(path, "expected an exponent (number, \"a/b\" or \"inf\")");
}

std::vector<double> point(const Json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(real(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

PiOptions pi_options(const Json& v, const std::string& path) {
  only_keys(v, path, {"strategy", "center", "rho", "point", "levels", "r0"});
  PiOptions o;
  if (v.contains("strategy")) {
    std::string s = v["strategy"].is_string() ? v["strategy"].get<std::string>() : "";
    if (s == "auto") o.strategy = PiStrategy::Auto;
    else if (s == "ball") o.strategy = PiStrategy::BallAverages;
    else if (s == "taylor") o.strategy = PiStrategy::Taylor;
    else fail(path + ".strategy", "expected auto, ball or taylor");
  }
  if (v.contains("center")) o.ball.center = point(v["center"], path + ".center");
  if (v.contains("rho")) {
    o.ball.rho = real(v["rho"], path + ".rho");
    if (!(o.ball.rho > 0)) fail(path + ".rho", "must be positive");
  }
  if (v.contains("point")) o.taylor_point = point(v["point"], path + ".point");
  if (v.contains("levels")) o.levels = integer(v["levels"], path + ".levels");
  if (v.contains("r0")) {
    o.limit.r0 = real(v["r0"], path + ".r0");
    if (!(o.limit.r0 > 0)) fail(path + ".r0", "must be positive");
  }
  return o;
}

InequalityCase parse_case(const Json& v, const std::string& path) {
  only_keys(v, path, {"N", "k", "j", "s", "p", "q", "scale", "domain", "pi"});
  for (const char* key : {"N", "s", "p", "q"})
    if (!v.contains(key)) fail(path, std::string("missing key '") + key + "'");
  InequalityCase c;
  c.N = integer(v["N"], path + ".N");
  c.k = v.contains("k") ? integer(v["k"], path + ".k") : 1;
  c.j = v.contains("j") ? integer(v["j"], path + ".j") : c.k;
  c.s = real(v["s"], path + ".s");
  c.p = exponent(v["p"], path + ".p");
  c.q = exponent(v["q"], path + ".q");
  if (v.contains("scale")) {
    try {
      c.scale = parse_scale(v["scale"].is_string() ? v["scale"].get<std::string>() : "");
    } catch (const Error& e) {
      fail(path + ".scale", e.what());
    }
  }
  if (v.contains("domain")) {
    std::string d = v["domain"].is_string() ? v["domain"].get<std::string>() : "";
    if (d == "full") c.domain = Domain::FullSpace;
    else if (d == "half+") c.domain = Domain::HalfLinePos;
    else if (d == "half-") c.domain = Domain::HalfLineNeg;
    else fail(path + ".domain", "expected full, half+ or half-");
  }
  if (v.contains("pi")) c.pi = pi_options(v["pi"], path + ".pi");
  try {
    c.validate();
  } catch (const Error& e) {
    fail(path, e.what());
  }
  return c;
}

GridOptions parse_grid(const Json& v, const std::string& path) {
  only_keys(v, path, {"r_max", "panels", "panels_per_decade", "points_per_panel", "sphere_refine", "seed"});
  GridOptions g;
  if (v.contains("r_max")) g.r_max = real(v["r_max"], path + ".r_max");
  if (v.contains("panels")) g.panels = integer(v["panels"], path + ".panels");
  if (v.contains("panels_per_decade")) g.panels_per_decade = integer(v["panels_per_decade"], path + ".panels_per_decade");
  if (v.contains("points_per_panel")) g.points_per_panel = integer(v["points_per_panel"], path + ".points_per_panel");
  if (v.contains("sphere_refine")) g.sphere_refine = integer(v["sphere_refine"], path + ".sphere_refine");
  if (v.contains("seed")) {
    if (!v["seed"].is_number_unsigned()) fail(path + ".seed", "expected a nonnegative integer");
    g.seed = v["seed"].get<std::uint64_t>();
  }
  if (!(g.r_max > 0) || g.panels < 1 || g.panels_per_decade < 1 || g.points_per_panel < 1 || g.sphere_refine < 1)
    fail(path, "grid values must be positive");
  try {
    gauss_legendre(g.points_per_panel);
  } catch (const std::exception& e) {
    fail(path + ".points_per_panel", e.what());
  }
  return g;
}

// Grid points a + (b-a) i/(n-1) rounded to 12 significant digits, in plain decimal
// notation, so that exact-decimal parsing of s, q and lambda sees 0.1 rather than 0.1000000000000001.
std::string range_point(double v) {
  if (v == 0) return "0";
  const int digits = std::clamp(11 - static_cast<int>(std::floor(std::log10(std::abs(v)))), 0, 15);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string s(buf);
  if (s.find('.') != std::string::npos) {
    s.erase(s.find_last_not_of('0') + 1);
    if (s.back() == '.') s.pop_back();
  }
  return s == "-0" ? "0" : s;
}

}  // namespace

std::vector<std::string> parse_range(std::string_view text) {
  std::string t(text);
  std::vector<std::string> out;
  if (t.find(':') != std::string::npos) {
    double a = 0, b = 0;
    int n = 0;
    char tail = 0;
    if (std::sscanf(t.c_str(), "%lf:%lf:%d%c", &a, &b, &n, &tail) != 3 || n < 1)
      throw Error(Errc::Config, "range '" + t + "' must look like a:b:n");
    for (int i = 0; i < n; ++i) out.push_back(range_point(n == 1 ? a : a + (b - a) * i / (n - 1)));
    return out;
  }
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto l = item.find_first_not_of(" \t"), r = item.find_last_not_of(" \t");
    if (l == std::string::npos) throw Error(Errc::Config, "empty entry in list '" + t + "'");
    out.push_back(item.substr(l, r - l + 1));
  }
  if (out.empty()) throw Error(Errc::Config, "empty value list");
  return out;
}

SuiteConfig parse_config(std::string_view text, const std::string& source) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(Errc::Config, source + ": " + e.what());
  }
  only_keys(doc, source, {"fields", "cases", "sweep", "output", "grid"});
  SuiteConfig cfg;
  if (!doc.contains("fields") || !doc["fields"].is_array() || doc["fields"].empty())
    fail(source, "'fields' must be a nonempty array");
  if (!doc.contains("cases") || !doc["cases"].is_array() || doc["cases"].empty())
    fail(source, "'cases' must be a nonempty array");
  for (std::size_t i = 0; i < doc["cases"].size(); ++i)
    cfg.cases.push_back(parse_case(doc["cases"][i], "cases[" + std::to_string(i) + "]"));
  std::set<int> dims;
  for (const auto& c : cfg.cases) dims.insert(c.N);
  std::set<std::string> names;
  for (std::size_t i = 0; i < doc["fields"].size(); ++i) {
    std::string path = "fields[" + std::to_string(i) + "]";
    const Json& f = doc["fields"][i];
    FieldSpec spec;
    if (f.is_string()) {
      spec.spec = f.get<std::string>();
      spec.name = spec.spec;
    } else {
      only_keys(f, path, {"name", "spec"});
      if (!f.contains("spec") || !f["spec"].is_string()) fail(path, "missing string key 'spec'");
      spec.spec = f["spec"].get<std::string>();
      spec.name = f.contains("name") && f["name"].is_string() ? f["name"].get<std::string>() : spec.spec;
    }
    if (!names.insert(spec.name).second) fail(path, "duplicate field name '" + spec.name + "'");
    for (int N : dims) {
      try {
        make_field(spec.spec, N);
      } catch (const Error& e) {
        fail(path + ".spec", std::string(e.what()) + " (N = " + std::to_string(N) + ")");
      }
    }
    cfg.fields.push_back(spec);
  }
  if (doc.contains("sweep")) {
    const Json& s = doc["sweep"];
    only_keys(s, "sweep", {"param", "range", "values"});
    SweepSpec sw;
    if (!s.contains("param") || !s["param"].is_string()) fail("sweep", "missing string key 'param'");
    sw.param = s["param"].get<std::string>();
    if (sw.param != "s" && sw.param != "q" && sw.param != "lambda") fail("sweep.param", "expected s, q or lambda");
    if (s.contains("range") == s.contains("values")) fail("sweep", "give exactly one of 'range' or 'values'");
    try {
      if (s.contains("range")) {
        if (!s["range"].is_string()) fail("sweep.range", "expected \"a:b:n\"");
        sw.values = parse_range(s["range"].get<std::string>());
      } else {
        if (!s["values"].is_array()) fail("sweep.values", "expected an array");
        for (const auto& v : s["values"]) sw.values.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      }
    } catch (const Error& e) {
      if (e.code() == Errc::Config) throw;
      fail("sweep", e.what());
    }
    cfg.sweep = sw;
  }
  if (doc.contains("output")) {
    const Json& o = doc["output"];
    only_keys(o, "output", {"format", "path"});
    if (o.contains("format")) {
      if (!o["format"].is_string()) fail("output.format", "expected csv or json");
      cfg.output.format = o["format"].get<std::string>();
      if (cfg.output.format != "csv" && cfg.output.format != "json") fail("output.format", "expected csv or json");
    }
    if (o.contains("path")) {
      if (!o["path"].is_string()) fail("output.path", "expected a string");
      cfg.output.path = o["path"].get<std::string>();
    }
  }
  if (doc.contains("grid")) cfg.grid = parse_grid(doc["grid"], "grid");
  return cfg;
}

SuiteConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Config, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace growthlab
