#include "growthlab/config.hpp"
#include "growthlab/errors.hpp"
#include "growthlab/field_library.hpp"
#include "growthlab/hardy1d.hpp"
#include "growthlab/parallel.hpp"
#include "growthlab/report.hpp"
#include "growthlab/verifier.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace growthlab;

namespace {

enum Exit { kOk = 0, kConfig = 1, kDivergentRhs = 2, kFailed = 3 };

struct Row {
  std::string field;
  std::string spec;
  InequalityCase c;
  std::string param, value;
  std::optional<Report> report;
  std::string verdict;
  int status = kOk;
  std::string message;
};

struct Common {
  std::string config;
  unsigned jobs = 1;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;
};

void add_common(CLI::App* cmd, Common& o) {
  cmd->add_option("--config", o.config, "suite configuration (JSON)")->required();
  cmd->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "seed for Monte Carlo sphere rules (N >= 4)");
  cmd->add_option("--out", o.out, "output file (default: config output.path or stdout)");
  cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

void run_row(Row& row, const GridOptions& grid) {
  try {
    InequalityCase c = row.c;
    if (row.param == "s") c.s = boost::rational_cast<double>(parse_rational(row.value));
    if (row.param == "q") c.q = ExtendedExponent::parse(row.value);
    row.c = c;
    ScalarField u = make_field(row.spec, c.N);
    if (c.domain != Domain::FullSpace) u.on(c.domain);
    if (row.param == "lambda") {
      double lambda = boost::rational_cast<double>(parse_rational(row.value));
      if (lambda != 1) u = dilate(u, lambda);
    }
    u.rename(row.field);
    row.report = verify_case(u, c, grid);
    row.verdict = row.report->verdict;
    if (row.verdict == "divergent_lhs") row.status = kFailed;
  } catch (const Error& e) {
    row.message = e.what();
    switch (e.code()) {
      case Errc::DivergentRHS:
        row.verdict = "divergent_rhs";
        row.status = kDivergentRhs;
        break;
      case Errc::ExcludedS:
        row.verdict = "excluded_s";
        row.status = row.param == "s" ? kOk : kConfig;
        break;
      case Errc::InadmissiblePQ:
        row.verdict = "inadmissible_q";
        row.status = row.param == "q" ? kOk : kConfig;
        break;
      default:
        row.verdict = "error:" + std::string(to_string(e.code()));
        row.status = kFailed;
    }
  } catch (const std::exception& e) {
    row.message = e.what();
    row.verdict = "error";
    row.status = kFailed;
  }
}

std::string render(const std::vector<Row>& rows, const std::string& format, bool sweep) {
  std::ostringstream os;
  if (format == "json") {
    Json arr = Json::array();
    for (const auto& r : rows) {
      Json j = r.report ? to_json(*r.report) : Json{{"case", to_json(r.c)}, {"field", r.field}};
      if (!r.report) j["verdict"] = r.verdict;
      if (!r.message.empty()) j["error"] = r.message;
      if (sweep) j["sweep"] = {{"param", r.param}, {"value", r.value}};
      arr.push_back(j);
    }
    os << arr.dump(2) << "\n";
    return os.str();
  }
  os << (sweep ? "param,value," : "") << csv_header() << "\n";
  for (const auto& r : rows) {
    if (sweep) os << r.param << "," << r.value << ",";
    os << (r.report ? csv_row(*r.report) : csv_row(r.field, r.c, r.verdict)) << "\n";
  }
  return os.str();
}

int emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return kOk;
  }
  std::ofstream f(path);
  if (!f) {
    std::cerr << "error: cannot write '" << path << "'\n";
    return kConfig;
  }
  f << text;
  return kOk;
}

int run_suite(const Common& o, std::optional<SweepSpec> sweep) {
  SuiteConfig cfg;
  try {
    cfg = load_config(o.config);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  }
  if (o.seed) cfg.grid.seed = *o.seed;
  if (!sweep) sweep = cfg.sweep;
  const bool is_scan = sweep.has_value();
  set_thread_count(o.jobs);

  std::vector<Row> rows;
  for (const auto& c : cfg.cases)
    for (const auto& f : cfg.fields) {
      if (!is_scan) {
        rows.push_back({f.name, f.spec, c, "", "", std::nullopt, "", kOk, ""});
        continue;
      }
      for (const auto& v : sweep->values) rows.push_back({f.name, f.spec, c, sweep->param, v, std::nullopt, "", kOk, ""});
    }
  parallel_for(rows.size(), [&](std::size_t i) { run_row(rows[i], cfg.grid); });

  int status = kOk;
  for (const auto& r : rows) {
    if (!r.message.empty() && r.status != kOk)
      std::cerr << r.field << " [" << r.c.str() << (r.param.empty() ? "" : " " + r.param + "=" + r.value)
                << "]: " << r.message << "\n";
    if (r.status == kConfig) status = kConfig;
    else if (r.status == kDivergentRhs && status != kConfig) status = kDivergentRhs;
    else if (r.status == kFailed && status == kOk) status = kFailed;
  }
  const std::string format = o.format.empty() ? cfg.output.format : o.format;
  const std::string path = o.out.empty() ? cfg.output.path : o.out;
  int written = emit(render(rows, format, is_scan), path);
  return written != kOk ? written : status;
}

int run_criterion(double s, const std::string& p_text, const std::string& q_text, int N, const std::string& format,
                  const std::string& out) {
  std::optional<ExtendedExponent> p, q;
  try {
    p = ExtendedExponent::parse(p_text);
    q = ExtendedExponent::parse(q_text);
    if (N < 1) throw Error(Errc::InvalidArgument, "N must be positive");
    if (p->is_infinite()) throw Error(Errc::InvalidArgument, "p must be finite");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  CriterionResult res;
  try {
    res = ok_criterion(s, *p, *q, N);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  AdmissibleInterval I = admissible_interval(1, *p, N);
  const bool admissible = I.contains(*q);
  std::ostringstream os;
  if (format == "json") {
    Json j;
    j["s"] = s;
    j["p"] = p->str();
    j["q"] = q->str();
    j["N"] = N;
    j["verdict"] = std::string(to_string(res.verdict));
    j["sup_estimate"] = format_double(res.sup_estimate);
    j["growth_small"] = res.growth_small;
    j["growth_large"] = res.growth_large;
    j["interval"] = I.str();
    j["admissible"] = admissible;
    Json prof = Json::array();
    for (const auto& pt : res.profile)
      prof.push_back({{"xi", pt.xi}, {"A", pt.A}, {"B", pt.B}, {"product", pt.product}});
    j["profile"] = prof;
    os << j.dump(2) << "\n";
  } else {
    os << "xi,A,B,product\n";
    for (const auto& pt : res.profile)
      os << format_double(pt.xi) << "," << format_double(pt.A) << "," << format_double(pt.B) << ","
         << format_double(pt.product) << "\n";
    os << "# verdict=" << to_string(res.verdict) << " sup_estimate=" << format_double(res.sup_estimate)
       << " interval=" << I.str() << " admissible=" << (admissible ? "true" : "false") << "\n";
  }
  return emit(os.str(), out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of weighted growth-transfer inequalities"};
  app.require_subcommand(1);

  Common verify_opts;
  auto* verify = app.add_subcommand("verify", "run every (field, case) pair of a suite");
  add_common(verify, verify_opts);

  Common scan_opts;
  std::string param, range;
  auto* scan = app.add_subcommand("scan", "sweep one parameter over every (field, case) pair");
  add_common(scan, scan_opts);
  scan->add_option("--param", param, "s, q or lambda")->check(CLI::IsMember({"s", "q", "lambda"}));
  scan->add_option("--range", range, "a:b:n or a comma-separated list");

  double s = 0;
  std::string p_text, q_text, crit_format = "csv", crit_out;
  int N = 0;
  auto* crit = app.add_subcommand("criterion", "A(xi)B(xi) admissibility profile for s < -1");
  crit->add_option("--s", s, "weight exponent s < -1")->required();
  crit->add_option("--p", p_text, "source exponent")->required();
  crit->add_option("--q", q_text, "target exponent, may be inf")->required();
  crit->add_option("--N", N, "dimension")->required();
  crit->add_option("--format", crit_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  crit->add_option("--out", crit_out, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfig;
  }

  if (*verify) return run_suite(verify_opts, std::nullopt);
  if (*scan) {
    std::optional<SweepSpec> sweep;
    if (!param.empty() || !range.empty()) {
      if (param.empty() || range.empty()) {
        std::cerr << "error: --param and --range go together\n";
        return kConfig;
      }
      try {
        sweep = SweepSpec{param, parse_range(range)};
      } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
      }
    } else {
      try {
        if (!load_config(scan_opts.config).sweep) {
          std::cerr << "error: scan needs --param/--range or a 'sweep' table in the config\n";
          return kConfig;
        }
      } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
      }
    }
    return run_suite(scan_opts, sweep);
  }
  return run_criterion(s, p_text, q_text, N, crit_format, crit_out);
}
