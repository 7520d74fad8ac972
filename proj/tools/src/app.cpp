#include "minl_cli/app.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "minl/dilation.hpp"
#include "minl/errors.hpp"
#include "minl_cli/state_file.hpp"
#include "minl_cli/suites.hpp"

namespace minl::cli {

namespace {

using nlohmann::json;

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
  return buf;
}

// Rounded to 12 significant digits; non-finite values become null.
json jnum(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::strtod(num(x).c_str(), nullptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

Dims parse_dims(const std::string& text) {
  Dims dims;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    char* end = nullptr;
    const long v = std::strtol(part.c_str(), &end, 10);
    if (part.empty() || *end != '\0' || v < 1) {
      throw ValidationError("--dims: expected positive integers joined by 'x', got '" + text + "'");
    }
    dims.push_back(static_cast<std::size_t>(v));
  }
  if (dims.empty()) throw ValidationError("--dims: empty");
  return dims;
}

std::vector<double> parse_range(const std::string& text, const std::string& flag) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ':')) {
    char* end = nullptr;
    const double v = std::strtod(part.c_str(), &end);
    if (part.empty() || *end != '\0' || !std::isfinite(v)) {
      throw ValidationError(flag + ": expected START[:STOP:COUNT], got '" + text + "'");
    }
    parts.push_back(v);
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3 || parts[2] < 1 || parts[2] != std::floor(parts[2])) {
    throw ValidationError(flag + ": expected START[:STOP:COUNT], got '" + text + "'");
  }
  const auto n = static_cast<std::size_t>(parts[2]);
  std::vector<double> values;
  for (std::size_t k = 0; k < n; ++k) {
    values.push_back(n == 1 ? parts[0]
                            : parts[0] + (parts[1] - parts[0]) * static_cast<double>(k) /
                                             static_cast<double>(n - 1));
  }
  return values;
}

// Destination for a command's document: --out path or stdout.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
      if (!*file_) throw OutputError("cannot write to '" + path + "'");
      out_ = file_.get();
    }
  }
  std::ostream& stream() { return *out_; }
  void close() {
    if (file_) {
      file_->close();
      if (!*file_) throw OutputError("write to output file failed");
    }
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* out_;
};

struct OptimizerFlags {
  OptimizerConfig cfg;
  void add(CLI::App* cmd) {
    cmd->add_option("--restarts", cfg.restarts, "Ascent restarts")->capture_default_str();
    cmd->add_option("--max-iters", cfg.max_iters, "Iterations per restart")->capture_default_str();
    cmd->add_option("--cluster-tol", cfg.cluster_tol, "Eigenvalue clustering tolerance for rho_B")
        ->capture_default_str();
  }
};

json report_json(const OptimizationReport& r) {
  json trace = json::array();
  for (double v : r.objective_trace) trace.push_back(jnum(v));
  return {{"value", jnum(r.value)},
          {"converged", r.converged},
          {"exhaustive", r.exhaustive},
          {"lower_bound_only", r.lower_bound_only},
          {"iterations", r.iterations},
          {"evaluations", r.evaluations},
          {"objective_trace", trace}};
}

std::string diagnostics(const OptimizationReport& r) {
  std::string s = r.exhaustive ? "exhaustive" : (r.converged ? "converged" : "not converged");
  if (r.lower_bound_only) s += ", lower bound";
  s += ", " + std::to_string(r.objective_trace.size()) + " restarts, " +
       std::to_string(r.iterations) + " iterations";
  return s;
}

// ---- compute ---------------------------------------------------------------

struct ComputeArgs {
  std::string state;
  std::string measure = "both";
  std::string format = "text";
  std::string out;
  OptimizerFlags opt;
};

void compute(const ComputeArgs& a, std::ostream& stdout_) {
  Sink sink(a.out, stdout_);
  const DensityMatrix rho = read_state_file(a.state);
  if (rho.arity() != 2) {
    throw DimensionError("compute: expected 2 subsystems, got " + std::to_string(rho.arity()));
  }
  const bool want_re = a.measure != "geo";
  const bool want_geo = a.measure != "re";
  std::optional<OptimizationReport> re, geo;
  if (want_re) re = n_re(rho, a.opt.cfg);
  if (want_geo) geo = n_geo(rho, a.opt.cfg);
  const double s_b = entropy(rho.reduced({1}));
  const double mi = mutual_information(rho);
  const double chi =
      re ? side_information(rho, re->measurement) : min_side_information(rho, a.opt.cfg).chi;

  std::ostream& os = sink.stream();
  if (a.format == "json") {
    json doc = {{"dims", rho.dims()},
                {"s_b", jnum(s_b)},
                {"mutual_information", jnum(mi)},
                {"min_side_information", jnum(chi)}};
    doc["n_re"] = re ? report_json(*re) : json(nullptr);
    doc["n_geo"] = geo ? report_json(*geo) : json(nullptr);
    os << doc.dump(2) << "\n";
  } else if (a.format == "csv") {
    os << "n_re,n_geo,s_b,mutual_information,min_side_information,n_re_converged,n_geo_converged\n";
    os << (re ? num(re->value) : "") << "," << (geo ? num(geo->value) : "") << "," << num(s_b)
       << "," << num(mi) << "," << num(chi) << ","
       << (re ? (re->converged ? "true" : "false") : "") << ","
       << (geo ? (geo->converged ? "true" : "false") : "") << "\n";
  } else {
    std::string dims;
    for (std::size_t d : rho.dims()) dims += (dims.empty() ? "" : "x") + std::to_string(d);
    os << "state                 " << dims << "\n";
    if (re) os << "N_RE                  " << num(re->value) << "  (" << diagnostics(*re) << ")\n";
    if (geo) os << "N_G                   " << num(geo->value) << "  (" << diagnostics(*geo) << ")\n";
    os << "S(rho_B) bound        " << num(s_b) << "\n";
    os << "mutual information    " << num(mi) << "\n";
    os << "min side information  " << num(chi) << "\n";
  }
  sink.close();
}

// ---- scan ------------------------------------------------------------------

struct ScanArgs {
  std::string family;
  std::string p = "0:1:11";
  std::string c1 = "-1:1:5";
  std::string c2 = "-1:1:5";
  std::string c3 = "-1:1:5";
  std::string c = "0.1:0.9:9";
  bool special = false;
  std::string format = "csv";
  std::string out;
  std::uint64_t seed = 0;
  OptimizerFlags opt;
};

struct ScanRow {
  std::vector<double> params;
  bool valid = true;
  double closed = 0.0, numeric = 0.0, geo = 0.0, s_b = 0.0;
};

void scan(const ScanArgs& a, std::ostream& stdout_) {
  Sink sink(a.out, stdout_);
  std::vector<std::string> names;
  std::vector<std::pair<std::vector<double>, BellDiagonalParams>> points;
  if (a.family == "werner") {
    names = {"p", "c1", "c2", "c3"};
    for (double p : parse_range(a.p, "--p")) {
      const BellDiagonalParams c = BellDiagonalParams::werner(p);
      points.push_back({{p, c.c1, c.c2, c.c3}, c});
    }
  } else if (a.special) {
    names = {"c", "c1", "c2", "c3"};
    for (double x : parse_range(a.c, "--c")) points.push_back({{x, 1.0, -x, x}, {1.0, -x, x}});
  } else {
    names = {"c1", "c2", "c3"};
    for (double x : parse_range(a.c1, "--c1")) {
      for (double y : parse_range(a.c2, "--c2")) {
        for (double z : parse_range(a.c3, "--c3")) points.push_back({{x, y, z}, {x, y, z}});
      }
    }
  }

  std::vector<ScanRow> rows;
  for (std::size_t i = 0; i < points.size(); ++i) {
    ScanRow row;
    row.params = points[i].first;
    const BellDiagonalParams& c = points[i].second;
    try {
      c.validate();
    } catch (const ValidationError&) {
      row.valid = false;
      rows.push_back(row);
      continue;
    }
    OptimizerConfig cfg = a.opt.cfg;
    cfg.seed = a.seed + i;
    const DensityMatrix rho = bell_diagonal(c);
    row.closed = n_re_bell_diagonal(c);
    row.numeric = n_re(rho, cfg).value;
    row.geo = n_geo(rho, cfg).value;
    row.s_b = entropy(rho.reduced({1}));
    rows.push_back(row);
  }

  std::ostream& os = sink.stream();
  if (a.format == "json") {
    json arr = json::array();
    for (const ScanRow& r : rows) {
      json j;
      for (std::size_t k = 0; k < names.size(); ++k) j[names[k]] = jnum(r.params[k]);
      j["n_re_closed_form"] = r.valid ? jnum(r.closed) : json(nullptr);
      j["n_re_numeric"] = r.valid ? jnum(r.numeric) : json(nullptr);
      j["n_geo_numeric"] = r.valid ? jnum(r.geo) : json(nullptr);
      j["s_b_bound"] = r.valid ? jnum(r.s_b) : json(nullptr);
      j["abs_gap"] = r.valid ? jnum(std::abs(r.closed - r.numeric)) : json(nullptr);
      j["reason"] = r.valid ? "" : "positivity";
      arr.push_back(std::move(j));
    }
    os << json{{"family", a.family}, {"rows", arr}}.dump(2) << "\n";
  } else {
    for (const std::string& n : names) os << n << ",";
    os << "n_re_closed_form,n_re_numeric,n_geo_numeric,s_b_bound,abs_gap,reason\n";
    for (const ScanRow& r : rows) {
      for (double p : r.params) os << num(p) << ",";
      if (r.valid) {
        os << num(r.closed) << "," << num(r.numeric) << "," << num(r.geo) << "," << num(r.s_b)
           << "," << num(std::abs(r.closed - r.numeric)) << ",\n";
      } else {
        os << ",,,,,positivity\n";
      }
    }
  }
  sink.close();
}

// ---- verify ----------------------------------------------------------------

struct VerifyArgs {
  std::string suite;
  std::optional<std::size_t> samples;
  std::uint64_t seed = 0;
  std::string dims;
  std::size_t grid_resolution = 400;
  std::string format = "text";
  std::string out;
  OptimizerFlags opt;
};

int verify(const VerifyArgs& a, std::ostream& stdout_) {
  Sink sink(a.out, stdout_);
  SuiteOptions o;
  o.samples = a.samples;
  o.seed = a.seed;
  if (!a.dims.empty()) o.dims = parse_dims(a.dims);
  o.optimizer = a.opt.cfg;
  o.grid_resolution = a.grid_resolution;
  const SuiteReport r = run_suite(a.suite, o);

  std::ostream& os = sink.stream();
  if (a.format == "json") {
    json checks = json::array();
    for (const CheckSummary& c : r.checks) {
      checks.push_back({{"name", c.name},
                        {"anchor", c.anchor},
                        {"samples", c.samples},
                        {"tolerance", jnum(c.tolerance)},
                        {"max_violation", jnum(c.max_violation)},
                        {"failures", c.failures}});
    }
    json failures = json::array();
    for (const SuiteFailure& f : r.failures) {
      failures.push_back({{"seed", f.seed}, {"check", f.check}, {"violation", jnum(f.violation)}});
    }
    os << json{{"suite", r.suite},
               {"samples", r.samples},
               {"passed", r.passed()},
               {"checks", checks},
               {"failures", failures},
               {"notes", r.notes}}
              .dump(2)
       << "\n";
  } else if (a.format == "csv") {
    os << "check,anchor,samples,tolerance,max_violation,failures\n";
    for (const CheckSummary& c : r.checks) {
      os << c.name << "," << csv_field(c.anchor) << "," << c.samples << "," << num(c.tolerance)
         << "," << num(c.max_violation) << "," << c.failures << "\n";
    }
  } else {
    os << "suite " << r.suite << ": " << r.samples << " samples, " << r.failures.size()
       << " failures, " << num(r.elapsed_seconds) << " s\n";
    for (const CheckSummary& c : r.checks) {
      os << "  " << (c.failures == 0 ? "ok  " : "FAIL") << " " << c.name << " [" << c.anchor
         << "] samples=" << c.samples << " max_violation=" << num(c.max_violation)
         << " tol=" << num(c.tolerance) << "\n";
    }
    for (const SuiteFailure& f : r.failures) {
      os << "  failure " << f.check << " seed=" << f.seed << " violation=" << num(f.violation)
         << "\n";
    }
    for (const std::string& n : r.notes) os << "  note: " << n << "\n";
  }
  sink.close();
  return r.passed() ? kOk : kSuiteFailed;
}

// ---- gen -------------------------------------------------------------------

struct GenArgs {
  std::string kind;
  std::vector<double> params;
  std::string dims;
  std::optional<std::size_t> rank;
  std::uint64_t seed = 0;
  std::string out;
};

void require_params(const GenArgs& a, std::size_t n) {
  if (a.params.size() != n) {
    throw ValidationError("gen " + a.kind + ": expected " + std::to_string(n) +
                          " parameters, got " + std::to_string(a.params.size()));
  }
}

void gen(const GenArgs& a, std::ostream& stdout_) {
  Sink sink(a.out, stdout_);
  const auto dims_or = [&a](const char* fallback) {
    return parse_dims(a.dims.empty() ? fallback : a.dims);
  };
  std::optional<DensityMatrix> rho;
  if (a.kind == "bell-diagonal") {
    require_params(a, 3);
    rho = bell_diagonal({a.params[0], a.params[1], a.params[2]});
  } else if (a.kind == "werner") {
    require_params(a, 1);
    rho = bell_diagonal(BellDiagonalParams::werner(a.params[0]));
  } else if (a.kind == "random-pure") {
    require_params(a, 0);
    rho = DensityMatrix::from_pure(random_pure(dims_or("2x2"), a.seed));
  } else if (a.kind == "random-mixed") {
    require_params(a, 0);
    const Dims dims = dims_or("2x2");
    const std::size_t rank = a.rank.value_or(product(dims));
    if (rank < 1 || rank > product(dims)) {
      throw ValidationError("gen random-mixed: rank must be in 1.." + std::to_string(product(dims)));
    }
    rho = random_density(dims, rank, a.seed);
  } else if (a.kind == "product") {
    require_params(a, 0);
    const Dims dims = dims_or("2x2");
    if (dims.size() != 2) throw DimensionError("gen product: --dims must be dAxdB");
    rho = product_state(random_density(dims[0], dims[0], a.seed),
                        random_density(dims[1], dims[1], a.seed + 1));
  } else {
    throw ValidationError("gen: unknown kind '" + a.kind + "'");
  }
  sink.stream() << format_state(*rho);
  sink.close();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app("Nonlocality of bipartite states under marginal-preserving measurements", "minl");
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  const std::vector<std::string> formats{"text", "json", "csv"};

  ComputeArgs ca;
  CLI::App* c = app.add_subcommand("compute", "N_RE, N_G and related quantities of a state file");
  c->add_option("--state", ca.state, "State file (JSON)")->required();
  c->add_option("--measure", ca.measure, "re, geo or both")
      ->check(CLI::IsMember({"re", "geo", "both"}))
      ->capture_default_str();
  c->add_option("--format", ca.format)->check(CLI::IsMember(formats))->capture_default_str();
  c->add_option("--out", ca.out, "Output path (default stdout)");
  ca.opt.add(c);

  ScanArgs sa;
  CLI::App* s = app.add_subcommand("scan", "CSV scan over Bell-diagonal or Werner parameters");
  s->add_option("family", sa.family, "bell-diagonal or werner")
      ->required()
      ->check(CLI::IsMember({"bell-diagonal", "werner"}));
  s->add_option("--p", sa.p, "Werner grid START:STOP:COUNT")->capture_default_str();
  s->add_option("--c1", sa.c1, "c1 grid START:STOP:COUNT")->capture_default_str();
  s->add_option("--c2", sa.c2, "c2 grid")->capture_default_str();
  s->add_option("--c3", sa.c3, "c3 grid")->capture_default_str();
  s->add_flag("--special", sa.special, "Scan the line c = (1, -c, c) instead of a cube");
  s->add_option("--c", sa.c, "Grid of c for --special")->capture_default_str();
  s->add_option("--seed", sa.seed)->capture_default_str();
  s->add_option("--format", sa.format, "csv (text is the same) or json")
      ->check(CLI::IsMember(formats))
      ->capture_default_str();
  s->add_option("--out", sa.out, "Output path (default stdout)");
  sa.opt.add(s);

  VerifyArgs va;
  CLI::App* v = app.add_subcommand("verify", "Run a property suite over seeded random states");
  v->add_option("suite", va.suite, "all, bounds, pinsker, tradeoffs, dilation, invariance, oracle")
      ->required();
  v->add_option("--samples", va.samples, "Samples per check (default: per-check counts)");
  v->add_option("--seed", va.seed)->capture_default_str();
  v->add_option("--dims", va.dims, "dAxdB for the bipartite checks");
  v->add_option("--grid-resolution", va.grid_resolution)->capture_default_str();
  v->add_option("--format", va.format)->check(CLI::IsMember(formats))->capture_default_str();
  v->add_option("--out", va.out, "Output path (default stdout)");
  va.opt.add(v);

  GenArgs ga;
  CLI::App* g = app.add_subcommand("gen", "Write a state file");
  g->add_option("kind", ga.kind, "bell-diagonal, werner, random-pure, random-mixed, product")
      ->required()
      ->check(CLI::IsMember({"bell-diagonal", "werner", "random-pure", "random-mixed", "product"}));
  g->add_option("params", ga.params, "c1 c2 c3 (bell-diagonal) or p (werner)");
  g->add_option("--dims", ga.dims, "dAxdB, or a single dimension");
  g->add_option("--rank", ga.rank, "Rank for random-mixed (default full)");
  g->add_option("--seed", ga.seed)->capture_default_str();
  g->add_option("--out", ga.out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }

  try {
    if (*c) compute(ca, out);
    if (*s) scan(sa, out);
    if (*v) return verify(va, out);
    if (*g) gen(ga, out);
    return kOk;
  } catch (const OutputError& e) {
    err << "error: " << e.what() << "\n";
    return kUnwritableOutput;
  } catch (const UnknownSuiteError& e) {
    err << "error: " << e.what() << "\n";
    return kUnknownSuite;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << "\n";
    return kDimensionMismatch;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
}

}  // namespace minl::cli
