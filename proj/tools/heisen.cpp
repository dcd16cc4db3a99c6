/*
 * heisen - command-line front end.
 *
 *   heisen verify --suite trace-table|vacuum|hz|mehler|moyal|all
 *   heisen trace  --symbol "resolvent(Q, 0.5)" [--n 1]
 *   heisen char   --example bott-toeplitz|resolvent|automorphism | --symbol <literal>
 *   heisen index  --example ... [--manifold s3] [--connection levi|flat|sl2]
 *
 * Global flags: --config <json>, --grid, --fock-cutoff, --depth, --seed,
 * --json <path>, --emit-samples <csv>. Flags given on the command line
 * override the config file; unknown config keys are rejected.
 *
 * The report is JSON ("schema": 1) on stdout, and also written to --json.
 * Exit codes: 0 all checks pass, 1 a check failed, 2 configuration error,
 * 3 numeric non-convergence.
 */
#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <set>
#include <string>

#include "heisen/character.hpp"
#include "heisen/errors.hpp"
#include "heisen/parse.hpp"
#include "heisen/rtrace.hpp"
#include "heisen/suites.hpp"

using namespace heisen;
using json = nlohmann::ordered_json;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Settings {
  std::string command;
  std::string suite = "all";
  std::string symbol;
  int n = 1;
  std::string example;
  std::string manifold = "s3";
  std::string connection = "levi";
  int grid = 32;
  int fock_cutoff = 24;
  int depth = 4;
  unsigned seed = 1;
  std::string json_path;
  std::string emit_samples;
};

json cplx_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json settings_json(const Settings& s) {
  json j;
  j["command"] = s.command;
  if (s.command == "verify") j["suite"] = s.suite;
  if (!s.symbol.empty()) j["symbol"] = s.symbol;
  if (s.command == "trace") j["n"] = s.n;
  if (!s.example.empty()) j["example"] = s.example;
  if (s.command == "char" || s.command == "index") {
    j["manifold"] = s.manifold;
    j["connection"] = s.connection;
    j["grid"] = s.grid;
  }
  j["fock_cutoff"] = s.fock_cutoff;
  j["depth"] = s.depth;
  j["seed"] = s.seed;
  return j;
}

// Fills every setting that was not given on the command line from the config.
void apply_config(const std::string& path, Settings& s, const std::set<std::string>& explicit_keys) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known{"schema",  "command",    "suite", "symbol",      "n",
                                           "example", "manifold",   "connection", "grid", "fock_cutoff",
                                           "depth",   "seed",       "json",  "emit_samples"};
  for (const auto& [key, value] : cfg.items()) {
    if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
    if (explicit_keys.count(key)) continue;
    try {
      if (key == "schema") {
        if (value.get<int>() != 1) throw ConfigError("unsupported config schema");
      } else if (key == "command") {
        if (value.get<std::string>() != s.command) throw ConfigError("config command does not match the subcommand");
      } else if (key == "suite") s.suite = value.get<std::string>();
      else if (key == "symbol") s.symbol = value.get<std::string>();
      else if (key == "n") s.n = value.get<int>();
      else if (key == "example") s.example = value.get<std::string>();
      else if (key == "manifold") s.manifold = value.get<std::string>();
      else if (key == "connection") s.connection = value.get<std::string>();
      else if (key == "grid") s.grid = value.get<int>();
      else if (key == "fock_cutoff") s.fock_cutoff = value.get<int>();
      else if (key == "depth") s.depth = value.get<int>();
      else if (key == "seed") s.seed = value.get<unsigned>();
      else if (key == "json") s.json_path = value.get<std::string>();
      else if (key == "emit_samples") s.emit_samples = value.get<std::string>();
    } catch (const json::type_error&) {
      throw ConfigError("config key '" + key + "' has the wrong type");
    }
  }
}

void validate(const Settings& s) {
  if (s.grid < 8) throw ConfigError("grid must be at least 8");
  if (s.fock_cutoff < 1) throw ConfigError("fock cutoff must be positive");
  if (s.depth < 1 || s.depth > 12) throw ConfigError("depth must lie in 1..12");
  if (s.n < 1 || s.n > 3) throw ConfigError("n must lie in 1..3");
  if (s.command == "trace" && s.symbol.empty()) throw ConfigError("trace needs --symbol");
  if ((s.command == "char" || s.command == "index") && s.example.empty() == s.symbol.empty())
    throw ConfigError("give exactly one of --example and --symbol");
  if ((s.command == "char" || s.command == "index") && s.manifold != "s3")
    throw ConfigError("unknown manifold '" + s.manifold + "' (only s3)");
  static const std::set<std::string> conns{"flat", "levi", "sl2"};
  if (!conns.count(s.connection)) throw ConfigError("unknown connection '" + s.connection + "'");
  static const std::set<std::string> examples{"bott-toeplitz", "resolvent", "automorphism"};
  if (!s.example.empty() && !examples.count(s.example)) throw ConfigError("unknown example '" + s.example + "'");
  if (s.command == "verify" && s.suite != "all") {
    const auto& names = suite_names();
    if (std::find(names.begin(), names.end(), s.suite) == names.end())
      throw ConfigError("unknown suite '" + s.suite + "'");
  }
}

PairC pair_from_literal(const std::string& text, int n, int depth) {
  SymbolC sym = parse_symbol(text, n);
  return make_paired(expand(sym, depth));
}

// ---- verify ----

json run_verify(const Settings& s, bool& pass) {
  std::vector<std::string> names = s.suite == "all" ? suite_names() : std::vector<std::string>{s.suite};
  json suites = json::array();
  for (const auto& name : names) {
    SuiteResult r = run_suite(name, s.fock_cutoff, s.seed);
    json rows = json::array();
    for (const auto& row : r.rows) {
      json j{{"name", row.name}};
      if (!row.exact.empty()) j["exact"] = row.exact;
      j["value"] = cplx_json(row.value);
      j["expected"] = cplx_json(row.expected);
      j["error"] = row.error;
      j["tolerance"] = row.tolerance;
      j["pass"] = row.pass;
      rows.push_back(j);
    }
    pass = pass && r.pass();
    suites.push_back(json{{"suite", r.suite}, {"pass", r.pass()}, {"rows", rows}});
  }
  return json{{"suites", suites}};
}

// ---- trace ----

json run_trace(const Settings& s, bool& pass) {
  PairC p = pair_from_literal(s.symbol, s.n, s.depth);
  json routes = json::array();
  TraceReport heat = tau(p, true);
  auto route_json = [](const TraceReport& r) {
    json j{{"route", trace_route_name(r.route)}, {"value", cplx_json(r.value)}, {"error_estimate", r.error_estimate}};
    if (r.exact) j["exact"] = r.exact->str();
    return j;
  };
  routes.push_back(route_json(heat));
  double scale = std::max(1.0, std::abs(heat.value)), worst = 0;
  TraceReport num = tau_numeric(p);
  routes.push_back(route_json(num));
  worst = std::max(worst, std::abs(num.value - heat.value) / scale);
  if (tau_path(p) == TauPath::Fock) {
    TraceReport fk = tau_fock(p, s.fock_cutoff);
    routes.push_back(route_json(fk));
    worst = std::max(worst, std::abs(fk.value - heat.value) / scale);
  }
  bool ok = worst <= 1e-6;
  pass = pass && ok;
  return json{{"symbol", format_symbol(*p.plus.closure)},
              {"order", p.order()},
              {"tau", cplx_json(heat.value)},
              {"routes", routes},
              {"cross_route_max_rel", worst},
              {"tolerance", 1e-6},
              {"pass", ok}};
}

// ---- char / index ----

struct Problem {
  ManifoldPtr M;
  FiberForm sigma;
  Connection conn;
  std::optional<Form> toeplitz_f;
  std::optional<long> golden;
  double golden_tol = 0;
};

Problem make_problem(const Settings& s) {
  Problem p;
  p.M = std_s3(s.grid);
  p.conn = make_connection(p.M, s.connection);
  if (s.example == "bott-toeplitz") {
    p.toeplitz_f = bott_map(p.M);
    p.sigma = toeplitz_symbol(*p.toeplitz_f, s.depth);
    p.golden = 1;  // orientation fixed by alpha ^ d alpha > 0
    p.golden_tol = 1e-2;
  } else if (s.example == "automorphism") {
    p.sigma = function_section(bott_map(p.M), s.depth);
    p.golden = 0;
    p.golden_tol = 1e-8;
  } else {
    std::string lit = s.example == "resolvent" ? "Q - 1/3" : s.symbol;
    MatrixSymbol<CRat> m{1, {pair_from_literal(lit, p.M->n, s.depth)}};
    p.sigma = constant_section(p.M, m);
    if (s.example == "resolvent") {
      p.golden = 0;
      p.golden_tol = 1e-8;
    }
  }
  return p;
}

void emit_samples(const std::string& path, const ChiResult& r, const Manifold& M) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write samples to '" + path + "'");
  out << "chart,node,a1,b1,a2,b2,rho,degree,component,re,im\n";
  out.precision(17);
  for (const auto& f : r.chi) {
    if (f.degree() % 2 == 0) continue;
    for (size_t c = 0; c < M.charts.size(); ++c) {
      const Chart& ch = M.charts[c];
      for (size_t v = 0; v < ch.nodes(); ++v) {
        if (ch.rho[v] == 0) continue;
        for (int k = 0; k < f.ncomp(); ++k) {
          cplx z = f.at(c, v, k)[0];
          const double* X = &ch.X[v * 4];
          out << c << ',' << v << ',' << X[0] << ',' << X[1] << ',' << X[2] << ',' << X[3] << ',' << ch.rho[v] << ','
              << f.degree() << ',' << k << ',' << z.real() << ',' << z.imag() << '\n';
        }
      }
    }
  }
}

json words_json(const ChiResult& r) {
  json words = json::array();
  for (const auto& w : r.words)
    words.push_back(json{{"word", w.word},
                         {"degree", w.degree},
                         {"coefficient", cplx_json(w.coefficient)},
                         {"fiber_tuples", w.tuples},
                         {"max_abs", w.value.max_abs(0)}});
  json paths;
  for (const auto& [k, v] : r.tau_paths) paths[k] = v;
  return json{{"words", words}, {"tau_paths", paths}};
}

json run_char(const Settings& s, bool& pass) {
  Problem p = make_problem(s);
  ChiResult r = chi(p.sigma, p.conn, s.depth);
  if (!s.emit_samples.empty()) emit_samples(s.emit_samples, r, *p.M);
  json out = words_json(r);
  json degrees = json::array();
  for (const auto& f : r.chi) {
    json d{{"degree", f.degree()}, {"max_abs", f.max_abs(0)}, {"zero", f.is_zero()}};
    if (f.degree() == p.M->dim) d["integral"] = cplx_json(integrate(f));
    degrees.push_back(d);
  }
  out["chi"] = degrees;
  bool ok = true;
  json checks = json::array();
  std::optional<FormSeries> closed_opt;
  if (p.toeplitz_f) try {
      closed_opt = toeplitz_character_closed(*p.toeplitz_f, p.conn);
    } catch (const NotUnitary&) {
      // c1 needs a unitary connection; sl2 only gets the word expansion
      checks.push_back(json{{"check", "chi = Ch(f) exp(c1/2) nodewise"}, {"applicable", false}});
    }
  if (closed_opt) {
    const FormSeries& closed = *closed_opt;
    double worst = 0;
    for (size_t k = 0; k < closed.size(); ++k)
      worst = std::max(worst, (r.chi[k] - closed[k]).max_abs(3) / std::max(1.0, closed[k].max_abs(3)));
    bool c = worst <= 1e-6;
    checks.push_back(json{{"check", "chi = Ch(f) exp(c1/2) nodewise"}, {"error", worst}, {"tolerance", 1e-6}, {"pass", c}});
    ok = ok && c;
  } else if (p.golden && *p.golden == 0) {
    bool zero = true;
    for (const auto& f : r.chi) zero = zero && f.is_zero();
    checks.push_back(json{{"check", "chi = 0"}, {"pass", zero}});
    ok = ok && zero;
  }
  out["checks"] = checks;
  out["pass"] = ok;
  pass = pass && ok;
  return out;
}

json run_index(const Settings& s, bool& pass) {
  Problem p = make_problem(s);
  IndexReport r = index(p.sigma, p.conn, s.depth);
  json terms = json::array();
  for (const auto& [word, v] : r.per_term) terms.push_back(json{{"word", word}, {"value", cplx_json(v)}});
  json out{{"value", cplx_json(r.value)},
           {"nearest_integer", r.nearest},
           {"abs_error", r.abs_error},
           {"per_term_breakdown", terms}};
  bool ok = true;
  if (p.golden) {
    ok = r.nearest == *p.golden && std::abs(r.value - cplx(static_cast<double>(*p.golden))) <= p.golden_tol;
    out["golden"] = json{{"value", *p.golden}, {"tolerance", p.golden_tol}, {"pass", ok}};
  }
  out["pass"] = ok;
  pass = pass && ok;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heisenberg symbol calculus, traces and index characters"};
  app.require_subcommand(1);
  Settings s;
  std::string config;
  app.add_option("--config", config, "JSON config file")->check(CLI::ExistingFile);
  auto* o_grid = app.add_option("--grid", s.grid, "nodes per axis of each S3 chart");
  auto* o_cut = app.add_option("--fock-cutoff", s.fock_cutoff, "Fock basis cutoff");
  auto* o_depth = app.add_option("--depth", s.depth, "expansion depth");
  auto* o_seed = app.add_option("--seed", s.seed, "random seed");
  auto* o_json = app.add_option("--json", s.json_path, "also write the report to this path");
  auto* o_emit = app.add_option("--emit-samples", s.emit_samples, "write chi components as CSV");
  app.fallthrough();

  auto* verify = app.add_subcommand("verify", "run named verification suites");
  auto* o_suite = verify->add_option("--suite", s.suite, "suite name or 'all'");
  auto* trace = app.add_subcommand("trace", "trace of a paired symbol by every applicable route");
  auto* o_sym_t = trace->add_option("--symbol", s.symbol, "symbol literal");
  auto* o_n = trace->add_option("--n", s.n, "phase-space half dimension");
  std::vector<CLI::Option*> o_sym, o_ex, o_man, o_conn;
  CLI::App* charc = app.add_subcommand("char", "index character of a symbol on S3");
  CLI::App* indexc = app.add_subcommand("index", "index of a symbol on S3");
  for (CLI::App* sub : {charc, indexc}) {
    o_sym.push_back(sub->add_option("--symbol", s.symbol, "constant section from a symbol literal"));
    o_ex.push_back(sub->add_option("--example", s.example, "bott-toeplitz, resolvent or automorphism"));
    o_man.push_back(sub->add_option("--manifold", s.manifold, "manifold (s3)"));
    o_conn.push_back(sub->add_option("--connection", s.connection, "flat, levi or sl2"));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  for (auto* sub : {verify, trace, charc, indexc})
    if (sub->parsed()) s.command = sub->get_name();

  auto given = [](CLI::Option* o) { return o->count() > 0; };
  auto any = [&](const std::vector<CLI::Option*>& v) {
    for (auto* o : v)
      if (given(o)) return true;
    return false;
  };
  std::set<std::string> explicit_keys{"command"};
  if (given(o_grid)) explicit_keys.insert("grid");
  if (given(o_cut)) explicit_keys.insert("fock_cutoff");
  if (given(o_depth)) explicit_keys.insert("depth");
  if (given(o_seed)) explicit_keys.insert("seed");
  if (given(o_json)) explicit_keys.insert("json");
  if (given(o_emit)) explicit_keys.insert("emit_samples");
  if (given(o_suite)) explicit_keys.insert("suite");
  if (given(o_sym_t) || any(o_sym)) explicit_keys.insert("symbol");
  if (given(o_n)) explicit_keys.insert("n");
  if (any(o_ex)) explicit_keys.insert("example");
  if (any(o_man)) explicit_keys.insert("manifold");
  if (any(o_conn)) explicit_keys.insert("connection");

  json report{{"schema", 1}};
  bool pass = true;
  int code = 0;
  try {
    if (!config.empty()) apply_config(config, s, explicit_keys);
    validate(s);
    report["config"] = settings_json(s);
    json result;
    if (s.command == "verify") result = run_verify(s, pass);
    else if (s.command == "trace") result = run_trace(s, pass);
    else if (s.command == "char") result = run_char(s, pass);
    else result = run_index(s, pass);
    report["result"] = result;
    report["pass"] = pass;
    code = pass ? 0 : 1;
  } catch (const ConfigError& e) {
    report["error"] = json{{"kind", "config"}, {"message", e.what()}};
    code = 2;
  } catch (const ParseError& e) {
    report["error"] = json{{"kind", "config"}, {"message", e.what()}};
    code = 2;
  } catch (const NumericError& e) {
    report["error"] = json{{"kind", "non-convergence"}, {"message", e.what()}};
    code = 3;
  } catch (const Error& e) {
    report["error"] = json{{"kind", "domain"}, {"message", e.what()}};
    code = 1;
  }
  if (code != 0 && !report.contains("pass")) report["pass"] = false;
  std::string text = report.dump(2) + "\n";
  std::cout << text;
  if (!s.json_path.empty()) {
    std::ofstream out(s.json_path);
    if (!out) {
      std::cerr << "cannot write report to '" << s.json_path << "'\n";
      return 2;
    }
    out << text;
  }
  return code;
}
