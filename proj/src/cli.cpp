#include "kgs/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "kgs/concentration.hpp"
#include "kgs/thresholds.hpp"
#include "kgs/verify.hpp"

namespace kgs::cli {

namespace {

const std::set<std::string> kCommands = {"solve-const", "solve",  "sweep",
                                         "thresholds",  "check-potentials",
                                         "verify"};

// every key the parser accepts, per command family
const std::set<std::string> kKnownKeys = {
    "a", "b", "p", "k", "tau", "nu", "epsilon", "tol", "max_iter", "seed",
    "out", "dump", "config", "S", "q", "suite", "tol_set",
    "grid.R", "grid.n", "grid.L", "grid.m",
    "potential.preset", "potential.V", "potential.P", "potential.Q",
    "potential.xstar", "potential.Rcond",
    "sweep.eps", "sweep.Lphys", "sweep.m", "sweep.branch",
    "trunc.c", "trunc.d", "trunc.e", "workers"};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

void set_kv(RunConfig& cfg, const std::string& key, const std::string& val,
            int line) {
  if (!kKnownKeys.count(key)) {
    std::ostringstream os;
    os << "unknown key '" << key << "'";
    if (line > 0) os << " (line " << line << ")";
    throw ParseError(os.str());
  }
  cfg.kv[key] = val;
}

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open config file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ParseError("config line " + std::to_string(lineno) +
                       ": expected key=value");
    set_kv(cfg, trim(t.substr(0, eq)), trim(t.substr(eq + 1)), lineno);
  }
}

Vec3 parse_vec3(const std::string& s) {
  std::istringstream is(s);
  Vec3 v{0, 0, 0};
  if (!(is >> v[0] >> v[1] >> v[2]))
    throw ParseError("cannot parse coordinates '" + s + "'");
  return v;
}

}  // namespace

std::string RunConfig::get(const std::string& k, const std::string& dflt) const {
  auto it = kv.find(k);
  return it == kv.end() ? dflt : it->second;
}

double RunConfig::get_double(const std::string& k, double dflt) const {
  auto it = kv.find(k);
  if (it == kv.end()) return dflt;
  try {
    return std::stod(it->second);
  } catch (const std::exception&) {
    throw ParseError("key '" + k + "': cannot parse number '" + it->second + "'");
  }
}

int RunConfig::get_int(const std::string& k, int dflt) const {
  auto it = kv.find(k);
  if (it == kv.end()) return dflt;
  try {
    return std::stoi(it->second);
  } catch (const std::exception&) {
    throw ParseError("key '" + k + "': cannot parse integer '" + it->second + "'");
  }
}

RunConfig parse_args(const std::vector<std::string>& args) {
  if (args.empty())
    throw ParseError("usage: kgs <command> [key=value ...]; commands: "
                     "solve-const solve sweep thresholds check-potentials verify");
  RunConfig cfg;
  cfg.command = args[0];
  if (!kCommands.count(cfg.command))
    throw ParseError("unknown command '" + cfg.command + "'");
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t i = 1; i < args.size(); ++i) {
    std::string a = args[i];
    if (a.rfind("--", 0) == 0) a = a.substr(2);
    auto eq = a.find('=');
    if (eq != std::string::npos) {
      pairs.emplace_back(a.substr(0, eq), a.substr(eq + 1));
    } else {
      if (i + 1 >= args.size())
        throw ParseError("flag '" + args[i] + "' expects a value");
      pairs.emplace_back(a, args[++i]);
    }
  }
  // config file first, command line overrides
  for (auto& [k, v] : pairs)
    if (k == "config") load_config_file(cfg, v);
  for (auto& [k, v] : pairs)
    if (k != "config") set_kv(cfg, k, v, 0);
  return cfg;
}

namespace {

KirchhoffParams params_from(const RunConfig& cfg) {
  KirchhoffParams p{cfg.get_double("a", 1.0), cfg.get_double("b", 1.0),
                    cfg.get_double("p", 5.0)};
  if (!(p.p > 4.0 && p.p < 6.0))
    throw DomainError("p = " + format_double(p.p) +
                      " violates the standing assumption p in (4,6)");
  if (!(p.a > 0.0) || !(p.b > 0.0))
    throw DomainError("a and b must be positive");
  return p;
}

SolveOptions options_from(const RunConfig& cfg) {
  SolveOptions o;
  o.tol = cfg.get_double("tol", 1e-8);
  if (!(o.tol > 0.0) || o.tol > 1e-2)
    throw DomainError("tol must lie in (0, 1e-2]");
  o.max_iter = cfg.get_int("max_iter", 50000);
  if (o.max_iter < 1) throw DomainError("max_iter must be positive");
  return o;
}

PotentialTripleSpec spec_from(const RunConfig& cfg) {
  if (cfg.has("potential.preset"))
    return PotentialTripleSpec::preset(cfg.get("potential.preset", ""));
  if (!cfg.has("potential.V") || !cfg.has("potential.P") || !cfg.has("potential.Q"))
    throw ParseError("potentials: give potential.preset or all of potential.V/P/Q");
  Shape V = parse_shape(cfg.get("potential.V", ""));
  Shape P = parse_shape(cfg.get("potential.P", ""));
  Shape Q = parse_shape(cfg.get("potential.Q", ""));
  Vec3 xs = parse_vec3(cfg.get("potential.xstar", "0 0 0"));
  double R = cfg.get_double("potential.Rcond", 2.0);
  return PotentialTripleSpec::from_shapes(V, P, Q, xs, R);
}

std::filesystem::path out_dir(const RunConfig& cfg) {
  std::filesystem::path dir = cfg.get("out", ".");
  std::filesystem::create_directories(dir);
  return dir;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream os(p);
  if (!os) throw StructuralError("cannot write '" + p.string() + "'");
  os << text;
}

std::string report_csv(const GroundStateReport& rep) {
  std::ostringstream os;
  os << "level,nehari_residual,grad_sup,max_x1,max_x2,max_x3,iterations,converged\n";
  os << format_double(rep.level) << "," << format_double(rep.nehari_residual)
     << "," << format_double(rep.grad_sup) << ","
     << format_double(rep.max_point[0]) << "," << format_double(rep.max_point[1])
     << "," << format_double(rep.max_point[2]) << "," << rep.iterations << ","
     << (rep.converged ? 1 : 0) << "\n";
  return os.str();
}

int cmd_thresholds(const RunConfig& cfg, std::ostream& out) {
  double a = cfg.get_double("a", 1.0);
  double b = cfg.get_double("b", 1.0);
  double q = cfg.get_double("q", 1.0);
  double S;
  if (cfg.has("S")) {
    S = cfg.get_double("S", 0.0);
  } else {
    RadialGrid g(cfg.get_double("grid.R", 60.0), cfg.get_int("grid.n", 12000));
    S = sobolev_constant(g);
  }
  TsSolution sol = solve_ts_system(a, b, S, q);
  ThresholdValues tv = critical_level(a, b, S, q);
  double resid = threshold_consistency(a, b, S, q);
  std::ostringstream os;
  os << "a,b,S,q,t0,s0,c_star,consistency_residual\n";
  os << format_double(a) << "," << format_double(b) << "," << format_double(S)
     << "," << format_double(q) << "," << format_double(sol.t0) << ","
     << format_double(sol.s0) << "," << format_double(tv.c_star) << ","
     << format_double(resid) << "\n";
  std::string csv = os.str();
  write_text(out_dir(cfg) / "thresholds.csv", csv);
  out << csv;
  return 0;
}

int cmd_solve_const(const RunConfig& cfg, std::ostream& out) {
  KirchhoffParams params = params_from(cfg);
  ConstantCoefficients cc{cfg.get_double("k", 1.0), cfg.get_double("tau", 1.0),
                          cfg.get_double("nu", 1.0)};
  cc.validate();
  RadialGrid grid(cfg.get_double("grid.R", 20.0), cfg.get_int("grid.n", 4000));
  GroundStateReport rep = solve_constant(cc, params, grid, options_from(cfg));
  std::string csv = report_csv(rep);
  auto dir = out_dir(cfg);
  write_text(dir / "solve_const.csv", csv);
  if (cfg.get_int("dump", 0) != 0)
    dump_field_file(rep.field, (dir / "groundstate.kgs1").string());
  out << "level=" << format_double(rep.level)
      << " iterations=" << rep.iterations
      << " grad_sup=" << format_double(rep.grad_sup) << "\n";
  return rep.converged ? 0 : 2;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  KirchhoffParams params = params_from(cfg);
  PotentialTripleSpec spec = spec_from(cfg);
  double eps = cfg.get_double("epsilon", 0.25);
  if (!(eps > 0.0)) throw DomainError("epsilon must be positive");
  CartesianGrid grid(cfg.get_double("grid.L", 10.0), cfg.get_int("grid.m", 33));
  GroundStateReport rep;
  if (cfg.has("trunc.c") || cfg.has("trunc.d") || cfg.has("trunc.e")) {
    TruncationLevels lv{cfg.get_double("trunc.c", spec.V_min),
                        cfg.get_double("trunc.d", spec.P_max),
                        cfg.get_double("trunc.e", spec.Q_max)};
    rep = solve_truncated(lv, params, spec, eps, grid, options_from(cfg));
  } else {
    rep = solve_variable(params, spec, eps, grid, options_from(cfg));
  }
  std::string csv = report_csv(rep);
  auto dir = out_dir(cfg);
  write_text(dir / "solve.csv", csv);
  if (cfg.get_int("dump", 0) != 0)
    dump_field_file(rep.field, (dir / "groundstate.kgs1").string());
  out << "level=" << format_double(rep.level)
      << " iterations=" << rep.iterations
      << " grad_sup=" << format_double(rep.grad_sup) << "\n";
  return rep.converged ? 0 : 2;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  KirchhoffParams params = params_from(cfg);
  PotentialTripleSpec spec = spec_from(cfg);
  SweepConfig sc;
  std::stringstream eps(cfg.get("sweep.eps", "0.5,0.25,0.125"));
  std::string tok;
  while (std::getline(eps, tok, ','))
    if (!tok.empty()) sc.eps_list.push_back(std::stod(tok));
  sc.phys_half_width = cfg.get_double("sweep.Lphys", 2.5);
  sc.m = cfg.get_int("sweep.m", 63);
  sc.use_vq_branch = cfg.get("sweep.branch", "pq") == "vq";
  SweepReport rep = epsilon_sweep(params, spec, sc, options_from(cfg));
  std::string csv = sweep_csv(rep);
  auto dir = out_dir(cfg);
  write_text(dir / "sweep.csv", csv);
  out << csv;
  bool all = true;
  for (const auto& r : rep.records) all = all && r.solved;
  return all ? 0 : 2;
}

int cmd_check_potentials(const RunConfig& cfg, std::ostream& out) {
  PotentialTripleSpec spec = spec_from(cfg);
  double L = cfg.get_double("grid.L", 2.0 * spec.R_cond);
  int m = cfg.get_int("grid.m", 41);
  GridPtr g = Grid::make(CartesianGrid(L, m));
  double tol_set = cfg.get_double(
      "tol_set", 1e-6 * std::max({spec.V_max - spec.V_min,
                                  spec.P_max - spec.P_min,
                                  spec.Q_max - spec.Q_min, 1e-30}));
  ConditionReport rep = check_conditions(spec, g, tol_set);
  std::ostringstream os;
  os << "condition,pass,witness_count,gap,violations,worst_x1,worst_x2,worst_x3\n";
  for (const auto& e : rep.entries)
    os << e.name << "," << (e.pass ? 1 : 0) << "," << e.witness_count << ","
       << format_double(e.gap) << "," << e.violations << ","
       << format_double(e.worst[0]) << "," << format_double(e.worst[1]) << ","
       << format_double(e.worst[2]) << "\n";
  std::string csv = os.str();
  write_text(out_dir(cfg) / "conditions.csv", csv);
  out << csv;
  return 0;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  std::uint64_t seed = std::uint64_t(cfg.get_int("seed", 2026));
  std::string which = cfg.get("suite", "all");
  auto results = run_suites(which, seed);
  bool ok = true;
  std::ostringstream os;
  os << "suite,checks,violations\n";
  for (const auto& r : results) {
    os << r.name << "," << r.checks << "," << r.violations << "\n";
    ok = ok && r.ok();
  }
  std::string csv = os.str();
  write_text(out_dir(cfg) / "verify.csv", csv);
  out << csv;
  for (const auto& r : results)
    for (const auto& msg : r.messages) out << "# " << r.name << ": " << msg << "\n";
  return ok ? 0 : 3;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.command == "thresholds") return cmd_thresholds(cfg, out);
    if (cfg.command == "solve-const") return cmd_solve_const(cfg, out);
    if (cfg.command == "solve") return cmd_solve(cfg, out);
    if (cfg.command == "sweep") return cmd_sweep(cfg, out);
    if (cfg.command == "check-potentials") return cmd_check_potentials(cfg, out);
    if (cfg.command == "verify") return cmd_verify(cfg, out);
    err << "error: unknown command '" << cfg.command << "'\n";
    return 1;
  } catch (const NonConvergenceError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int main_entry(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  // KGS_WORKERS caps the reduction worker count; the reference build runs
  // its fixed reduction tree on one worker, so any positive cap is honored.
  if (const char* env = std::getenv("KGS_WORKERS")) {
    char* end = nullptr;
    long w = std::strtol(env, &end, 10);
    if (end == env || w < 1) {
      std::cerr << "error: KGS_WORKERS must be a positive integer\n";
      return 1;
    }
  }
  try {
    RunConfig cfg = parse_args(args);
    return run(cfg, std::cout, std::cerr);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace kgs::cli
