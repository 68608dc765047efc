// grasscurve: command-line front end.
//
// Exit codes: 0 ok, 1 domain or verification failure, 2 input or parse error.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include "grasscurve/errors.hpp"
#include "grasscurve/families.hpp"
#include "grasscurve/gauge.hpp"
#include "grasscurve/invariants.hpp"
#include "grasscurve/io.hpp"
#include "grasscurve/solver.hpp"

namespace gc = grasscurve;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitInput = 2;

struct Globals {
  double tol = gc::kDefaultCcTol;
  std::uint64_t seed = 42;
  int restarts = 200;
  std::string format = "json";
  std::string out;
};

gc::LoadedCurve read_curve(const std::string& path) {
  if (path.empty() || path == "-") {
    const std::string text{std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    return gc::parse_curve(text);
  }
  return gc::load_curve_file(path);
}

void flatten(const json& j, const std::string& prefix, std::ostream& os) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, os);
  } else if (j.is_array() && !j.empty() && (j.front().is_structured())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", os);
  } else if (j.is_string()) {
    os << prefix << ": " << j.get<std::string>() << '\n';
  } else {
    os << prefix << ": " << j.dump() << '\n';
  }
}

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw gc::InputError("cannot write " + g.out);
  f << text;
}

void emit_json(const Globals& g, const json& j) {
  if (g.format == "text") {
    std::ostringstream os;
    flatten(j, "", os);
    emit(g, os.str());
  } else {
    emit(g, j.dump(2) + "\n");
  }
}

gc::cplx parse_complex(const std::string& s) {
  std::string t = s;
  if (!t.empty() && t.front() == '(' && t.back() == ')') t = t.substr(1, t.size() - 2);
  try {
    const auto comma = t.find(',');
    if (comma == std::string::npos) return {std::stod(t), 0.0};
    return {std::stod(t.substr(0, comma)), std::stod(t.substr(comma + 1))};
  } catch (const std::exception&) {
    throw gc::InputError("cannot parse complex number '" + s + "' (use re or re,im)");
  }
}

json verify_json(const gc::LoadedCurve& lc, double tol) {
  const auto& c = lc.curve;
  const auto rep = gc::verify(c, tol);
  json j = gc::to_json(rep);
  j["schema_version"] = gc::kSchemaVersion;
  j["n"] = c.n();
  j["d"] = c.d();
  j["passed"] = rep.passed();
  if (c.d() >= 2) {
    gc::RamificationOptions opts;
    const auto ram = gc::ramification(c, opts);
    j["degenerate"] = ram.degenerate;
    j["r_index"] = ram.r_index ? json(*ram.r_index) : json("undefined");
    j["ramification"] = gc::to_json(ram);
  } else {
    j["degenerate"] = nullptr;
    j["r_index"] = "undefined";
  }
  j["load_notes"] = lc.notes;
  j["recentered"] = lc.recentered;
  return j;
}

int cmd_verify(const Globals& g, const std::string& path) {
  const auto lc = read_curve(path);
  const json j = verify_json(lc, g.tol);
  emit_json(g, j);
  return j["passed"].get<bool>() ? kExitOk : kExitDomain;
}

int cmd_sample(const Globals& g, const std::string& path, int grid, double extent) {
  if (grid < 1) throw gc::InputError("--grid must be >= 1");
  const auto c = read_curve(path).curve;
  if (c.d() < 2) throw gc::DomainError("sample: requires d >= 2");
  const gc::KahlerPotential kp(c);
  json rows = json::array();
  for (int iy = 0; iy < grid; ++iy) {
    for (int ix = 0; ix < grid; ++ix) {
      const double x = grid == 1 ? 0.0 : -extent + 2.0 * extent * ix / (grid - 1);
      const double y = grid == 1 ? 0.0 : -extent + 2.0 * extent * iy / (grid - 1);
      const gc::cplx z{x, y};
      json row{{"x", x}, {"y", y}};
      try {
        const double k = kp.curvature(z);
        const double det = gc::det_a1_sq(c, z);
        row["K"] = k;
        row["det_a1_sq"] = det;
        row["gauss_slack"] = 4.0 - k - 8.0 * det;
        row["status"] = "ok";
      } catch (const gc::DomainError&) {
        row["K"] = nullptr;
        row["det_a1_sq"] = nullptr;
        row["gauss_slack"] = nullptr;
        row["status"] = "non-immersion";
      }
      rows.push_back(std::move(row));
    }
  }
  if (g.format == "csv") {
    std::ostringstream os;
    os << std::setprecision(17) << "x,y,K,det_a1_sq,gauss_slack,status\n";
    for (const auto& r : rows) {
      auto cell = [&](const char* k) { return r[k].is_null() ? std::string() : r[k].dump(); };
      os << cell("x") << ',' << cell("y") << ',' << cell("K") << ',' << cell("det_a1_sq") << ','
         << cell("gauss_slack") << ',' << r["status"].get<std::string>() << '\n';
    }
    emit(g, os.str());
  } else {
    emit_json(g, json{{"schema_version", gc::kSchemaVersion}, {"d", c.d()}, {"samples", rows}});
  }
  return kExitOk;
}

int cmd_family(const Globals& g, const std::string& kind, int n) {
  gc::Curve c = kind == "dn" ? gc::family_dn(n) : gc::family_d2n(n);
  emit(g, gc::curve_to_json(c).dump(2) + "\n");
  return kExitOk;
}

int cmd_search(const Globals& g, gc::SearchProblem p, const std::string& curve_out) {
  p.restarts = g.restarts;
  p.rng_seed = g.seed;
  const auto rep = gc::search(p);
  if (!curve_out.empty() && rep.best_curve) gc::save_curve_file(*rep.best_curve, curve_out);
  emit_json(g, gc::to_json(rep));
  return rep.feasible ? kExitOk : kExitDomain;
}

int cmd_scan(const Globals& g, gc::SearchProblem p, int d_min, int d_max) {
  p.restarts = g.restarts;
  p.rng_seed = g.seed;
  const auto rows = gc::feasibility_scan(p.n, d_min, d_max, p);
  if (g.format == "csv") {
    emit(g, gc::scan_to_csv(rows));
  } else {
    emit_json(g, gc::scan_to_json(rows));
  }
  return kExitOk;
}

int cmd_mobius(const Globals& g, const std::string& path, const std::string& a, const std::string& b,
               const std::string& c, const std::string& d) {
  const auto lc = read_curve(path);
  const gc::Mobius m{parse_complex(a), parse_complex(b), parse_complex(c), parse_complex(d)};
  emit(g, gc::curve_to_json(gc::apply_mobius(lc.curve, m)).dump(2) + "\n");
  return kExitOk;
}

int cmd_canon(const Globals& g, const std::string& path) {
  const auto lc = read_curve(path);
  emit(g, gc::curve_to_json(gc::canonicalize_a1(lc.curve)).dump(2) + "\n");
  return kExitOk;
}

int cmd_probe(const Globals& g, const std::string& path) {
  const auto lc = read_curve(path);
  const auto p = gc::tail_probe(lc.curve, std::max(g.tol, 1e-8));
  json j = gc::to_json(p);
  j["schema_version"] = gc::kSchemaVersion;
  j["n"] = lc.curve.n();
  j["d"] = lc.curve.d();
  emit_json(g, j);
  return p.cc_ok && p.tau_ok ? kExitOk : kExitDomain;
}

int cmd_lemma_q(const Globals& g, int trials, double threshold) {
  const auto s = gc::lemma_q_trials(trials, g.seed);
  const bool ok = s.max_relative <= threshold;
  emit_json(g, json{{"schema_version", gc::kSchemaVersion},
                    {"trials", s.trials},
                    {"max_relative", s.max_relative},
                    {"threshold", threshold},
                    {"worst", {{"d", s.worst_d}, {"rho", s.worst_rho}, {"n", s.worst_n}}},
                    {"passed", ok}});
  return ok ? kExitOk : kExitDomain;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constant-curvature holomorphic curves in G(2, n+2)"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  Globals g;
  app.add_option("--tol", g.tol, "Residual tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--restarts", g.restarts, "Solver restarts per search")->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "text", "csv"}));
  app.add_option("--out", g.out, "Write output to this file");

  std::string path;
  auto* verify = app.add_subcommand("verify", "Check the constant-curvature system, fullness and degree");
  verify->add_option("curve", path, "Curve JSON file (default stdin)");

  int grid = 5;
  double extent = 1.0;
  auto* sample = app.add_subcommand("sample", "Sample K, |det A1|^2 and the Gauss slack on a grid");
  sample->add_option("curve", path, "Curve JSON file (default stdin)");
  sample->add_option("--grid", grid, "Points per side");
  sample->add_option("--extent", extent, "Grid covers [-extent, extent]^2");

  std::string kind;
  int fam_n = 2;
  auto* family = app.add_subcommand("family", "Emit an explicit constant-curvature family member");
  family->add_option("--kind", kind, "dn or d2n")->required()->check(CLI::IsMember({"dn", "d2n"}));
  family->add_option("--n", fam_n, "Grassmannian parameter")->required();

  gc::SearchProblem prob;
  std::string curve_out;
  int d_min = 1, d_max = 5;
  bool no_gauge = false;
  auto add_solver_opts = [&](CLI::App* sub) {
    sub->add_option("--n", prob.n, "Grassmannian parameter")->required();
    sub->add_option("--max-iters", prob.max_iters, "Iterations per restart");
    sub->add_option("--threads", prob.threads, "Worker threads (capped by GRASSCURVE_THREADS)");
    sub->add_flag("--no-gauge", no_gauge, "Search without pinning A1");
  };
  auto* search = app.add_subcommand("search", "Feasibility search at fixed (n, d)");
  add_solver_opts(search);
  search->add_option("--d", prob.d, "Degree")->required();
  search->add_option("--curve-out", curve_out, "Save the best curve as Curve JSON");

  auto* scan = app.add_subcommand("scan", "Feasibility search over a degree range");
  add_solver_opts(scan);
  scan->add_option("--d-min", d_min, "Smallest degree")->required();
  scan->add_option("--d-max", d_max, "Largest degree")->required();

  std::string ma = "1", mb = "0", mc = "0", md = "1";
  auto* mobius = app.add_subcommand("mobius", "Reparametrize by z -> (az+b)/(cz+d)");
  mobius->add_option("curve", path, "Curve JSON file (default stdin)");
  mobius->add_option("--a", ma, "re or re,im");
  mobius->add_option("--b", mb, "re or re,im");
  mobius->add_option("--c", mc, "re or re,im");
  mobius->add_option("--d", md, "re or re,im");

  auto* canon = app.add_subcommand("canon", "SVD normal form of A1");
  canon->add_option("curve", path, "Curve JSON file (default stdin)");

  auto* probe = app.add_subcommand("probe", "Resolve the lambda chain on the tail coefficients");
  probe->add_option("curve", path, "Curve JSON file (default stdin)");

  int trials = 1000;
  auto* lemma = app.add_subcommand("lemma-q", "Randomized check that the Q double sum vanishes");
  lemma->add_option("--trials", trials, "Number of random instantiations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  if (g.format == "csv" && !sample->parsed() && !scan->parsed()) {
    std::cerr << "error: --format csv applies to sample and scan only\n";
    return kExitInput;
  }
  prob.tol_feasible = g.tol;
  prob.gauge.fix_a1_svd = !no_gauge;

  try {
    if (verify->parsed()) return cmd_verify(g, path);
    if (sample->parsed()) return cmd_sample(g, path, grid, extent);
    if (family->parsed()) return cmd_family(g, kind, fam_n);
    if (search->parsed()) return cmd_search(g, prob, curve_out);
    if (scan->parsed()) return cmd_scan(g, prob, d_min, d_max);
    if (mobius->parsed()) return cmd_mobius(g, path, ma, mb, mc, md);
    if (canon->parsed()) return cmd_canon(g, path);
    if (probe->parsed()) return cmd_probe(g, path);
    if (lemma->parsed()) return cmd_lemma_q(g, trials, app.get_option("--tol")->count() > 0 ? g.tol : 1e-11);
  } catch (const gc::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const gc::DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const gc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitInput;
}
