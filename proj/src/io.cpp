#include "grasscurve/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "grasscurve/errors.hpp"
#include "grasscurve/gauge.hpp"

namespace grasscurve {

using nlohmann::json;

namespace {

json block_to_json(const CoeffBlock& b) {
  json rows = json::array();
  for (int r = 0; r < 2; ++r) {
    json row = json::array();
    for (Eigen::Index k = 0; k < b.cols(); ++k) row.push_back({b(r, k).real(), b(r, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

double finite_number(const json& x, const std::string& where) {
  if (!x.is_number()) throw InputError(where + ": expected a number");
  const double v = x.get<double>();
  if (!std::isfinite(v)) throw InputError(where + ": non-finite value");
  return v;
}

CoeffBlock block_from_json(const json& j, int n, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw InputError(where + ": expected 2 rows");
  CoeffBlock b(2, n);
  for (int r = 0; r < 2; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      throw InputError(where + ": row " + std::to_string(r) + " must have n = " + std::to_string(n) + " entries");
    }
    for (int k = 0; k < n; ++k) {
      const json& z = row[k];
      if (!z.is_array() || z.size() != 2) throw InputError(where + ": entries are [re, im] pairs");
      b(r, k) = cplx(finite_number(z[0], where), finite_number(z[1], where));
    }
  }
  return b;
}

int int_field(const json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("curve JSON: missing \"") + key + "\"");
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw InputError(std::string("curve JSON: \"") + key + "\" must be an integer");
  return v.get<int>();
}

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

}  // namespace

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json curve_to_json(const Curve& c) {
  json coeffs = json::array();
  for (const auto& b : c.blocks()) coeffs.push_back(block_to_json(b));
  return json{{"schema_version", kSchemaVersion}, {"n", c.n()}, {"d", c.d()}, {"coeffs", std::move(coeffs)}};
}

LoadedCurve curve_from_json(const json& j) {
  if (!j.is_object()) throw InputError("curve JSON: top level must be an object");
  if (j.contains("schema_version")) {
    const json& v = j.at("schema_version");
    if (!v.is_number_integer() || v.get<int>() != kSchemaVersion) {
      throw InputError("curve JSON: unsupported schema_version");
    }
  }
  const int n = int_field(j, "n");
  const int d = int_field(j, "d");
  if (n < 1 || d < 1) throw InputError("curve JSON: n and d must be positive");
  if (!j.contains("coeffs") || !j.at("coeffs").is_array()) throw InputError("curve JSON: \"coeffs\" must be an array");
  std::vector<CoeffBlock> blocks;
  int alpha = 1;
  for (const auto& b : j.at("coeffs")) {
    blocks.push_back(block_from_json(b, n, "coeffs[" + std::to_string(alpha - 1) + "]"));
    ++alpha;
  }
  LoadedCurve out{Curve(n, d, blocks), false, {}};
  if (j.contains("a0")) {
    const CoeffBlock a0 = block_from_json(j.at("a0"), n, "a0");
    if (a0.cwiseAbs().maxCoeff() > 0.0) {
      out.curve = recenter(n, d, a0, blocks);
      out.recentered = true;
      out.notes.push_back("nonzero constant term a0: curve moved into chart form with F(0) = 0");
    }
  }
  return out;
}

std::string dump_curve(const Curve& c) { return curve_to_json(c).dump(); }

LoadedCurve parse_curve(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("curve JSON: ") + e.what());
  }
  return curve_from_json(j);
}

LoadedCurve load_curve_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_curve(ss.str());
}

void save_curve_file(const Curve& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << curve_to_json(c).dump(2) << '\n';
}

json to_json(const VerifyReport& r) {
  json j{{"is_cc", r.is_cc},
         {"is_full", r.is_full},
         {"degree_ok", r.degree_ok},
         {"degree_consistent", r.degree_consistent},
         {"max_residual", r.max_residual},
         {"fullness_rank", r.fullness_rank},
         {"passed", r.passed()}};
  j["implied_degree"] = r.implied_degree ? json(*r.implied_degree) : json(nullptr);
  return j;
}

json to_json(const RamificationReport& r) {
  json zeros = json::array();
  for (const auto& z : r.finite_zeros) zeros.push_back({{"root", cplx_json(z.root)}, {"multiplicity", z.multiplicity}});
  json j{{"degenerate", r.degenerate},
         {"deg_g", r.deg_g},
         {"finite_zeros", std::move(zeros)},
         {"zero_at_infinity_mult", r.zero_at_infinity_mult},
         {"max_component_degree", r.max_component_degree},
         {"content_degree", r.content_degree},
         {"sylvester_content_degree", r.sylvester_content_degree},
         {"gcd_condition", number_or_null(r.gcd_condition)},
         {"cluster_radius_used", r.cluster_radius_used},
         {"ill_conditioned", r.ill_conditioned},
         {"degree_overflow", r.degree_overflow}};
  j["r_index"] = r.r_index ? json(*r.r_index) : json("undefined");
  if (r.degenerate) {
    j.erase("deg_g");
    j.erase("finite_zeros");
  }
  return j;
}

json to_json(const TailProbe& p) {
  json lam = json::array();
  for (std::size_t i = 0; i < p.lambda.size(); ++i) {
    lam.push_back({{"index", p.rho_min + static_cast<int>(i)}, {"value", cplx_json(p.lambda[i])}});
  }
  return json{{"tau", p.tau},
              {"rho_min", p.rho_min},
              {"lambda", std::move(lam)},
              {"residual", p.residual},
              {"fullness_rank", p.fullness_rank},
              {"dim_bound_ok", p.dim_bound_ok},
              {"tau_ok", p.tau_ok},
              {"cc_ok", p.cc_ok},
              {"rows_swapped", p.rows_swapped}};
}

json to_json(const SearchReport& r) {
  json hist = json::object();
  for (const auto& [bin, count] : r.histogram) hist["1e" + std::to_string(bin)] = count;
  json j{{"schema_version", kSchemaVersion},
         {"n", r.n},
         {"d", r.d},
         {"seed", r.seed},
         {"feasible", r.feasible},
         {"best_residual", number_or_null(r.best_residual)},
         {"best_residual_any", number_or_null(r.best_residual_any)},
         {"full", r.full},
         {"fullness_rank", r.fullness_rank},
         {"restart_stats", std::move(hist)},
         {"restarts_run", r.restarts_run},
         {"wall_time", r.wall_time},
         {"label", r.label}};
  j["restarts_to_hit"] = r.restarts_to_hit ? json(*r.restarts_to_hit) : json(nullptr);
  j["best_curve"] = r.best_curve ? curve_to_json(*r.best_curve) : json(nullptr);
  return j;
}

json scan_to_json(const std::vector<SearchReport>& rows) {
  json table = json::array();
  for (const auto& r : rows) {
    table.push_back({{"d", r.d},
                     {"feasible", r.feasible},
                     {"best_residual", number_or_null(r.best_residual)},
                     {"restarts_to_hit", r.restarts_to_hit ? json(*r.restarts_to_hit) : json(nullptr)},
                     {"restarts_run", r.restarts_run},
                     {"wall_time", r.wall_time},
                     {"label", r.label}});
  }
  return json{{"schema_version", kSchemaVersion}, {"n", rows.empty() ? 0 : rows.front().n}, {"rows", std::move(table)}};
}

std::string scan_to_csv(const std::vector<SearchReport>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "d,feasible,best_residual,restarts_to_hit,restarts_run,wall_time\n";
  for (const auto& r : rows) {
    out << r.d << ',' << (r.feasible ? "true" : "false") << ',' << r.best_residual << ',';
    if (r.restarts_to_hit) out << *r.restarts_to_hit;
    out << ',' << r.restarts_run << ',' << r.wall_time << '\n';
  }
  return out.str();
}

}  // namespace grasscurve
