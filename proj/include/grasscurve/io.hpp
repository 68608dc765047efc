#pragma once

// Curve JSON and report serialization.
//
// Curve schema:
//   {"schema_version": 1, "n": int, "d": int,
//    "coeffs": [[[re, im] x n] x 2] x deg_max,     alpha ascending from 1
//    "a0": [[re, im] x n] x 2}                     optional constant term
// Doubles are written with round-trip precision, so save/load is bit-exact.

#include <json.hpp>
#include <string>
#include <vector>

#include "grasscurve/curve.hpp"
#include "grasscurve/invariants.hpp"
#include "grasscurve/solver.hpp"

namespace grasscurve {

inline constexpr int kSchemaVersion = 1;

struct LoadedCurve {
  Curve curve;
  /// The file carried a nonzero a0 and was moved into chart form.
  bool recentered = false;
  std::vector<std::string> notes;
};

nlohmann::json curve_to_json(const Curve& c);
/// Throws InputError on schema violations; DomainError if recentering fails.
LoadedCurve curve_from_json(const nlohmann::json& j);

std::string dump_curve(const Curve& c);
LoadedCurve parse_curve(const std::string& text);
LoadedCurve load_curve_file(const std::string& path);
void save_curve_file(const Curve& c, const std::string& path);

nlohmann::json to_json(const VerifyReport& r);
nlohmann::json to_json(const RamificationReport& r);
nlohmann::json to_json(const TailProbe& p);
nlohmann::json to_json(const SearchReport& r);
nlohmann::json scan_to_json(const std::vector<SearchReport>& rows);
/// Columns d,feasible,best_residual,restarts_to_hit,restarts_run,wall_time.
std::string scan_to_csv(const std::vector<SearchReport>& rows);

/// Non-finite doubles become null.
nlohmann::json number_or_null(double x);

}  // namespace grasscurve
