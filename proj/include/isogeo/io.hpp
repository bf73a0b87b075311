#pragma once

#include "isogeo/bures_compare.hpp"

#include <filesystem>
#include <json.hpp>

namespace isogeo::io {

using json = nlohmann::json;

// File system or syntax failure; the CLI maps it onto exit code 1.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// {"rows": n, "cols": k, "data": [[re, im], ...]} in row-major order.
json matrix_to_json(const CMatrix<double>& m);
CMatrix<double> matrix_from_json(const json& j);

// {"times": [...], "matrices": [matrix, ...]}
json series_to_json(const std::vector<double>& times, const std::vector<CMatrix<double>>& matrices);
std::pair<std::vector<double>, std::vector<CMatrix<double>>> series_from_json(const json& j);

json curve_to_json(const StateCurve<double>& curve);
StateCurve<double> curve_from_json(const json& j, const Tolerances& tol = {});

json lift_to_json(const LiftedCurve<double>& lift);

json schedule_to_json(const HamiltonianSchedule<double>& h);
HamiltonianSchedule<double> schedule_from_json(const json& j, double hbar, const Tolerances& tol = {});

json report_to_json(const BuresReport<double>& r);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

}  // namespace isogeo::io
