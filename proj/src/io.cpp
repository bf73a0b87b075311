#include "isogeo/io.hpp"

#include <fstream>

namespace isogeo::io {

json matrix_to_json(const CMatrix<double>& m) {
  json data = json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) data.push_back({m(i, j).real(), m(i, j).imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

CMatrix<double> matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data")) {
    throw IoError("matrix object needs rows, cols and data");
  }
  const auto rows = j.at("rows").get<Index>();
  const auto cols = j.at("cols").get<Index>();
  const auto& data = j.at("data");
  if (rows < 1 || cols < 1) throw IoError("matrix dimensions must be positive");
  if (!data.is_array() || static_cast<Index>(data.size()) != rows * cols) {
    throw IoError("matrix data must hold rows*cols entries");
  }
  CMatrix<double> m(rows, cols);
  for (Index e = 0; e < rows * cols; ++e) {
    const auto& z = data.at(static_cast<std::size_t>(e));
    if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
      throw IoError("matrix entries must be [re, im] pairs");
    }
    m(e / cols, e % cols) = {z[0].get<double>(), z[1].get<double>()};
  }
  return m;
}

json series_to_json(const std::vector<double>& times, const std::vector<CMatrix<double>>& matrices) {
  json mats = json::array();
  for (const auto& m : matrices) mats.push_back(matrix_to_json(m));
  return {{"times", times}, {"matrices", std::move(mats)}};
}

std::pair<std::vector<double>, std::vector<CMatrix<double>>> series_from_json(const json& j) {
  if (!j.is_object() || !j.contains("times") || !j.contains("matrices")) {
    throw IoError("series object needs times and matrices");
  }
  std::vector<double> times;
  try {
    times = j.at("times").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw IoError(std::string("times: ") + e.what());
  }
  std::vector<CMatrix<double>> mats;
  for (const auto& m : j.at("matrices")) mats.push_back(matrix_from_json(m));
  if (mats.size() != times.size()) throw IoError("times and matrices differ in length");
  return {std::move(times), std::move(mats)};
}

json curve_to_json(const StateCurve<double>& curve) { return series_to_json(curve.times(), curve.matrices()); }

StateCurve<double> curve_from_json(const json& j, const Tolerances& tol) {
  auto [times, mats] = series_from_json(j);
  std::vector<DensityOperator<double>> states;
  states.reserve(mats.size());
  for (const auto& m : mats) states.push_back(density_from_matrix(m, tol));
  return StateCurve<double>(std::move(times), std::move(states), tol);
}

json lift_to_json(const LiftedCurve<double>& lift) { return series_to_json(lift.times, lift.matrices()); }

json schedule_to_json(const HamiltonianSchedule<double>& h) {
  json j = series_to_json(h.times(), h.matrices());
  j["hbar"] = h.hbar();
  return j;
}

HamiltonianSchedule<double> schedule_from_json(const json& j, double hbar, const Tolerances& tol) {
  auto [times, mats] = series_from_json(j);
  std::vector<Observable<double>> ops;
  ops.reserve(mats.size());
  for (auto& m : mats) ops.emplace_back(std::move(m), hbar, tol);
  return HamiltonianSchedule<double>(std::move(times), std::move(ops));
}

json report_to_json(const BuresReport<double>& r) {
  return {{"p1", r.p1}, {"p2", r.p2}, {"eps", r.eps}, {"dist_g", r.dist_g},
          {"dist_B", r.dist_B}, {"gap", r.gap}, {"strict", r.strict}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("FileNotFound: " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError("ParseError: " + path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
}

}  // namespace isogeo::io
