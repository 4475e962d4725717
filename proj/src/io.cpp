// Copyright 2026 The war Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "war/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "war/error.hpp"

namespace war::io {
namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  return out;
}

template <typename T>
T get(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw InputError(where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(where + ": bad field '" + key + "': " + e.what());
  }
}

Json meta_to_json(const SeriesMeta& meta) {
  Json j;
  j["burn_in"] = meta.burn_in;
  j["seed"] = meta.seed ? Json(meta.seed->value) : Json(nullptr);
  Json params;
  params["alpha"] = meta.alpha ? Json(*meta.alpha) : Json(nullptr);
  params["system"] = meta.system ? Json(std::string(to_string(*meta.system))) : Json(nullptr);
  params["s"] = meta.s_name;
  j["params"] = params;
  j["noise"] = meta.noise ? to_json(*meta.noise) : Json(nullptr);
  return j;
}

SeriesMeta meta_from_json(const Json& j) {
  SeriesMeta meta;
  meta.burn_in = j.value("burn_in", std::size_t{0});
  if (j.contains("seed") && !j["seed"].is_null()) meta.seed = Seed{j["seed"].get<std::uint64_t>()};
  if (j.contains("params")) {
    const Json& p = j["params"];
    if (p.contains("alpha") && !p["alpha"].is_null()) meta.alpha = p["alpha"].get<double>();
    if (p.contains("system") && !p["system"].is_null()) {
      meta.system = parse_system_kind(p["system"].get<std::string>());
    }
    meta.s_name = p.value("s", std::string());
  }
  if (j.contains("noise") && !j["noise"].is_null()) meta.noise = noise_from_json(j["noise"]);
  return meta;
}

std::vector<UnitMap> maps_from_rows(const std::vector<std::vector<double>>& rows, std::size_t m,
                                    const std::string& where) {
  std::vector<UnitMap> maps;
  maps.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m + 1) {
      throw InputError(where + ": row " + std::to_string(i) + " has " +
                       std::to_string(rows[i].size()) + " values, expected " +
                       std::to_string(m + 1));
    }
    try {
      maps.push_back(UnitMap::from_data(rows[i]));
    } catch (const DegenerateMapError& e) {
      throw InputError(where + ": row " + std::to_string(i) + ": " + e.what());
    }
  }
  return maps;
}

struct Container {
  Json header;
  std::vector<std::vector<double>> rows;
  std::size_t m = 0;
};

Container read_container(const fs::path& path, const char* expected_format) {
  Container c;
  c.header = read_json(path);
  const std::string where = path.string();
  const auto format = get<std::string>(c.header, "format", where);
  if (format != expected_format) {
    throw InputError(where + ": expected format '" + expected_format + "', found '" + format + "'");
  }
  c.m = get<std::size_t>(c.header, "m", where);
  const auto matrix = get<std::string>(c.header, "matrix", where);
  c.rows = read_matrix(path.parent_path() / matrix);
  const auto n = get<std::size_t>(c.header, "n", where);
  if (c.rows.size() != n) {
    throw InputError(where + ": header says n = " + std::to_string(n) + " but the matrix has " +
                     std::to_string(c.rows.size()) + " rows");
  }
  return c;
}

}  // namespace

Json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_json(const fs::path& path, const Json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

std::vector<std::vector<double>> read_matrix(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
        if (used != cell.size()) throw std::invalid_argument("trailing text");
      } catch (const std::exception&) {
        throw InputError(path.string() + ":" + std::to_string(line_no) + ": not a number: '" +
                         cell + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_matrix(const fs::path& path, const std::vector<std::span<const double>>& rows) {
  auto out = open_out(path);
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k > 0) out << ',';
      out << format_double(row[k]);
    }
    out << '\n';
  }
}

fs::path sibling(const fs::path& path, const std::string& suffix) {
  fs::path out = path;
  out.replace_filename(path.stem().string() + suffix);
  return out;
}

Json to_json(const NoiseSpec& spec) {
  Json j;
  j["k_max"] = spec.k_max;
  j["weights"] = spec.weights;
  j["include_identity_prob"] = spec.include_identity_prob;
  return j;
}

NoiseSpec noise_from_json(const Json& j) {
  NoiseSpec spec;
  const std::string where = "noise spec";
  if (!j.is_object()) throw InputError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "k_max" && key != "weights" && key != "include_identity_prob") {
      throw ConfigError(where + ": unknown field '" + key + "'");
    }
  }
  if (j.contains("k_max")) spec.k_max = get<int>(j, "k_max", where);
  if (j.contains("weights")) spec.weights = get<std::vector<double>>(j, "weights", where);
  if (j.contains("include_identity_prob")) {
    spec.include_identity_prob = get<double>(j, "include_identity_prob", where);
  }
  spec.validate();
  return spec;
}

NoiseSpec read_noise(const fs::path& path) { return noise_from_json(read_json(path)); }

void write_unit_map(const fs::path& path, const UnitMap& map) {
  if (path.extension() == ".json") {
    Json j;
    j["m"] = map.grid_size();
    j["values"] = std::vector<double>(map.values().begin(), map.values().end());
    write_json(path, j);
    return;
  }
  auto out = open_out(path);
  out << "x,value\n";
  const auto md = static_cast<double>(map.grid_size());
  for (std::size_t k = 0; k <= map.grid_size(); ++k) {
    out << format_double(static_cast<double>(k) / md) << ',' << format_double(map[k]) << '\n';
  }
}

UnitMap read_unit_map(const fs::path& path) {
  std::vector<double> values;
  if (path.extension() == ".json") {
    const Json j = read_json(path);
    values = get<std::vector<double>>(j, "values", path.string());
    if (j.contains("m") && j["m"].get<std::size_t>() + 1 != values.size()) {
      throw InputError(path.string() + ": m does not match the number of values");
    }
  } else {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (line.empty() || line == "\r") continue;
      if (first && line.rfind("x,", 0) == 0) {
        first = false;
        continue;
      }
      first = false;
      const auto comma = line.find(',');
      const std::string cell = comma == std::string::npos ? line : line.substr(comma + 1);
      try {
        values.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw InputError(path.string() + ": not a number: '" + cell + "'");
      }
    }
  }
  try {
    return UnitMap::from_data(std::move(values));
  } catch (const DegenerateMapError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_map_series(const fs::path& path, const MapSeries& series) {
  series.validate();
  const fs::path matrix = sibling(path, ".csv");
  Json j;
  j["format"] = kMapSeriesFormat;
  j["version"] = 1;
  j["m"] = series.grid_size();
  j["n"] = series.size();
  const Json meta = meta_to_json(series.meta);
  for (const auto& [key, value] : meta.items()) j[key] = value;
  j["matrix"] = matrix.filename().string();
  std::vector<std::span<const double>> rows;
  for (const auto& t : series.maps) rows.push_back(t.values());
  write_matrix(matrix, rows);
  write_json(path, j);
}

MapSeries read_map_series(const fs::path& path) {
  const Container c = read_container(path, kMapSeriesFormat);
  MapSeries series;
  series.maps = maps_from_rows(c.rows, c.m, path.string());
  series.meta = meta_from_json(c.header);
  return series;
}

void write_curve_series(const fs::path& path, const EmpiricalSeries& series) {
  series.validate();
  const fs::path matrix = sibling(path, ".csv");
  Json j;
  j["format"] = kCurveSeriesFormat;
  j["version"] = 1;
  j["m"] = series.curves.empty() ? 0 : series.curves.front().unit().grid_size();
  j["n"] = series.curves.size();
  j["domain"] = {series.domain.lo(), series.domain.hi()};
  j["periods"] = series.periods;
  j["tie_repaired"] = series.tie_repaired;
  j["matrix"] = matrix.filename().string();
  std::vector<std::span<const double>> rows;
  for (const auto& q : series.curves) rows.push_back(q.unit().values());
  write_matrix(matrix, rows);
  write_json(path, j);
}

EmpiricalSeries read_curve_series(const fs::path& path) {
  const Container c = read_container(path, kCurveSeriesFormat);
  const std::string where = path.string();
  const auto dom = get<std::vector<double>>(c.header, "domain", where);
  if (dom.size() != 2) throw InputError(where + ": domain must be [lo, hi]");
  EmpiricalSeries s;
  s.domain = Interval(dom[0], dom[1]);
  s.periods = get<std::vector<std::string>>(c.header, "periods", where);
  if (s.periods.size() != c.rows.size()) throw InputError(where + ": one period per row required");
  if (c.header.contains("tie_repaired")) {
    s.tie_repaired = c.header["tie_repaired"].get<std::vector<std::string>>();
  }
  for (auto& unit : maps_from_rows(c.rows, c.m, where)) s.curves.emplace_back(s.domain, std::move(unit));
  s.validate();
  return s;
}

std::string series_format(const fs::path& path) {
  return get<std::string>(read_json(path), "format", path.string());
}

Json to_json(const FitResult& r) {
  Json j;
  j["system"] = std::string(to_string(r.system));
  j["alpha_hat"] = r.alpha_hat;
  j["objective_at_opt"] = r.objective_at_opt;
  j["n_used"] = r.n_used;
  j["derivative_at_opt"] = r.derivative_at_opt ? Json(*r.derivative_at_opt) : Json(nullptr);
  j["flat_objective"] = r.flat_objective;
  j["min_contracted_slope"] = r.min_contracted_slope;
  j["ill_conditioned"] = r.ill_conditioned;
  j["m"] = r.s_hat.grid_size();
  return j;
}

void write_fit(const fs::path& path, const FitResult& r) {
  Json j = to_json(r);
  const fs::path s_path = sibling(path, "_s_hat.csv");
  const fs::path profile_path = sibling(path, "_profile.csv");
  j["s_hat"] = s_path.filename().string();
  j["profile"] = profile_path.filename().string();
  write_unit_map(s_path, r.s_hat);
  auto out = open_out(profile_path);
  out << "alpha,objective\n";
  for (const auto& [a, v] : r.objective_profile) out << format_double(a) << ',' << format_double(v) << '\n';
  out.close();
  write_json(path, j);
}

Json to_json(const StationarityReport& r) {
  Json j;
  j["l_s"] = r.l_s;
  j["l_eps"] = r.l_eps;
  j["product"] = r.product;
  j["r"] = r.r;
  j["satisfied"] = r.satisfied;
  j["negative_alpha_caveat"] = r.negative_alpha_caveat;
  j["in_theory_region"] = r.in_theory_region();
  return j;
}

Json to_json(const GridReport& r) {
  Json cells = Json::array();
  for (const auto& c : r.cells) {
    Json j;
    j["alpha_true"] = c.alpha_true;
    j["s_name"] = c.s_name;
    j["n_ok"] = c.n_ok;
    j["n_failed"] = c.n_failed;
    j["alpha_hat_median"] = c.alpha_hat_median;
    j["alpha_hat_iqr"] = c.alpha_hat_iqr;
    j["s_error_median"] = c.s_error_median;
    j["s_error_iqr"] = c.s_error_iqr;
    j["stationary"] = c.stationary;
    j["in_theory_region"] = c.in_theory_region;
    j["stationarity"] = c.stationarity ? to_json(*c.stationarity) : Json(nullptr);
    cells.push_back(std::move(j));
  }
  Json failures = Json::array();
  for (const auto& rep : r.replicates) {
    if (!rep.ok) {
      failures.push_back({{"cell", rep.cell}, {"replicate", rep.replicate}, {"error", rep.error}});
    }
  }
  return {{"cells", cells}, {"failures", failures}};
}

void write_grid_csv(const fs::path& path, const GridReport& r) {
  auto out = open_out(path);
  out << "cell,replicate,alpha_true,s_name,ok,alpha_hat,s_error\n";
  for (const auto& rep : r.replicates) {
    out << rep.cell << ',' << rep.replicate << ',' << format_double(rep.alpha_true) << ','
        << rep.s_name << ',' << (rep.ok ? 1 : 0) << ',' << format_double(rep.alpha_hat) << ','
        << format_double(rep.s_error) << '\n';
  }
}

namespace {
Json slope_json(const SlopeEstimate& s) {
  Json j;
  j["slope"] = s.slope ? Json(*s.slope) : Json(nullptr);
  j["band"] = {s.band_lo, s.band_hi};
  return j;
}
}  // namespace

Json to_json(const RateReport& r) {
  Json points = Json::array();
  for (const auto& p : r.points) {
    points.push_back({{"n", p.n},
                      {"alpha_rmse", p.alpha_rmse},
                      {"s_error_mean", p.s_error_mean},
                      {"alpha_hats", p.alpha_hats},
                      {"s_errors", p.s_errors}});
  }
  Json j;
  j["points"] = points;
  j["alpha_slope"] = slope_json(r.alpha_slope);
  j["s_slope"] = slope_json(r.s_slope);
  j["undefined"] = r.undefined;
  return j;
}

Json to_json(const InverseSweepReport& r) {
  Json j;
  j["n_pairs"] = r.n_pairs;
  j["slope_band"] = {r.slope_lo, r.slope_hi};
  j["bound_factor"] = r.bound_factor;
  j["additive"] = r.additive;
  j["max_ratio"] = r.max_ratio;
  j["violations"] = r.violations;
  j["sqrt_constant"] = r.sqrt_constant;
  return j;
}

Json to_json(const ComparisonReport& r) {
  Json j;
  j["increment"] = to_json(r.increment);
  j["quantile"] = to_json(r.quantile);
  j["increment_objective_at_zero"] = r.increment_at_zero;
  j["quantile_objective_at_one"] = r.quantile_at_one;
  j["bridging_rel_error"] = r.bridging_rel_error;
  j["bridging_holds"] = r.bridging_holds;
  j["increment_prediction_error"] = r.increment_prediction_error;
  j["quantile_prediction_error"] = r.quantile_prediction_error;
  j["verdict"] = std::string(to_string(r.verdict));
  return j;
}

}  // namespace war::io
