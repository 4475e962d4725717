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

// File formats.
//
// Series containers are a JSON header plus a CSV matrix (one row per time
// step, one column per grid node) stored next to it; the header names the
// matrix file relative to its own directory. Numbers are written with 17
// significant digits so that every value round-trips exactly.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "war/dynamics.hpp"
#include "war/estimation.hpp"
#include "war/experiments.hpp"
#include "war/ingest.hpp"
#include "war/noise.hpp"

namespace war::io {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

inline constexpr const char* kMapSeriesFormat = "war.map-series";
inline constexpr const char* kCurveSeriesFormat = "war.curve-series";

Json read_json(const fs::path& path);
void write_json(const fs::path& path, const Json& j);

std::vector<std::vector<double>> read_matrix(const fs::path& path);
void write_matrix(const fs::path& path, const std::vector<std::span<const double>>& rows);

/// Sibling path with the extension replaced: ("a/b.json", "_s.csv") -> "a/b_s.csv".
fs::path sibling(const fs::path& path, const std::string& suffix);

Json to_json(const NoiseSpec& spec);
NoiseSpec noise_from_json(const Json& j);
NoiseSpec read_noise(const fs::path& path);

/// UnitMap as CSV "x,value" (.csv) or JSON {"m": M, "values": [...]}.
void write_unit_map(const fs::path& path, const UnitMap& map);
UnitMap read_unit_map(const fs::path& path);

/// Writes `path` (JSON header) and `sibling(path, ".csv")` (matrix).
void write_map_series(const fs::path& path, const MapSeries& series);
MapSeries read_map_series(const fs::path& path);

/// Curve series: the same container with the domain and period keys added.
void write_curve_series(const fs::path& path, const EmpiricalSeries& series);
EmpiricalSeries read_curve_series(const fs::path& path);

/// Format tag of a series file ("war.map-series" or "war.curve-series").
std::string series_format(const fs::path& path);

Json to_json(const FitResult& r);
/// FitResult JSON at `path`, S_hat CSV at sibling "_s_hat.csv" and the
/// objective profile at sibling "_profile.csv" ("alpha,objective").
void write_fit(const fs::path& path, const FitResult& r);

Json to_json(const StationarityReport& r);
Json to_json(const GridReport& r);
void write_grid_csv(const fs::path& path, const GridReport& r);
Json to_json(const RateReport& r);
Json to_json(const InverseSweepReport& r);
Json to_json(const ComparisonReport& r);

}  // namespace war::io
