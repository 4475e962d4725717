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

#include "war/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <string_view>

#include "war/error.hpp"
#include "war/parallel.hpp"

namespace war {
namespace {

constexpr double kDomainPadding = 0.01;

std::vector<std::string> split_record(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == delim) {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  if (quoted) throw InputError("unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<long> parse_integer(std::string_view s) {
  s = trim(s);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

struct Date {
  int year;
  int month;
};

std::optional<Date> parse_date(std::string_view s) {
  s = trim(s);
  std::string digits;
  for (char ch : s) {
    if (ch >= '0' && ch <= '9') {
      digits += ch;
    } else if (ch != '-' && ch != '/') {
      break;
    }
  }
  if (digits.size() < 6) return std::nullopt;
  const auto year = parse_integer(std::string_view(digits).substr(0, 4));
  const auto month = parse_integer(std::string_view(digits).substr(4, 2));
  if (!year || !month || *month < 1 || *month > 12) return std::nullopt;
  return Date{static_cast<int>(*year), static_cast<int>(*month)};
}

std::size_t column_index(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (trim(header[i]) == name) return i;
  }
  throw InputError("column '" + name + "' not found in header");
}

}  // namespace

void ColumnSpec::validate() const {
  if (value_column.empty()) throw ConfigError("value column name is empty");
  if (period_column.empty() && date_column.empty()) {
    throw ConfigError("need a period column or a date column");
  }
  if ((!months.empty() || year_from || year_to) && date_column.empty()) {
    throw ConfigError("month and year filters need a date column");
  }
  for (int m : months) {
    if (m < 1 || m > 12) throw ConfigError("month filter values must lie in 1..12");
  }
  if (!(std::isfinite(value_scale) && value_scale != 0.0)) {
    throw ConfigError("value scale must be finite and non-zero");
  }
}

void SampleTable::validate() const {
  if (periods.empty()) throw InputError("no periods with data");
  if (periods.size() != values.size()) throw InputError("periods and values differ in length");
  for (std::size_t i = 0; i < periods.size(); ++i) {
    if (values[i].size() < 2) {
      throw InputError("period '" + periods[i] + "' has fewer than two values");
    }
    for (double v : values[i]) {
      if (!std::isfinite(v)) throw InputError("period '" + periods[i] + "' has a non-finite value");
    }
  }
}

SampleTable parse_samples(std::istream& in, const ColumnSpec& spec) {
  spec.validate();
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty input");
  const auto header = split_record(line, spec.delimiter);
  const std::size_t value_col = column_index(header, spec.value_column);
  const std::optional<std::size_t> period_col =
      spec.period_column.empty() ? std::nullopt
                                 : std::optional(column_index(header, spec.period_column));
  const std::optional<std::size_t> date_col =
      spec.date_column.empty() ? std::nullopt : std::optional(column_index(header, spec.date_column));

  std::map<std::string, std::vector<double>> groups;
  std::size_t dropped = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_record(line, spec.delimiter);
    auto field = [&](std::size_t i) -> std::string_view {
      if (i >= fields.size()) {
        throw InputError("line " + std::to_string(line_no) + ": too few fields");
      }
      return fields[i];
    };
    std::optional<Date> date;
    if (date_col) {
      date = parse_date(field(*date_col));
      if (!date) throw InputError("line " + std::to_string(line_no) + ": unparseable date");
      if (!spec.months.empty() &&
          std::find(spec.months.begin(), spec.months.end(), date->month) == spec.months.end()) {
        continue;
      }
      if (spec.year_from && date->year < *spec.year_from) continue;
      if (spec.year_to && date->year > *spec.year_to) continue;
    }
    const std::string key =
        period_col ? std::string(trim(field(*period_col))) : std::to_string(date->year);
    const auto value = parse_number(field(value_col));
    if (!value || key.empty()) {
      ++dropped;
      continue;
    }
    groups[key].push_back(*value * spec.value_scale);
  }

  std::vector<std::pair<std::string, std::vector<double>>> ordered(groups.begin(), groups.end());
  const bool numeric = std::all_of(ordered.begin(), ordered.end(),
                                   [](const auto& g) { return parse_integer(g.first).has_value(); });
  if (numeric) {
    std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
      return *parse_integer(a.first) < *parse_integer(b.first);
    });
  }
  SampleTable table;
  table.dropped_rows = dropped;
  for (auto& [key, vals] : ordered) {
    table.periods.push_back(key);
    table.values.push_back(std::move(vals));
  }
  table.validate();
  return table;
}

SampleTable load_samples(const std::string& path, const ColumnSpec& spec) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  return parse_samples(in, spec);
}

void EmpiricalSeries::validate() const {
  if (periods.size() != curves.size()) throw InputError("one curve per period required");
  for (std::size_t i = 0; i < curves.size(); ++i) {
    if (!(curves[i].domain() == domain)) throw InputError("curves must share the series domain");
    if (curves[i].unit().grid_size() != curves.front().unit().grid_size()) {
      throw InputError("curves must share one grid");
    }
    if (i > 0 && periods[i] == periods[i - 1]) throw InputError("repeated period key");
  }
}

std::vector<double> sample_quantiles(const std::vector<double>& sorted, std::size_t m) {
  const std::size_t n = sorted.size();
  std::vector<double> q(m + 1);
  const auto md = static_cast<double>(m);
  for (std::size_t k = 0; k <= m; ++k) {
    const double h = static_cast<double>(k) / md * static_cast<double>(n - 1);
    const auto lo = std::min(static_cast<std::size_t>(std::floor(h)), n - 1);
    const double frac = h - static_cast<double>(lo);
    q[k] = lo + 1 < n ? sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]) : sorted[lo];
  }
  return q;
}

EmpiricalSeries empirical_quantiles(const SampleTable& table, std::size_t m,
                                    const std::optional<Interval>& domain) {
  if (m < 10) throw ConfigError("quantile grid needs m >= 10");
  table.validate();

  std::vector<std::vector<double>> sorted(table.values);
  for (auto& v : sorted) std::sort(v.begin(), v.end());
  double lo = sorted.front().front();
  double hi = sorted.front().back();
  for (const auto& v : sorted) {
    lo = std::min(lo, v.front());
    hi = std::max(hi, v.back());
  }
  Interval dom = domain.value_or(Interval(0.0, 1.0));
  if (domain) {
    if (lo < dom.lo() || hi > dom.hi()) throw InputError("samples fall outside the given domain");
  } else {
    if (!(hi > lo)) throw InputError("all samples are equal; cannot infer a domain");
    const double pad = kDomainPadding * (hi - lo);
    dom = Interval(lo - pad, hi + pad);
  }

  const std::size_t n = sorted.size();
  std::vector<std::optional<QuantileCurve>> curves(n);
  std::vector<char> repaired(n, 0);
  parallel_for(n, [&](std::size_t i) {
    std::vector<double> u = sample_quantiles(sorted[i], m);
    for (double& x : u) x = std::clamp((x - dom.lo()) / dom.width(), 0.0, 1.0);
    u.front() = 0.0;
    u.back() = 1.0;
    repaired[i] = detail::repair_ties(u) > 0 ? 1 : 0;
    curves[i].emplace(dom, UnitMap::from_values(std::move(u)));
  });

  EmpiricalSeries out;
  out.domain = dom;
  out.periods = table.periods;
  for (std::size_t i = 0; i < n; ++i) {
    out.curves.push_back(std::move(*curves[i]));
    if (repaired[i] != 0) out.tie_repaired.push_back(table.periods[i]);
  }
  return out;
}

}  // namespace war
