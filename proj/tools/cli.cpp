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

#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <optional>

#include "CLI11.hpp"
#include "war/dynamics.hpp"
#include "war/error.hpp"
#include "war/estimation.hpp"
#include "war/experiments.hpp"
#include "war/ingest.hpp"
#include "war/io.hpp"
#include "war/parallel.hpp"
#include "war/transport.hpp"

namespace war::cli {
namespace {

namespace fs = std::filesystem;
using io::Json;

struct NoiseOptions {
  std::string source = "default";  // "default", "none" or a JSON file
  std::optional<int> k_max;
  std::vector<double> weights;
  std::optional<double> identity_prob;

  void attach(CLI::App* app) {
    app->add_option("--noise", source, "Noise law: 'default', 'none' or a JSON file")
        ->capture_default_str();
    app->add_option("--k-max", k_max, "Override the largest |K| of the noise law");
    app->add_option("--weights", weights, "Override the mixture weights (comma separated)")
        ->delimiter(',');
    app->add_option("--identity-prob", identity_prob, "Override P(K = 0)");
  }

  [[nodiscard]] NoiseSpec build() const {
    NoiseSpec spec;
    if (source == "none") {
      spec = NoiseSpec::none();
    } else if (source != "default") {
      spec = io::read_noise(source);
    }
    if (k_max) spec.k_max = *k_max;
    if (!weights.empty()) spec.weights = weights;
    if (identity_prob) spec.include_identity_prob = *identity_prob;
    spec.validate();
    return spec;
  }
};

struct FitOptions {
  std::optional<double> step;
  std::optional<double> lo;
  std::optional<double> hi;
  std::optional<double> tol;
  bool no_endpoints = false;
  std::string slope_rule = "central";

  void attach(CLI::App* app) {
    app->add_option("--alpha-step", step, "Scan step of the alpha grid (default 0.01)");
    app->add_option("--alpha-lo", lo, "Lower alpha bound of the scan (default -0.999)");
    app->add_option("--alpha-hi", hi, "Upper alpha bound of the scan (default 0.999)");
    app->add_option("--refine-tol", tol, "Golden-section tolerance (default 1e-4)");
    app->add_flag("--no-endpoints", no_endpoints, "Do not score alpha = -1 and alpha = 1");
    app->add_option("--slope-rule", slope_rule, "Derivative slope rule: central or segment")
        ->check(CLI::IsMember({"central", "segment"}))
        ->capture_default_str();
  }

  [[nodiscard]] FitConfig build() const {
    FitConfig cfg;
    if (step) cfg.alpha_grid_step = *step;
    if (lo) cfg.alpha_lo = *lo;
    if (hi) cfg.alpha_hi = *hi;
    if (tol) cfg.refine_tol = *tol;
    cfg.score_unit_endpoints = !no_endpoints;
    cfg.slope_rule = slope_rule == "segment" ? SlopeRule::Segment : SlopeRule::Central;
    cfg.validate();
    return cfg;
  }
};

/// A map given as a built-in name or a file (.csv or .json).
UnitMap resolve_map(const std::string& source, std::size_t m) {
  if (fs::exists(source)) {
    UnitMap map = io::read_unit_map(source);
    if (map.grid_size() != m) {
      throw ConfigError("map file '" + source + "' has M = " + std::to_string(map.grid_size()) +
                        ", expected " + std::to_string(m));
    }
    return map;
  }
  return builtin_map(source, m);
}

Interval parse_domain(const std::vector<double>& d) {
  if (d.size() != 2) throw ConfigError("domain must be given as lo,hi");
  return {d[0], d[1]};
}

std::uint64_t effective_seed(std::uint64_t flag) {
  if (const char* env = std::getenv("WAR_SEED"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 0);
    if (end == nullptr || *end != '\0') throw ConfigError("WAR_SEED is not an integer");
    return v;
  }
  return flag;
}

ModelKind resolve_model(const std::string& name, const std::string& reference, std::size_t m,
                        const Interval& domain) {
  const ModelKindTag tag = parse_model_kind(name);
  if (tag == ModelKindTag::GeneralizedQuantile) {
    if (reference.empty()) throw ConfigError("--model gq needs --reference");
    return ModelKind::generalized_quantile(QuantileCurve(domain, resolve_map(reference, m)));
  }
  if (!reference.empty()) throw ConfigError("--reference only applies to --model gq");
  return {tag, std::nullopt};
}

void emit(std::ostream& out, const Json& j, const std::string& path) {
  if (!path.empty()) io::write_json(path, j);
  out << j.dump(2) << '\n';
}

int fail(std::ostream& err, const char* kind, const std::string& message, int code) {
  Json j;
  j["error"] = {{"kind", kind}, {"message", message}, {"exit_code", code}};
  err << j.dump() << '\n';
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wasserstein autoregressive models of distribution time series", "war"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  std::size_t threads = 0;
  std::uint64_t seed = 0;
  std::size_t m = kDefaultGridSize;
  app.add_option("--threads", threads, "Worker thread cap (0 = all cores)")->capture_default_str();

  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Run seed (WAR_SEED overrides)")->capture_default_str();
  };
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--m", m, "Grid size M")->check(CLI::Range(std::size_t{10}, std::size_t{1} << 24))
        ->capture_default_str();
  };

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate a map chain");
  double sim_alpha = 0.0;
  std::string sim_s = "id", sim_system = "perturb-then-map", sim_out, sim_init = "id";
  std::size_t sim_steps = 300, sim_burn = 100;
  std::string sim_dist, sim_model = "uq", sim_reference;
  std::vector<double> sim_domain{0.0, 1.0};
  NoiseOptions sim_noise;
  sim->add_option("--alpha", sim_alpha, "Contraction parameter")->required();
  sim->add_option("--s", sim_s, "S: built-in name (id, zeta:K, kinked, steps, mixed) or map file")
      ->capture_default_str();
  sim->add_option("--system", sim_system, "perturb-then-map or contract-about")->capture_default_str();
  sim->add_option("--steps", sim_steps, "Number of transitions")->capture_default_str();
  sim->add_option("--burn-in", sim_burn, "Transitions discarded at the start")->capture_default_str();
  sim->add_option("--init", sim_init, "Initial map T_0 (built-in name or file)")->capture_default_str();
  sim->add_option("--out", sim_out, "Output series header (.json); matrix goes next to it")->required();
  sim->add_option("--distributions", sim_dist, "Also write the implied curve series here");
  sim->add_option("--model", sim_model, "Reading for --distributions: increment, uq or gq")
      ->capture_default_str();
  sim->add_option("--reference", sim_reference, "Reference quantile map for --model gq");
  sim->add_option("--domain", sim_domain, "Domain lo,hi of the curves")->delimiter(',')->expected(2);
  sim_noise.attach(sim);
  add_seed(sim);
  add_grid(sim);

  // fit
  auto* fitc = app.add_subcommand("fit", "Estimate alpha and S");
  std::string fit_in, fit_out, fit_system = "perturb-then-map", fit_model, fit_reference;
  FitOptions fit_opts;
  fitc->add_option("--in", fit_in, "Map series or curve series header (.json)")->required();
  fitc->add_option("--out", fit_out, "FitResult JSON; S_hat and profile CSVs go next to it")->required();
  fitc->add_option("--system", fit_system, "perturb-then-map or contract-about")->capture_default_str();
  fitc->add_option("--model", fit_model, "For curve series: increment, uq or gq");
  fitc->add_option("--reference", fit_reference, "Reference quantile map for --model gq");
  fit_opts.attach(fitc);

  // transform
  auto* tr = app.add_subcommand("transform", "Map algebra on single maps");
  std::string tr_op, tr_f, tr_g, tr_out;
  double tr_alpha = 0.0, tr_p = 2.0;
  std::optional<double> tr_x;
  tr->add_option("--op", tr_op, "compose, invert, contract, contract-about, distance or evaluate")
      ->required()
      ->check(CLI::IsMember({"compose", "invert", "contract", "contract-about", "distance", "evaluate"}));
  tr->add_option("--f", tr_f, "First map (built-in name or file)")->required();
  tr->add_option("--g", tr_g, "Second map: inner map of compose, S of contract-about, other map of distance");
  tr->add_option("--alpha", tr_alpha, "Contraction parameter");
  tr->add_option("--p", tr_p, "Exponent of the Lp distance")->capture_default_str();
  tr->add_option("--x", tr_x, "Evaluation point for evaluate");
  tr->add_option("--out", tr_out, "Output map (.csv or .json) for map-valued operations");
  add_grid(tr);

  // ingest
  auto* ing = app.add_subcommand("ingest", "Empirical quantile curves from per-period samples");
  std::string ing_in, ing_out;
  ColumnSpec cols;
  std::string delimiter = ",";
  std::vector<double> ing_domain;
  ing->add_option("--in", ing_in, "Delimited text file with a header row")->required();
  ing->add_option("--out", ing_out, "Output curve series header (.json)")->required();
  ing->add_option("--period-col", cols.period_column, "Period column ('' to use the year of --date-col)")
      ->capture_default_str();
  ing->add_option("--value-col", cols.value_column, "Value column")->capture_default_str();
  ing->add_option("--date-col", cols.date_column, "Date column (YYYY-MM-DD or YYYYMMDD)");
  ing->add_option("--months", cols.months, "Keep only these months (comma separated)")->delimiter(',');
  ing->add_option("--year-from", cols.year_from, "First year kept");
  ing->add_option("--year-to", cols.year_to, "Last year kept");
  ing->add_option("--delimiter", delimiter, "Field delimiter")->capture_default_str();
  ing->add_option("--scale", cols.value_scale, "Multiply values by this factor")->capture_default_str();
  ing->add_option("--domain", ing_domain, "Fixed domain lo,hi (default: padded data range)")
      ->delimiter(',')
      ->expected(2);
  add_grid(ing);

  // check
  auto* chk = app.add_subcommand("check", "Stationarity sufficient condition");
  double chk_alpha = 0.0;
  std::string chk_s = "id", chk_out;
  NoiseOptions chk_noise;
  chk->add_option("--alpha", chk_alpha, "Contraction parameter")->required();
  chk->add_option("--s", chk_s, "S: built-in name or map file")->capture_default_str();
  chk->add_option("--out", chk_out, "Also write the report here");
  chk_noise.attach(chk);
  add_grid(chk);

  // grid
  auto* grd = app.add_subcommand("grid", "Simulation grid over alpha and S");
  std::vector<double> grd_alphas{-0.9, -0.5, 0.0, 0.5, 0.9};
  std::vector<std::string> grd_s{"zeta:-6", "zeta:-4", "zeta:-2", "mixed", "kinked", "steps"};
  std::size_t grd_steps = 300, grd_burn = 100, grd_reps = 20;
  std::string grd_system = "perturb-then-map", grd_out, grd_csv;
  NoiseOptions grd_noise;
  FitOptions grd_fit;
  grd->add_option("--alphas", grd_alphas, "True alphas (comma separated)")->delimiter(',')
      ->capture_default_str();
  grd->add_option("--s-list", grd_s, "True S maps (comma separated names or files)")->delimiter(',')
      ->capture_default_str();
  grd->add_option("--steps", grd_steps, "Transitions per chain")->capture_default_str();
  grd->add_option("--burn-in", grd_burn, "Burn-in per chain")->capture_default_str();
  grd->add_option("--replicates", grd_reps, "Replicates per cell")->capture_default_str();
  grd->add_option("--system", grd_system, "perturb-then-map or contract-about")->capture_default_str();
  grd->add_option("--out", grd_out, "Report JSON")->required();
  grd->add_option("--csv", grd_csv, "Per-replicate CSV");
  grd_noise.attach(grd);
  grd_fit.attach(grd);
  add_seed(grd);
  add_grid(grd);

  // rate
  auto* rt = app.add_subcommand("rate", "Convergence-rate study");
  std::vector<std::size_t> rt_ns{250, 1000, 4000};
  std::size_t rt_reps = 50, rt_burn = 100, rt_boot = 200;
  double rt_alpha = 0.3;
  std::string rt_s = "zeta:-2", rt_system = "perturb-then-map", rt_out;
  NoiseOptions rt_noise;
  FitOptions rt_fit;
  rt->add_option("--ns", rt_ns, "Series lengths N (comma separated)")->delimiter(',')->capture_default_str();
  rt->add_option("--replicates", rt_reps, "Replicates per N")->capture_default_str();
  rt->add_option("--alpha", rt_alpha, "True alpha")->capture_default_str();
  rt->add_option("--s", rt_s, "True S")->capture_default_str();
  rt->add_option("--system", rt_system, "perturb-then-map or contract-about")->capture_default_str();
  rt->add_option("--burn-in", rt_burn, "Burn-in per chain")->capture_default_str();
  rt->add_option("--bootstrap", rt_boot, "Bootstrap resamples for the slope bands")->capture_default_str();
  rt->add_option("--out", rt_out, "Report JSON")->required();
  rt_noise.attach(rt);
  rt_fit.attach(rt);
  add_seed(rt);
  add_grid(rt);

  // compare
  auto* cmp = app.add_subcommand("compare", "Increment versus quantile model comparison");
  std::string cmp_in, cmp_out;
  FitOptions cmp_fit;
  cmp->add_option("--in", cmp_in, "Curve series header (.json)")->required();
  cmp->add_option("--out", cmp_out, "Report JSON");
  cmp_fit.attach(cmp);

  // sweep
  auto* swp = app.add_subcommand("sweep", "Inverse-map inequality sweep over random pairs");
  std::size_t swp_pairs = 1000;
  std::vector<double> swp_band{0.5, 2.0};
  std::string swp_out;
  swp->add_option("--pairs", swp_pairs, "Number of random pairs")->capture_default_str();
  swp->add_option("--band", swp_band, "Slope band lo,hi")->delimiter(',')->expected(2);
  swp->add_option("--out", swp_out, "Report JSON");
  add_seed(swp);
  add_grid(swp);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help and friends.
      app.exit(e, out, err);
      return kExitOk;
    }
    return fail(err, "usage", e.what(), kExitConfig);
  }

  try {
    set_max_threads(threads);
    const Seed run_seed{effective_seed(seed)};

    if (sim->parsed()) {
      const ModelParams params{sim_alpha, resolve_map(sim_s, m), parse_system_kind(sim_system)};
      ChainConfig chain;
      chain.n_steps = sim_steps;
      chain.burn_in = sim_burn;
      chain.init = resolve_map(sim_init, m);
      chain.seed = run_seed;
      params.validate();
      chain.validate();
      std::optional<ModelKind> kind;
      const Interval domain = parse_domain(sim_domain);
      if (!sim_dist.empty()) kind = resolve_model(sim_model, sim_reference, m, domain);
      const NoiseSpec noise = sim_noise.build();
      MapSeries series = simulate_chain(params, chain, noise);
      series.meta.s_name = sim_s;
      io::write_map_series(sim_out, series);
      Json j;
      j["series"] = sim_out;
      j["n"] = series.size();
      j["m"] = series.grid_size();
      if (kind) {
        const auto curves = series_to_distributions(series, *kind, QuantileCurve(domain, UnitMap::identity(m)));
        EmpiricalSeries es;
        es.domain = curves.front().domain();
        for (std::size_t i = 0; i < curves.size(); ++i) es.periods.push_back(std::to_string(i));
        es.curves = curves;
        io::write_curve_series(sim_dist, es);
        j["distributions"] = sim_dist;
        j["model"] = std::string(to_string(kind->tag));
      }
      emit(out, j, "");
    } else if (fitc->parsed()) {
      const FitConfig cfg = fit_opts.build();
      const SystemKind system = parse_system_kind(fit_system);
      MapSeries series;
      const std::string format = io::series_format(fit_in);
      if (format == io::kCurveSeriesFormat) {
        if (fit_model.empty()) throw ConfigError("a curve series needs --model");
        const EmpiricalSeries es = io::read_curve_series(fit_in);
        const ModelKind kind =
            resolve_model(fit_model, fit_reference, es.curves.front().unit().grid_size(), es.domain);
        series = maps_from_distributions(es.curves, kind);
        // T_0 = id only anchors the increments.
        if (kind.tag == ModelKindTag::Increment) series.maps.erase(series.maps.begin());
      } else {
        if (!fit_model.empty()) throw ConfigError("--model applies to curve series only");
        series = io::read_map_series(fit_in);
      }
      const FitResult r = system == SystemKind::PerturbThenMap ? fit(series, cfg) : fit_alt(series, cfg);
      io::write_fit(fit_out, r);
      Json j = io::to_json(r);
      j["out"] = fit_out;
      emit(out, j, "");
    } else if (tr->parsed()) {
      const UnitMap f = resolve_map(tr_f, m);
      auto need_g = [&] {
        if (tr_g.empty()) throw ConfigError("--op " + tr_op + " needs --g");
        return resolve_map(tr_g, m);
      };
      Json j;
      std::optional<UnitMap> result;
      if (tr_op == "compose") {
        result = compose(f, need_g());
      } else if (tr_op == "invert") {
        result = invert(f);
      } else if (tr_op == "contract") {
        result = contract(tr_alpha, f);
      } else if (tr_op == "contract-about") {
        result = contract_about(tr_alpha, f, need_g());
      } else if (tr_op == "distance") {
        const UnitMap g = need_g();
        j["lp"] = lp_distance(f, g, tr_p);
        j["p"] = tr_p;
        j["sup"] = sup_distance(f, g);
      } else {
        if (!tr_x) throw ConfigError("--op evaluate needs --x");
        j["x"] = *tr_x;
        j["value"] = evaluate(f, *tr_x);
      }
      if (result) {
        if (tr_out.empty()) throw ConfigError("--op " + tr_op + " needs --out");
        io::write_unit_map(tr_out, *result);
        j["out"] = tr_out;
        j["min_slope"] = min_slope(*result);
        j["max_slope"] = max_slope(*result);
      }
      emit(out, j, "");
    } else if (ing->parsed()) {
      if (delimiter.size() != 1) throw ConfigError("--delimiter must be a single character");
      cols.delimiter = delimiter.front();
      std::optional<Interval> domain;
      if (!ing_domain.empty()) domain = parse_domain(ing_domain);
      const SampleTable table = load_samples(ing_in, cols);
      const EmpiricalSeries es = empirical_quantiles(table, m, domain);
      io::write_curve_series(ing_out, es);
      Json j;
      j["out"] = ing_out;
      j["periods"] = es.periods.size();
      j["dropped_rows"] = table.dropped_rows;
      j["domain"] = {es.domain.lo(), es.domain.hi()};
      j["warning"] = es.warning();
      j["tie_repaired"] = es.tie_repaired;
      emit(out, j, "");
    } else if (chk->parsed()) {
      const ModelParams params{chk_alpha, resolve_map(chk_s, m), SystemKind::PerturbThenMap};
      emit(out, io::to_json(check_stationarity_condition(params, chk_noise.build())), chk_out);
    } else if (grd->parsed()) {
      GridSpec spec;
      spec.alphas = grd_alphas;
      for (const auto& name : grd_s) spec.s_choices.emplace_back(name, resolve_map(name, m));
      spec.n_steps = grd_steps;
      spec.burn_in = grd_burn;
      spec.replicates = grd_reps;
      spec.noise = grd_noise.build();
      spec.system = parse_system_kind(grd_system);
      spec.fit = grd_fit.build();
      spec.seed = run_seed;
      const GridReport report = run_simulation_grid(spec);
      if (!grd_csv.empty()) io::write_grid_csv(grd_csv, report);
      emit(out, io::to_json(report), grd_out);
    } else if (rt->parsed()) {
      RateSpec spec;
      spec.ns = rt_ns;
      spec.replicates = rt_reps;
      spec.params = {rt_alpha, resolve_map(rt_s, m), parse_system_kind(rt_system)};
      spec.noise = rt_noise.build();
      spec.burn_in = rt_burn;
      spec.fit = rt_fit.build();
      spec.bootstrap = rt_boot;
      spec.seed = run_seed;
      emit(out, io::to_json(run_rate_experiment(spec)), rt_out);
    } else if (cmp->parsed()) {
      const EmpiricalSeries es = io::read_curve_series(cmp_in);
      emit(out, io::to_json(compare_models(es, cmp_fit.build())), cmp_out);
    } else if (swp->parsed()) {
      if (swp_band.size() != 2) throw ConfigError("--band must be lo,hi");
      emit(out, io::to_json(run_inverse_inequality_sweep(swp_pairs, {swp_band[0], swp_band[1]}, run_seed, m)),
           swp_out);
    }
  } catch (const ConfigError& e) {
    return fail(err, "config", e.what(), kExitConfig);
  } catch (const DomainError& e) {
    return fail(err, "domain", e.what(), kExitConfig);
  } catch (const InputError& e) {
    return fail(err, "input", e.what(), kExitConfig);
  } catch (const DegenerateMapError& e) {
    return fail(err, "degenerate-map", e.what(), kExitNumeric);
  } catch (const std::exception& e) {
    return fail(err, "numeric", e.what(), kExitNumeric);
  }
  return kExitOk;
}

}  // namespace war::cli
