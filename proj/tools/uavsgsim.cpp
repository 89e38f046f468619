#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uavsg/uavsg.hpp"

namespace {

using namespace uavsg;

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  long long trials = 20000;
  std::string out;
  std::string engine = "both";
  std::string rule = "rtna";
  std::optional<double> pae;
  std::vector<std::string> sets;
};

void add_common(CLI::App* sub, Common& c, bool engine_flag = true) {
  sub->add_option("--config", c.config_path, "Configuration file (key = value lines)");
  sub->add_option("--seed", c.seed, "Random seed");
  sub->add_option("--trials", c.trials, "Monte Carlo trials per point")->check(CLI::Range(100LL, 1000000000LL));
  sub->add_option("--out", c.out, "Output CSV path (default: stdout)");
  if (engine_flag)
    sub->add_option("--engine", c.engine, "Engines to run")->check(CLI::IsMember({"analytic", "mc", "both"}));
  sub->add_option("--rule", c.rule, "Association rule")->check(CLI::IsMember({"rtna", "semi"}));
  sub->add_option("--pae", c.pae, "Projection scaling parameter C (enables the PAE beam policy)");
  sub->add_option("--set", c.sets, "Override a configuration key, KEY=VALUE (repeatable)");
}

NetworkConfig resolve(const Common& c, NetworkConfig base = {}) {
  NetworkConfig cfg = c.config_path.empty() ? base : load_config(c.config_path, base);
  std::string overrides;
  for (const auto& s : c.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError("--set expects KEY=VALUE, got '" + s + "'");
    overrides += s.substr(0, eq) + " = " + s.substr(eq + 1) + "\n";
  }
  if (!overrides.empty()) cfg = parse_config(overrides, "--set", cfg);
  if (c.seed) cfg.seed = *c.seed;
  if (c.pae) cfg.pae_c = *c.pae;
  cfg.validate();
  return cfg;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<double> parse_lambdas(const std::string& s, double fallback_per_m2) {
  std::vector<double> v;
  if (s.empty()) return {fallback_per_m2};
  for (const auto& x : split_list(s)) v.push_back(parse_real(x, "--lambdas") / 1e6);
  return v;
}

void emit(const Table& t, const std::string& out) {
  if (out.empty() || out == "-") {
    write_csv(std::cout, t);
    std::cout.flush();
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw ParseError("cannot open output file '" + out + "'");
  write_csv(f, t);
}

std::string quote(const std::string& s) {
  std::string r = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') r += '\\';
    r += ch == '\n' ? ' ' : ch;
  }
  return r + "\"";
}

void report(const char* kind, const std::string& message) {
  std::cerr << "error kind=" << kind << " message=" << quote(message) << "\n";
}

// Failed points are kept in the table; the exit status still reports them.
int finish(const Table& t, const std::string& out) {
  emit(t, out);
  const auto it = std::find(t.columns.begin(), t.columns.end(), "error");
  if (it == t.columns.end()) return 0;
  const std::size_t col = static_cast<std::size_t>(it - t.columns.begin());
  int failed = 0;
  for (const auto& r : t.rows)
    if (!r[col].empty()) {
      if (failed == 0) report("PointFailure", r[col]);
      ++failed;
    }
  if (failed == 0) return 0;
  std::cerr << "error kind=PointFailure count=" << failed << "\n";
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coverage and throughput of hovering UAV access-point networks"};
  app.require_subcommand(1);

  Common c;
  std::vector<std::string> axes;
  std::string lambdas;
  std::string figure;
  int grid_nodes = 64;

  auto* analytic = app.add_subcommand("analytic", "Analytic CP and ST for one configuration");
  add_common(analytic, c, false);
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo CP and ST for one configuration");
  add_common(simulate, c, false);
  auto* sweep_cmd = app.add_subcommand("sweep", "Cartesian sweep over configuration keys");
  add_common(sweep_cmd, c);
  sweep_cmd->add_option("--axis", axes, "Axis KEY=V1,V2,... (repeatable; the last varies fastest)");
  auto* opt_cmd = app.add_subcommand("optimize-beamwidth", "ST-maximizing half-beamwidth per density");
  add_common(opt_cmd, c, false);
  opt_cmd->add_option("--lambdas", lambdas, "UAV densities per km^2, comma separated");
  opt_cmd->add_option("--grid", grid_nodes, "Log-spaced grid nodes before refinement")->check(CLI::Range(3, 100000));
  auto* pae_cmd = app.add_subcommand("pae-curve", "ST versus density under the PAE beam policy");
  add_common(pae_cmd, c);
  pae_cmd->add_option("--lambdas", lambdas, "UAV densities per km^2, comma separated");
  auto* fig_cmd = app.add_subcommand("reproduce-figure", "Data behind one figure: 2a 2b 3a 3b 4a 4b 5");
  add_common(fig_cmd, c);
  fig_cmd->add_option("figure", figure, "Figure id")->required()->check(CLI::IsMember(figure_ids()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report("UsageError", e.what());
    return 2;
  }

  try {
    const AssociationRule rule = parse_rule(c.rule);

    if (analytic->parsed() || simulate->parsed() || sweep_cmd->parsed()) {
      const NetworkConfig cfg = resolve(c);
      SweepSpec spec;
      spec.rule = rule;
      spec.n_trials = c.trials;
      spec.output_path = c.out;
      if (analytic->parsed()) spec.engines = {true, false};
      else if (simulate->parsed()) spec.engines = {false, true};
      else spec.engines = parse_engines(c.engine);
      for (const auto& a : axes) {
        const auto eq = a.find('=');
        if (eq == std::string::npos) throw ParseError("--axis expects KEY=V1,V2,..., got '" + a + "'");
        spec.axes.push_back({a.substr(0, eq), split_list(a.substr(eq + 1))});
      }
      const char* name = analytic->parsed() ? "analytic" : simulate->parsed() ? "simulate" : "sweep";
      return finish(sweep(cfg, spec, {}, name), c.out);
    }

    if (opt_cmd->parsed()) {
      const NetworkConfig cfg = resolve(c);
      if (cfg.pae_c) throw ValidationError("optimize-beamwidth searches a fixed beamwidth; drop --pae");
      Table t;
      add_run_meta(t, "optimize-beamwidth", cfg);
      t.add_meta("rule", to_string(rule));
      t.add_meta("grid", std::to_string(grid_nodes));
      t.columns = {"lambda_per_km2", "rule", "phi_opt_rad", "phi_opt_deg", "st_opt", "st_omni", "error"};
      for (double lam : parse_lambdas(lambdas, cfg.lambda_uav)) {
        NetworkConfig ci = cfg;
        ci.lambda_uav = lam;
        std::vector<std::string> row{format_real(lam * 1e6), to_string(rule)};
        try {
          const BeamOptimum b = optimize_beamwidth(ci, rule, {}, grid_nodes);
          ci.half_beamwidth = kHalfPi;
          const double st_omni = evaluate_analytic(ci, rule).st;
          row.insert(row.end(), {cell(b.half_beamwidth), cell(b.half_beamwidth * 180.0 / kPi), cell(b.st), cell(st_omni), ""});
        } catch (const std::exception& e) {
          row.insert(row.end(), {"nan", "nan", "nan", "nan", describe(e)});
        }
        t.add_row(std::move(row));
      }
      return finish(t, c.out);
    }

    if (pae_cmd->parsed()) {
      NetworkConfig cfg = resolve(c);
      if (!cfg.pae_c) cfg.pae_c = 1.0;
      const Engines engines = parse_engines(c.engine);
      Table t;
      add_run_meta(t, "pae-curve", cfg);
      t.add_meta("rule", to_string(rule));
      t.add_meta("trials", std::to_string(c.trials));
      t.add_meta("engine", to_string(engines));
      t.columns = {"lambda_per_km2", "rule", "st_analytic", "st_mc", "st_mc_se", "cp_analytic", "cp_mc", "cp_mc_se",
                   "st_limit", "error"};
      for (double lam : parse_lambdas(lambdas, cfg.lambda_uav)) {
        NetworkConfig ci = cfg;
        ci.lambda_uav = lam;
        const PointResult r = evaluate_point(ci, rule, engines, c.trials);
        const double nan = std::nan("");
        const McEstimate* m = r.mc ? &*r.mc : nullptr;
        t.add_row({format_real(lam * 1e6), to_string(rule), cell(r.st_analytic), cell(m ? m->st.value : nan),
                   cell(m ? m->st.std_error : nan), cell(r.cp_analytic), cell(m ? m->cp.value : nan),
                   cell(m ? m->cp.std_error : nan), cell(st_scaling_pae(ci).result.st), r.error});
      }
      return finish(t, c.out);
    }

    if (fig_cmd->parsed()) {
      const NetworkConfig cfg = resolve(c, figure_baseline());
      FigureOptions o;
      o.n_trials = c.trials;
      o.engines = parse_engines(c.engine);
      return finish(reproduce_figure(figure, cfg, o), c.out);
    }
  } catch (const Error& e) {
    report(e.kind(), e.what());
    return 1;
  } catch (const std::exception& e) {
    report("InternalError", e.what());
    return 1;
  }
  return 0;
}
