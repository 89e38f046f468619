#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "uavsg/analytic.hpp"
#include "uavsg/association.hpp"
#include "uavsg/config_io.hpp"
#include "uavsg/csv.hpp"
#include "uavsg/error.hpp"
#include "uavsg/model.hpp"
#include "uavsg/montecarlo.hpp"

namespace uavsg {

struct SweepAxis {
  std::string key;                  ///< a configuration key, see config_keys()
  std::vector<std::string> values;  ///< textual values, parsed like config files
};

struct Engines {
  bool analytic = true;
  bool mc = true;
};

inline Engines parse_engines(const std::string& s) {
  if (s == "analytic") return {true, false};
  if (s == "mc") return {false, true};
  if (s == "both") return {true, true};
  throw ParseError("unknown engine '" + s + "' (expected analytic, mc or both)");
}

inline const char* to_string(Engines e) { return e.analytic ? (e.mc ? "both" : "analytic") : "mc"; }

struct SweepSpec {
  std::vector<SweepAxis> axes;
  Engines engines;
  AssociationRule rule = AssociationRule::rtna;
  /// Forces the antenna mode; otherwise it follows the configuration of
  /// each point (omni iff no PAE and the half-beamwidth is pi/2).
  std::optional<AntennaMode> antenna_mode;
  std::optional<double> pae;
  long long n_trials = 20000;
  std::string output_path;

  void validate() const {
    for (const auto& a : axes) {
      if (!is_config_key(a.key)) throw ValidationError("sweep axis '" + a.key + "' is not a configuration key");
      if (a.values.empty()) throw ValidationError("sweep axis '" + a.key + "' has no values");
    }
    if (!engines.analytic && !engines.mc) throw ValidationError("sweep: no engine selected");
    if (engines.mc && n_trials < 100) throw ValidationError("sweep: at least 100 trials are required");
    if (pae && !(*pae > 0.0)) throw ValidationError("sweep: PAE scaling parameter must be positive");
  }
};

/// Results of both engines at one configuration. Fields of an engine that
/// did not run, or failed, are NaN.
struct PointResult {
  AntennaMode mode = AntennaMode::omni;
  double cp_analytic = std::nan("");
  double st_analytic = std::nan("");
  double cb_analytic = std::nan("");
  std::optional<McEstimate> mc;
  std::string error;
};

inline AntennaMode antenna_mode_of(const NetworkConfig& cfg) {
  return cfg.omni() ? AntennaMode::omni : AntennaMode::directional;
}

inline std::string describe(const std::exception& e) {
  if (const auto* u = dynamic_cast<const Error*>(&e)) return std::string(u->kind()) + ": " + u->what();
  return std::string("error: ") + e.what();
}

/// Evaluates the selected engines at cfg. Module failures are caught and
/// reported in the error field.
inline PointResult evaluate_point(const NetworkConfig& cfg, AssociationRule rule, Engines engines, long long n_trials,
                                  std::optional<AntennaMode> mode = std::nullopt, const McOptions& opt = {}) {
  PointResult r;
  r.mode = mode ? *mode : antenna_mode_of(cfg);
  if (engines.analytic) {
    try {
      NetworkConfig c = cfg;
      if (r.mode == AntennaMode::omni) {
        c.pae_c.reset();
        c.half_beamwidth = kHalfPi;
      }
      const AnalyticResult a = evaluate_analytic(c, rule);
      r.cp_analytic = a.cp;
      r.st_analytic = a.st;
      r.cb_analytic = a.c_b_used;
    } catch (const std::exception& e) {
      r.error = describe(e);
    }
  }
  if (engines.mc) {
    try {
      r.mc = estimate(cfg, rule, r.mode, n_trials, opt);
    } catch (const std::exception& e) {
      if (!r.error.empty()) r.error += "; ";
      r.error += describe(e);
    }
  }
  return r;
}

/// Column order of sweep tables after the axis columns.
inline std::vector<std::string> sweep_metric_columns() {
  return {"rule",  "antenna", "cp_analytic", "st_analytic", "cb_analytic", "cp_mc",   "cp_mc_se",
          "st_mc", "st_mc_se", "q_a_mc",     "q_a_mc_se",   "cb_mc",       "trials", "error"};
}

/// Header comments shared by every emitted table.
inline void add_run_meta(Table& t, const std::string& command, const NetworkConfig& cfg) {
  t.add_meta("command", command);
  t.add_meta("seed", std::to_string(cfg.seed));
  t.add_meta("config", serialize_config(cfg));
}

/// Evaluates the Cartesian product of the axes over cfg_base. Axis order is
/// preserved; the last axis varies fastest.
inline Table sweep(const NetworkConfig& cfg_base, const SweepSpec& spec, const McOptions& opt = {},
                   const std::string& command = "sweep") {
  spec.validate();
  Table t;
  add_run_meta(t, command, cfg_base);
  t.add_meta("rule", to_string(spec.rule));
  t.add_meta("engine", to_string(spec.engines));
  t.add_meta("trials", std::to_string(spec.n_trials));
  t.add_meta("pae", spec.pae ? format_real(*spec.pae) : "none");
  if (spec.antenna_mode) t.add_meta("antenna", to_string(*spec.antenna_mode));
  for (const auto& a : spec.axes) {
    std::string vals;
    for (const auto& v : a.values) vals += (vals.empty() ? "" : " ") + v;
    t.add_meta("axis " + a.key, vals);
  }
  for (const auto& a : spec.axes) t.columns.push_back(a.key);
  for (const auto& c : sweep_metric_columns()) t.columns.push_back(c);

  std::vector<std::size_t> idx(spec.axes.size(), 0);
  for (;;) {
    std::vector<std::string> row;
    NetworkConfig cfg = cfg_base;
    if (spec.pae) cfg.pae_c = *spec.pae;
    std::string setup_error;
    try {
      for (std::size_t k = 0; k < spec.axes.size(); ++k) set_config_value(cfg, spec.axes[k].key, spec.axes[k].values[idx[k]]);
      cfg.validate();
    } catch (const std::exception& e) {
      setup_error = describe(e);
    }
    for (std::size_t k = 0; k < spec.axes.size(); ++k) row.push_back(spec.axes[k].values[idx[k]]);

    PointResult r;
    if (setup_error.empty()) {
      r = evaluate_point(cfg, spec.rule, spec.engines, spec.n_trials, spec.antenna_mode, opt);
    } else {
      r.error = setup_error;
    }
    const double nan = std::nan("");
    const McEstimate* m = r.mc ? &*r.mc : nullptr;
    row.push_back(to_string(spec.rule));
    row.push_back(to_string(r.mode));
    row.push_back(cell(r.cp_analytic));
    row.push_back(cell(r.st_analytic));
    row.push_back(cell(r.cb_analytic));
    row.push_back(cell(m ? m->cp.value : nan));
    row.push_back(cell(m ? m->cp.std_error : nan));
    row.push_back(cell(m ? m->st.value : nan));
    row.push_back(cell(m ? m->st.std_error : nan));
    row.push_back(cell(m ? m->q_a_hat.value : nan));
    row.push_back(cell(m ? m->q_a_hat.std_error : nan));
    row.push_back(cell(m ? m->c_b : nan));
    row.push_back(cell(static_cast<long long>(m ? m->cp.trials : 0)));
    row.push_back(r.error);
    t.add_row(std::move(row));

    std::size_t k = spec.axes.size();
    while (k > 0) {
      --k;
      if (++idx[k] < spec.axes[k].values.size()) break;
      idx[k] = 0;
      if (k == 0) return t;
    }
    if (spec.axes.empty()) return t;
  }
}

}  // namespace uavsg
