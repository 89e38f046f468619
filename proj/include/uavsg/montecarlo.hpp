#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "uavsg/analytic.hpp"
#include "uavsg/association.hpp"
#include "uavsg/backhaul.hpp"
#include "uavsg/error.hpp"
#include "uavsg/model.hpp"
#include "uavsg/quadrature.hpp"
#include "uavsg/spatial.hpp"

namespace uavsg {

enum class AntennaMode { omni, directional };
enum class Method { analytic, mc };

inline const char* to_string(AntennaMode m) { return m == AntennaMode::omni ? "omni" : "directional"; }
inline const char* to_string(Method m) { return m == Method::analytic ? "analytic" : "mc"; }

struct MetricEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long long trials = 0;
  Method method = Method::mc;
};

struct TrialOutcome {
  bool covered = false;
  double sir = 0.0;
  bool in_projection = false;
  /// Horizontal distance from the user to the serving UAV's rule anchor.
  double serving_distance = 0.0;
  long active_count = 0;
  /// UAVs in the reference window and how many of them are active.
  int window_total = 0;
  int window_active = 0;
  int empty_redraws = 0;
};

/// 64-bit finaliser of splitmix64.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Independent generator for one trial of a seeded run.
inline Rng trial_rng(std::uint64_t seed, std::uint64_t trial) {
  return Rng(mix64(mix64(seed + 0x9E3779B97F4A7C15ULL) ^ (trial * 0xD1B54A32D192ED03ULL + 1)));
}

/// Per-run constants shared by every trial: simulation disk, reference
/// window and the mean interference of active UAVs beyond the disk.
class TrialContext {
 public:
  TrialContext(const NetworkConfig& cfg, AntennaMode mode) : cfg_(cfg), mode_(mode) {
    cfg_.validate();
    if (mode_ == AntennaMode::omni) {
      cfg_.pae_c.reset();
      cfg_.half_beamwidth = kHalfPi;
    }
    lambda_a_ = active_density(cfg_);
    q_a_ = activation_probability(cfg_.lambda_uav / cfg_.lambda_gu);
    const double s = 1.0 / std::sqrt(cfg_.lambda_uav);
    const double omni_radius = std::max(20.0 / std::sqrt(kPi * cfg_.lambda_uav), 4.0 * cfg_.backhaul.r_m);
    if (cfg_.sim_region_radius > 0.0) {
      region_ = cfg_.sim_region_radius;
    } else if (directional()) {
      const double rp_max = std::max(proj_radius(cfg_.dh_lower()), proj_radius(cfg_.dh_upper()));
      const double need = rp_max + cfg_.hover_radius + 4.0 * s;
      region_ = need < omni_radius ? std::max(need, 10.0 * s) : omni_radius;
    } else {
      region_ = omni_radius;
    }
    if (region_ >= 10.0 * s) {
      window_center_ = region_ - 6.0 * s;
      window_radius_ = 2.0 * s;
    } else {
      window_center_ = region_ / 2.0;
      window_radius_ = region_ / 4.0;
    }
    edge_ = std::min(4.0 * s, region_ / 4.0);
    build_far_field();
  }

  const NetworkConfig& config() const { return cfg_; }
  AntennaMode mode() const { return mode_; }
  bool directional() const { return mode_ == AntennaMode::directional; }
  double region_radius() const { return region_; }
  double edge_width() const { return edge_; }
  double window_center() const { return window_center_; }
  double window_radius() const { return window_radius_; }
  double lambda_active() const { return lambda_a_; }
  double activation_prob() const { return q_a_; }

  double proj_radius(double dh) const { return directional() ? config_projection_radius(cfg_, dh) : kInf; }

  double gain(double dh) const {
    if (!directional()) return 1.0;
    const double phi = cfg_.pae_c ? pae_half_beamwidth(*cfg_.pae_c, dh, lambda_a_) : cfg_.half_beamwidth;
    return antenna_gain(0.0, 0.0, phi);
  }

  /// Mean interference at the origin from active UAVs whose hover center lies
  /// outside the simulated disk, all at altitude difference dh.
  double far_field(double dh) const {
    if (ff_.empty()) return 0.0;
    if (ff_.size() == 1) return ff_[0];
    const double lo = cfg_.dh_lower(), hi = cfg_.dh_upper();
    const double t = std::clamp((dh - lo) / (hi - lo), 0.0, 1.0) * static_cast<double>(ff_.size() - 1);
    const std::size_t k = std::min(static_cast<std::size_t>(t), ff_.size() - 2);
    const double w = t - static_cast<double>(k);
    return (1.0 - w) * ff_[k] + w * ff_[k + 1];
  }

  /// Far-field mean averaged over the altitude band.
  double far_field_mean() const { return ff_mean_; }

  /// Far-field mean for one altitude difference by direct quadrature.
  double far_field_exact(double dh) const {
    const double rp = proj_radius(dh);
    const double rh = cfg_.hover_radius;
    const double r_hi = rp + rh;
    if (!(r_hi > region_)) return 0.0;
    const double a = cfg_.alpha;
    QuadratureSpec q;
    q.rel_tol = 1e-9;
    q.abs_tol = 1e-300;
    auto avg_theta = [&](double r) {
      auto g = [&](double th) {
        const double rho2 = r * r + rh * rh + 2.0 * r * rh * std::cos(th);
        if (!std::isinf(rp) && rho2 >= rp * rp) return 0.0;
        return std::pow(rho2 + dh * dh, -a / 2.0);
      };
      if (rh == 0.0) return g(0.0);
      double th_lo = 0.0;
      if (!std::isinf(rp)) {
        const double c = (rp * rp - r * r - rh * rh) / (2.0 * r * rh);
        if (c <= -1.0) return 0.0;
        if (c < 1.0) th_lo = std::acos(c);
      }
      return integrate(g, th_lo, kPi, q.inner(), "far field theta") / kPi;
    };
    // r = R e^s turns the power-law tail into a smooth, short integrand.
    auto f = [&](double s) {
      const double r = region_ * std::exp(s);
      return 2.0 * kPi * r * r * avg_theta(r);
    };
    const double r_cut = std::min(r_hi, 1e3 * region_);
    double v = integrate(f, 0.0, std::log(r_cut / region_), q, "far field r");
    if (std::isinf(r_hi)) {
      // Beyond 1000 R the hover offset changes the integrand by O((R_h / r)^2).
      v += 2.0 * kPi * std::pow(r_cut * r_cut + dh * dh, 1.0 - a / 2.0) / (a - 2.0);
    }
    return lambda_a_ * cfg_.tx_power * gain(dh) * v;
  }

 private:
  void build_far_field() {
    const double lo = cfg_.dh_lower(), hi = cfg_.dh_upper();
    const std::size_t nodes = lo == hi ? 1 : 65;
    ff_.resize(nodes);
    for (std::size_t k = 0; k < nodes; ++k) {
      const double dh = nodes == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(nodes - 1);
      ff_[k] = far_field_exact(dh);
    }
    if (nodes == 1) {
      ff_mean_ = ff_[0];
    } else {
      double sum = 0.0;
      for (std::size_t k = 0; k < nodes; ++k) sum += (k == 0 || k + 1 == nodes ? 0.5 : 1.0) * ff_[k];
      ff_mean_ = sum / static_cast<double>(nodes - 1);
    }
    if (std::all_of(ff_.begin(), ff_.end(), [](double v) { return v == 0.0; })) ff_.clear();
  }

  NetworkConfig cfg_;
  AntennaMode mode_;
  double lambda_a_ = 0.0;
  double q_a_ = 0.0;
  double region_ = 0.0;
  double window_center_ = 0.0;
  double window_radius_ = 0.0;
  double edge_ = 0.0;
  std::vector<double> ff_;
  double ff_mean_ = 0.0;
};

/// One realization with the typical user at the origin.
inline TrialOutcome run_trial(const TrialContext& ctx, AssociationRule rule, Rng& rng) {
  const NetworkConfig& cfg = ctx.config();
  const double R = ctx.region_radius();
  const bool common = cfg.altitude_mode == AltitudeMode::common;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::exponential_distribution<double> exp1(1.0);
  auto draw_dh = [&] { return cfg.dh_lower() + (cfg.dh_upper() - cfg.dh_lower()) * u01(rng); };

  TrialOutcome out;
  std::poisson_distribution<long long> count(cfg.lambda_uav * kPi * R * R);
  long long n = count(rng);
  while (n == 0) {
    ++out.empty_redraws;
    if (out.empty_redraws > 1000) throw DegenerateRealization("run_trial: no UAV sampled in 1000 draws");
    n = count(rng);
  }
  const std::size_t N = static_cast<std::size_t>(n);
  const double dh0 = draw_dh();

  thread_local std::vector<Point2> center, pos;
  thread_local std::vector<double> dh, fade, thr;
  center.resize(N);
  pos.resize(N);
  dh.resize(N);
  fade.resize(N);
  thr.resize(N);
  const double rh = cfg.hover_radius;
  for (std::size_t i = 0; i < N; ++i) {
    center[i] = uniform_in_disk(R, rng);
    const double ang = 2.0 * kPi * u01(rng);
    pos[i] = {center[i].x + rh * std::cos(ang), center[i].y + rh * std::sin(ang)};
    dh[i] = common ? dh0 : draw_dh();
    fade[i] = exp1(rng);
    thr[i] = exp1(rng);
  }
  const std::vector<Point2>& anchors = rule == AssociationRule::rtna ? pos : center;

  std::size_t server = 0;
  double best = kInf;
  for (std::size_t i = 0; i < N; ++i) {
    const double d2 = anchors[i].x * anchors[i].x + anchors[i].y * anchors[i].y;
    if (d2 < best) {
      best = d2;
      server = i;
    }
  }
  out.serving_distance = std::sqrt(best);

  const SpatialGrid grid(anchors, R, 1.0 / std::sqrt(cfg.lambda_uav));
  const double inner_edge = R - ctx.edge_width();
  const double q_cut = -std::log1p(-ctx.activation_prob());
  auto active = [&](std::size_t i) {
    if (i == server) return true;
    if (norm(anchors[i]) > inner_edge) return thr[i] < q_cut;
    const double need = thr[i] / cfg.lambda_gu;
    const double dnn = grid.nearest_distance(i);
    if (kPi * dnn * dnn / 4.0 >= need) return true;
    return voronoi_cell_area(anchors, grid, i, R, need) >= need;
  };

  const double P = cfg.tx_power;
  const double a = cfg.alpha;
  const double rp_s = ctx.proj_radius(dh[server]);
  out.in_projection = norm(pos[server]) < rp_s;
  const double d0sq = pos[server].x * pos[server].x + pos[server].y * pos[server].y + dh[server] * dh[server];
  const double signal = out.in_projection ? P * ctx.gain(dh[server]) * fade[server] * std::pow(d0sq, -a / 2.0) : 0.0;

  double interference = common ? ctx.far_field(dh0) : ctx.far_field_mean();
  long active_count = 1;
  const Point2 wc{ctx.window_center(), 0.0};
  const double wr2 = ctx.window_radius() * ctx.window_radius();
  for (std::size_t i = 0; i < N; ++i) {
    if (i == server) continue;
    const double rho2 = pos[i].x * pos[i].x + pos[i].y * pos[i].y;
    const double dx = anchors[i].x - wc.x, dy = anchors[i].y - wc.y;
    const bool in_window = dx * dx + dy * dy < wr2;
    const double rp = ctx.proj_radius(dh[i]);
    const bool candidate = rho2 < rp * rp;
    if (!in_window && !candidate) continue;
    const bool on = active(i);
    if (in_window) {
      ++out.window_total;
      if (on) ++out.window_active;
    }
    if (candidate && on) {
      ++active_count;
      interference += P * ctx.gain(dh[i]) * fade[i] * std::pow(rho2 + dh[i] * dh[i], -a / 2.0);
    }
  }
  out.active_count = active_count;
  out.sir = signal == 0.0 ? 0.0 : (interference > 0.0 ? signal / interference : kInf);
  out.covered = out.in_projection && out.sir > cfg.tau;
  return out;
}

/// Convenience overload that builds the run context for a single trial.
inline TrialOutcome run_trial(const NetworkConfig& cfg, AssociationRule rule, AntennaMode mode, Rng& rng) {
  return run_trial(TrialContext(cfg, mode), rule, rng);
}

struct McOptions {
  /// Worker threads; 0 reads UAVSGSIM_THREADS and falls back to the
  /// hardware concurrency.
  unsigned threads = 0;
};

inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("UAVSGSIM_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

struct McEstimate {
  MetricEstimate cp;
  MetricEstimate st;
  MetricEstimate q_a_hat;
  double lambda_active_hat = 0.0;
  double c_b = kInf;
  long long in_projection = 0;
  long long empty_redraws = 0;
};

namespace mc_detail {

struct Tally {
  long long covered = 0;
  long long in_projection = 0;
  long long n_win = 0, a_win = 0;
  long long n2 = 0, a2 = 0, an = 0;
  long long redraws = 0;

  void add(const TrialOutcome& t) {
    covered += t.covered;
    in_projection += t.in_projection;
    n_win += t.window_total;
    a_win += t.window_active;
    n2 += static_cast<long long>(t.window_total) * t.window_total;
    a2 += static_cast<long long>(t.window_active) * t.window_active;
    an += static_cast<long long>(t.window_total) * t.window_active;
    redraws += t.empty_redraws;
  }
  void add(const Tally& o) {
    covered += o.covered;
    in_projection += o.in_projection;
    n_win += o.n_win;
    a_win += o.a_win;
    n2 += o.n2;
    a2 += o.a2;
    an += o.an;
    redraws += o.redraws;
  }
};

}  // namespace mc_detail

/// Runs trials [0, n) in parallel and calls visit(trial, outcome) for each.
/// Results are independent of the number of threads.
template <class Visit>
void run_trials(const TrialContext& ctx, AssociationRule rule, long long n_trials, const McOptions& opt, Visit&& visit) {
  const unsigned threads = static_cast<unsigned>(std::min<long long>(resolve_threads(opt.threads), n_trials));
  std::atomic<long long> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  constexpr long long chunk = 256;
  auto worker = [&] {
    try {
      for (;;) {
        const long long begin = next.fetch_add(chunk);
        if (begin >= n_trials) return;
        const long long end = std::min(begin + chunk, n_trials);
        for (long long t = begin; t < end; ++t) {
          Rng rng = trial_rng(ctx.config().seed, static_cast<std::uint64_t>(t));
          visit(t, run_trial(ctx, rule, rng));
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
      next = n_trials;
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
}

/// Fills ST, C_b and the active density of an estimate from its CP and
/// activation estimates under the backhaul settings of cfg. CP and the
/// activation probability do not depend on the backhaul, so one run can be
/// re-scored for several capacities.
inline void apply_backhaul(McEstimate& e, const NetworkConfig& cfg) {
  const double p = e.cp.value;
  const double q = e.q_a_hat.value;
  e.lambda_active_hat = q * cfg.lambda_uav;
  e.c_b = backhaul_capacity(cfg, e.lambda_active_hat);
  const double rate = std::log2(1.0 + cfg.tau);
  const double per_link = std::min(rate, e.c_b);
  const double d_cp = e.lambda_active_hat * per_link;
  const double d_q = e.c_b < rate ? 0.0 : cfg.lambda_uav * p * rate;
  e.st = {e.lambda_active_hat * p * per_link, std::hypot(d_cp * e.cp.std_error, d_q * e.q_a_hat.std_error),
          e.cp.trials, Method::mc};
}

/// Monte Carlo estimates of CP, ST and the activation probability.
inline McEstimate estimate(const NetworkConfig& cfg, AssociationRule rule, AntennaMode mode, long long n_trials,
                           const McOptions& opt = {}) {
  if (n_trials < 100) throw ValidationError("estimate: at least 100 trials are required");
  const TrialContext ctx(cfg, mode);
  const long long block = 4096;
  const long long n_blocks = (n_trials + block - 1) / block;
  std::vector<mc_detail::Tally> tallies(static_cast<std::size_t>(n_blocks));
  std::vector<std::mutex> locks(static_cast<std::size_t>(n_blocks));
  run_trials(ctx, rule, n_trials, opt, [&](long long t, const TrialOutcome& o) {
    const auto b = static_cast<std::size_t>(t / block);
    std::lock_guard<std::mutex> lock(locks[b]);
    tallies[b].add(o);
  });
  mc_detail::Tally tot;
  for (const auto& t : tallies) tot.add(t);

  McEstimate e;
  const double n = static_cast<double>(n_trials);
  const double p = static_cast<double>(tot.covered) / n;
  e.cp = {p, std::sqrt(p * (1.0 - p) / n), n_trials, Method::mc};
  e.in_projection = tot.in_projection;
  e.empty_redraws = tot.redraws;

  if (tot.n_win == 0) throw DegenerateRealization("estimate: reference window never held a UAV");
  const double q = static_cast<double>(tot.a_win) / static_cast<double>(tot.n_win);
  const double nbar = static_cast<double>(tot.n_win) / n;
  const double ss = static_cast<double>(tot.a2) - 2.0 * q * static_cast<double>(tot.an) + q * q * static_cast<double>(tot.n2);
  const double q_se = std::sqrt(std::max(ss, 0.0) / (n * (n - 1.0))) / nbar;
  e.q_a_hat = {q, q_se, n_trials, Method::mc};

  apply_backhaul(e, cfg);
  return e;
}

}  // namespace uavsg
