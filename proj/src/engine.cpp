#include "robustf2/engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace robustf2 {

namespace {

constexpr std::uint64_t kTagEstimators = 1;
constexpr std::uint64_t kTagSvt = 2;
constexpr std::uint64_t kTagMedian = 3;

std::int64_t ceil_div_pow2(std::int64_t value, std::int64_t j) {
  const std::int64_t d = std::int64_t{1} << j;
  return (value + d - 1) / d;
}

void fail(const std::string& what) { throw std::invalid_argument("engine config: " + what); }

}  // namespace

std::int64_t active_lvl(const TauCounter& tau, std::int64_t beta) {
  if (!tau.bit(beta)) return beta;
  return std::countr_zero(static_cast<std::uint64_t>(tau.tau + 1));
}

double stitch_frozen_vals(std::int64_t tau_arg, const std::vector<double>& frozen,
                          std::int64_t beta) {
  double sum = frozen[static_cast<std::size_t>(beta)];
  for (std::int64_t j = 0; j < beta; ++j) {
    if ((tau_arg >> j) & 1) sum += frozen[static_cast<std::size_t>(j)];
  }
  return sum;
}

EngineConfig EngineConfig::experiment(double alpha, double delta, std::int64_t lambda,
                                      std::int64_t n, std::int64_t m) {
  EngineConfig cfg;
  cfg.alpha = alpha;
  cfg.delta = delta;
  cfg.lambda = lambda;
  cfg.n = n;
  cfg.m = m;
  cfg.theory_mode = false;
  cfg.finalize();
  return cfg;
}

EngineConfig EngineConfig::theory(double alpha, double delta, std::int64_t lambda, std::int64_t n,
                                  std::int64_t m) {
  EngineConfig cfg;
  cfg.alpha = alpha;
  cfg.delta = delta;
  cfg.lambda = lambda;
  cfg.n = n;
  cfg.m = m;
  cfg.theory_mode = true;
  cfg.finalize();
  return cfg;
}

void EngineConfig::finalize() {
  const double gw = gamma_wrapper;
  step_size = alpha / (2.0 * gw);
  // The stitched-error budget must clear every inequality the calibration
  // leans on; the 1/(12*Gamma) term is the binding one, so the per-update
  // drift allowance is pinned there in theory mode. Experiment mode keeps the
  // looser StepSize/4 allowance, which the desk-scale streams actually meet.
  mu_size = theory_mode ? step_size / (12.0 * gw) : step_size / 4.0;
  phase_size = static_cast<std::int64_t>(std::floor(1.0 / step_size));
  beta = static_cast<std::int64_t>(std::ceil(std::log2(static_cast<double>(phase_size) + 1.0)));

  alpha_stitch = theory_mode ? mu_size : std::min(step_size / 10.0, mu_size);
  alpha_st_cal = alpha_stitch / (2.0 * gw);
  alpha_tde_cal = alpha_stitch / (2.0 * gw * static_cast<double>(beta));
  c_gamma = 2.0 * gw * gw * (1.0 + alpha_st_cal) / (1.0 - alpha_st_cal);
  gamma0 = c_gamma * 2.0 * alpha;

  if (alpha_st_sketch <= 0.0) alpha_st_sketch = theory_mode ? alpha_st_cal : alpha / 4.0;
  if (alpha_tde_sketch <= 0.0) alpha_tde_sketch = theory_mode ? alpha_tde_cal : 0.6 * alpha;

  gamma_level.assign(static_cast<std::size_t>(beta), 0.0);
  for (std::int64_t j = 0; j < beta; ++j) {
    gamma_level[static_cast<std::size_t>(j)] = c_gamma * std::ldexp(alpha, static_cast<int>(j));
  }

  p_level.assign(static_cast<std::size_t>(beta + 1), 0);
  for (std::int64_t j = 0; j <= beta; ++j) {
    p_level[static_cast<std::size_t>(j)] = ceil_div_pow2(c_p * lambda, j);
  }

  k_level.assign(static_cast<std::size_t>(beta + 1), 0);
  eps_level.assign(static_cast<std::size_t>(beta + 1), 0.0);
  if (theory_mode) {
    const double delta_star = delta / static_cast<double>(beta);
    const double big_l = std::log(static_cast<double>(m) / delta_star);
    for (std::int64_t j = 0; j <= beta; ++j) {
      const double pj = static_cast<double>(p_level[static_cast<std::size_t>(j)]);
      eps_level[static_cast<std::size_t>(j)] = theory_eps / std::sqrt(pj * big_l);
      const double bracket =
          std::log(pj * std::log(static_cast<double>(n)) / (delta_star * alpha)) + big_l;
      k_level[static_cast<std::size_t>(j)] =
          static_cast<std::int64_t>(std::ceil(std::sqrt(pj * big_l) * bracket));
    }
  } else {
    for (std::int64_t j = 0; j <= beta; ++j) {
      k_level[static_cast<std::size_t>(j)] = k_floor;
      eps_level[static_cast<std::size_t>(j)] = eps_experiment;
    }
  }

  toggle_budget.assign(static_cast<std::size_t>(beta), 0);
  for (std::int64_t j = 0; j < beta; ++j) {
    std::int64_t budget = 4;
    for (std::int64_t jp = j + 1; jp <= beta; ++jp) {
      budget += p_level[static_cast<std::size_t>(jp)];
    }
    toggle_budget[static_cast<std::size_t>(j)] = budget;
  }

  if (estimate_max <= 0.0) {
    estimate_max = std::max(16.0, static_cast<double>(m) * static_cast<double>(m));
  }

  if (!theory_mode) {
    tracker_sh = tracker_shape(alpha_st_sketch, est_delta);
    de_sh.assign(static_cast<std::size_t>(beta), SketchShape{});
    for (std::int64_t j = 0; j < beta; ++j) {
      SketchShape s =
          diff_shape(gamma_level[static_cast<std::size_t>(j)], alpha_tde_sketch, est_delta);
      // One budgeted failure share per enable event costs log-many extra rows.
      const double extra =
          std::log2(1.0 + static_cast<double>(toggle_budget[static_cast<std::size_t>(j)]));
      s.rows = odd_rows(static_cast<double>(s.rows) + extra);
      de_sh[static_cast<std::size_t>(j)] = s;
    }
  }
}

void EngineConfig::validate() const {
  constexpr double kTol = 1e-12;
  if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha must lie in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) fail("delta must lie in (0,1)");
  if (lambda < 1) fail("lambda must be at least 1");
  if (n < 1 || m < 1) fail("n and m must be positive");
  if (gamma_wrapper < 2.0) fail("wrapper ratio must be at least 2");
  if (step_size > alpha / (2.0 * gamma_wrapper) + kTol) {
    fail("StepSize <= alpha/(2*Gamma) violated");
  }
  if (step_size + kTol < 4.0 * mu_size) fail("StepSize >= 4*MuSize violated");
  if (phase_size != static_cast<std::int64_t>(std::floor(1.0 / step_size))) {
    fail("PhaseSize = floor(1/StepSize) violated");
  }
  if (phase_size < 2) fail("PhaseSize must be at least 2");
  if (beta !=
      static_cast<std::int64_t>(std::ceil(std::log2(static_cast<double>(phase_size) + 1.0)))) {
    fail("beta = ceil(log2(PhaseSize+1)) violated");
  }
  const double stitch_cap = theory_mode
                                ? std::min({step_size / 10.0,
                                            step_size / (12.0 * gamma_wrapper), mu_size})
                                : std::min(step_size / 10.0, mu_size);
  if (alpha_stitch > stitch_cap + kTol) {
    fail("alpha_stitch exceeds its calibration bound");
  }
  const double cascade = gamma_wrapper * (alpha_st_cal + static_cast<double>(beta) * alpha_tde_cal);
  if (std::abs(cascade - alpha_stitch) > 1e-9) {
    fail("alpha_st/alpha_tde cascade does not recompose alpha_stitch");
  }
  for (std::int64_t j = 0; j < beta; ++j) {
    if (gamma_level[static_cast<std::size_t>(j)] + kTol <
        c_gamma * std::ldexp(alpha, static_cast<int>(j))) {
      fail("gamma_j >= c_gamma*2^j*alpha violated at level " + std::to_string(j));
    }
  }
  for (std::int64_t j = 0; j <= beta; ++j) {
    if (p_level[static_cast<std::size_t>(j)] != ceil_div_pow2(c_p * lambda, j)) {
      fail("P_j = ceil(c_p*lambda/2^j) violated at level " + std::to_string(j));
    }
    if (k_level[static_cast<std::size_t>(j)] < 3) fail("K_j too small");
    if (eps_level[static_cast<std::size_t>(j)] <= 0.0) fail("eps_j must be positive");
  }
  if (!(estimate_max > estimate_min && estimate_min > 0.0)) {
    fail("estimate grid bounds invalid");
  }
}

double EngineConfig::warm_floor() const { return std::ceil(4.0 / mu_size); }

std::int64_t EngineConfig::total_estimators() const {
  std::int64_t total = 0;
  for (std::int64_t j = 0; j <= beta; ++j) total += k_level[static_cast<std::size_t>(j)];
  total += k_level[static_cast<std::size_t>(beta)];  // wrapper bank mirrors the tracker bank
  return total;
}

double EngineConfig::tracker_words() const {
  if (!theory_mode) {
    return static_cast<double>(tracker_sh.rows) * static_cast<double>(tracker_sh.cols);
  }
  const double delta_star = delta / static_cast<double>(beta);
  const double rows = kSketchRowFactor * std::log(static_cast<double>(m) / (delta_star / 10.0));
  const double cols = kSketchColFactor / (alpha_st_cal * alpha_st_cal);
  return rows * cols;
}

double EngineConfig::toggle_words(std::int64_t level) const {
  if (!theory_mode) {
    const SketchShape& s = de_sh.at(static_cast<std::size_t>(level));
    return 4.0 * static_cast<double>(s.rows) * static_cast<double>(s.cols);
  }
  const double delta_star = delta / static_cast<double>(beta);
  const double p = static_cast<double>(toggle_budget.at(static_cast<std::size_t>(level)));
  const double rows =
      kSketchRowFactor * (std::log(static_cast<double>(m) / (delta_star / 10.0)) + std::log(p));
  const double cols = gamma_level.at(static_cast<std::size_t>(level)) * kSketchColFactor /
                      (alpha_tde_cal * alpha_tde_cal);
  return 4.0 * rows * cols;
}

double EngineConfig::total_space_words() const {
  double total = 0.0;
  for (std::int64_t j = 0; j < beta; ++j) {
    total += static_cast<double>(k_level[static_cast<std::size_t>(j)]) * toggle_words(j);
  }
  total += 2.0 * static_cast<double>(k_level[static_cast<std::size_t>(beta)]) * tracker_words();
  return total;
}

namespace {

EngineConfig checked(EngineConfig cfg) {
  cfg.validate();
  if (cfg.theory_mode) {
    fail("theory-mode config is for formula evaluation, not execution");
  }
  if (!cfg.warm_start_declared) {
    fail("input stream not declared warm-started");
  }
  if (cfg.warm_f2 < cfg.warm_floor()) {
    std::ostringstream os;
    os << "declared warm-start F2 " << cfg.warm_f2 << " below floor " << cfg.warm_floor();
    fail(os.str());
  }
  return cfg;
}

TrackerFactory default_tracker_factory(const EngineConfig& cfg) {
  const SketchShape shape = cfg.tracker_sh;
  return [shape](Rng rng) -> std::unique_ptr<IF2Estimator> {
    return std::make_unique<SketchTrackerEstimator>(shape, std::move(rng));
  };
}

ToggleFactory default_toggle_factory(const EngineConfig& cfg) {
  std::vector<std::pair<double, SketchShape>> by_gamma;
  for (std::int64_t j = 0; j < cfg.beta; ++j) {
    by_gamma.emplace_back(cfg.gamma_level[static_cast<std::size_t>(j)],
                          cfg.de_sh[static_cast<std::size_t>(j)]);
  }
  return [by_gamma](double gamma, std::int64_t p_max, Rng rng)
             -> std::unique_ptr<IF2ToggleEstimator> {
    for (const auto& [g, shape] : by_gamma) {
      if (std::abs(g - gamma) < 1e-9) {
        return std::make_unique<SketchToggleEstimator>(shape, p_max, std::move(rng));
      }
    }
    throw std::invalid_argument("toggle factory: unknown gamma");
  };
}

}  // namespace

RobustDeEngine::RobustDeEngine(EngineConfig config, std::uint64_t seed)
    : RobustDeEngine(std::move(config), TrackerFactory{}, ToggleFactory{}, seed) {}

RobustDeEngine::RobustDeEngine(EngineConfig config, const TrackerFactory& tracker_factory,
                               const ToggleFactory& toggle_factory, std::uint64_t seed)
    : config_(checked(std::move(config))),
      noise_{config_.noise_enabled},
      root_(seed),
      grid_positive_(
          ValueGrid::positive(config_.estimate_min, config_.estimate_max, config_.step_size)),
      grid_signed_(
          ValueGrid::symmetric(config_.estimate_min, config_.estimate_max, config_.step_size)),
      budget_(0.0, 1.0, config_.delta) {
  const TrackerFactory tf =
      tracker_factory ? tracker_factory : default_tracker_factory(config_);
  const ToggleFactory gf = toggle_factory ? toggle_factory : default_toggle_factory(config_);

  const std::int64_t beta = config_.beta;
  const Rng est_root = root_.fork(kTagEstimators);
  toggles_.resize(static_cast<std::size_t>(beta));
  for (std::int64_t j = 0; j < beta; ++j) {
    auto& bank = toggles_[static_cast<std::size_t>(j)];
    const std::int64_t k_count = config_.k_level[static_cast<std::size_t>(j)];
    for (std::int64_t k = 0; k < k_count; ++k) {
      bank.push_back(gf(config_.gamma_level[static_cast<std::size_t>(j)],
                        config_.toggle_budget[static_cast<std::size_t>(j)],
                        est_root.fork(static_cast<std::uint64_t>(j),
                                      static_cast<std::uint64_t>(k))));
    }
  }
  const std::int64_t k_st = config_.k_level[static_cast<std::size_t>(beta)];
  for (std::int64_t k = 0; k < k_st; ++k) {
    trackers_.push_back(tf(est_root.fork(static_cast<std::uint64_t>(beta),
                                         static_cast<std::uint64_t>(k))));
    wrappers_.push_back(tf(est_root.fork(static_cast<std::uint64_t>(beta + 1),
                                         static_cast<std::uint64_t>(k))));
  }

  const Rng svt_root = root_.fork(kTagSvt);
  for (std::int64_t j = 0; j <= beta; ++j) {
    svt_.emplace_back(config_.eps_level[static_cast<std::size_t>(j)],
                      static_cast<double>(config_.k_level[static_cast<std::size_t>(j)]) / 2.0,
                      noise_, svt_root.fork(static_cast<std::uint64_t>(j)));
  }
  svt_wrapper_.emplace(config_.eps_level[static_cast<std::size_t>(beta)],
                       static_cast<double>(k_st) / 2.0, noise_,
                       svt_root.fork(static_cast<std::uint64_t>(beta + 1)));

  const Rng median_root = root_.fork(kTagMedian);
  for (std::int64_t j = 0; j <= beta; ++j) {
    median_rng_.push_back(median_root.fork(static_cast<std::uint64_t>(j)));
    median_calls_.push_back(0);
  }

  frozen_.assign(static_cast<std::size_t>(beta + 1), 0.0);
  enabling_time_.assign(static_cast<std::size_t>(beta + 1), -1);
  capp_.assign(static_cast<std::size_t>(config_.level_count()), 0);
  c_count_.assign(static_cast<std::size_t>(config_.level_count()), 0);
  tau_.tau = config_.phase_size;

  double target_eps = 0.0;
  for (std::int64_t j = 0; j <= beta; ++j) {
    target_eps = std::max(
        target_eps, compose_advanced(config_.p_level[static_cast<std::size_t>(j)],
                                     config_.eps_level[static_cast<std::size_t>(j)], 0.0,
                                     config_.delta)
                        .first);
  }
  budget_ = BudgetAccount(target_eps * (1.0 + 1e-9), 1.0, config_.delta);
  for (std::int64_t j = 0; j < config_.level_count(); ++j) {
    const std::size_t eps_at = static_cast<std::size_t>(std::min(j, beta));
    budget_.register_level(j, config_.eps_level[eps_at], 0.0);
  }
}

std::uint64_t RobustDeEngine::estimator_seed_key(std::int64_t level, std::int64_t k) const {
  return root_.fork(kTagEstimators)
      .fork(static_cast<std::uint64_t>(level), static_cast<std::uint64_t>(k))
      .key();
}

void RobustDeEngine::feed_all(const Update& u) {
  for (auto& bank : toggles_) {
    for (auto& est : bank) est->ingest(u);
  }
  for (auto& est : trackers_) est->ingest(u);
  for (auto& est : wrappers_) est->ingest(u);
}

std::vector<double> RobustDeEngine::level_estimates(std::int64_t level) const {
  std::vector<double> z;
  if (level == config_.beta) {
    z.reserve(trackers_.size());
    for (const auto& est : trackers_) z.push_back(est->estimate());
  } else {
    const auto& bank = toggles_[static_cast<std::size_t>(level)];
    z.reserve(bank.size());
    for (const auto& est : bank) z.push_back(est->estimate());
  }
  return z;
}

void RobustDeEngine::freeze_level(std::int64_t level, const std::vector<double>& estimates) {
  const ValueGrid& grid = (level == config_.beta) ? grid_positive_ : grid_signed_;
  Rng rng = median_rng_[static_cast<std::size_t>(level)].fork(
      static_cast<std::uint64_t>(median_calls_[static_cast<std::size_t>(level)]++));
  frozen_[static_cast<std::size_t>(level)] = private_median(
      estimates, grid, config_.eps_level[static_cast<std::size_t>(level)], noise_, rng);
  svt_[static_cast<std::size_t>(level)].redraw();
  for (std::int64_t jp = 0; jp < level; ++jp) {
    for (auto& est : toggles_[static_cast<std::size_t>(jp)]) est->enable();
    enabling_time_[static_cast<std::size_t>(jp)] = time_;
  }
  enabling_time_[static_cast<std::size_t>(level)] = time_;
  ++capp_[static_cast<std::size_t>(level)];
  ++freeze_events_;
  budget_.charge(level);

  const std::int64_t phase_bit = std::int64_t{1} << config_.beta;
  if (!tau_.bit(config_.beta)) {
    tau_.tau = phase_bit;  // starting phase
  } else if (tau_.tau < phase_bit + config_.phase_size) {
    ++tau_.tau;  // inner phase update
  }
  if (tau_.tau == phase_bit + config_.phase_size) {
    tau_.tau -= phase_bit;  // ending phase
  }
}

StepResult RobustDeEngine::run_step(const Update* u, bool external_reset) {
  StepResult res;
  bool reset_now = false;

  if (u != nullptr) {
    feed_all(*u);
    ++time_;
  }

  // A level at its cap has spent its pre-partitioned budget: no further
  // threshold queries or freezes anywhere, and the output holds.
  for (std::int64_t l = 0; l < config_.level_count(); ++l) {
    const std::size_t p_at = static_cast<std::size_t>(std::min(l, config_.beta));
    if (capp_[static_cast<std::size_t>(l)] >= config_.p_level[p_at]) {
      res.level = active_lvl(tau_, config_.beta);
      res.capped = true;
      capped_ever_ = true;
      res.output = output_;
      if (sink) sink(time_, res);
      return res;
    }
  }

  if (external_reset) {
    tau_.tau = 0;
    svt_wrapper_->redraw();
    reset_now = true;
  } else if (u != nullptr) {
    const double z_st = frozen_[static_cast<std::size_t>(config_.beta)];
    const double lo = z_st / config_.gamma_wrapper;
    const double hi = z_st * config_.gamma_wrapper;
    double outside = 0.0;
    for (const auto& est : wrappers_) {
      const double z = est->estimate();
      if (!(z > lo && z < hi)) outside += 1.0;
    }
    if (svt_wrapper_->query(outside) == SvtVerdict::Top) {
      tau_.tau = 0;
      svt_wrapper_->redraw();
      ++wrapper_triggers_;
      budget_.charge(config_.wrapper_index());
      reset_now = true;
    }
  }

  const std::int64_t j = active_lvl(tau_, config_.beta);
  res.level = j;
  const std::vector<double> z = level_estimates(j);
  const double offset =
      (j == config_.beta) ? 0.0
                          : stitch_frozen_vals(tau_.tau - (std::int64_t{1} << j) + 1, frozen_,
                                               config_.beta);

  bool trigger = (tau_.tau == 0);
  if (!trigger) {
    const double band = frozen_[static_cast<std::size_t>(config_.beta)] * config_.step_size;
    double outside = 0.0;
    for (const double zk : z) {
      if (std::abs(offset + zk - output_) > band) outside += 1.0;
    }
    trigger = svt_[static_cast<std::size_t>(j)].query(outside) == SvtVerdict::Top;
  }
  if (trigger) {
    freeze_level(j, z);
    res.froze = true;
  }

  bool no_capping = true;
  for (std::int64_t l = 0; l < config_.level_count(); ++l) {
    const std::size_t p_at = static_cast<std::size_t>(std::min(l, config_.beta));
    if (capp_[static_cast<std::size_t>(l)] >= config_.p_level[p_at]) no_capping = false;
  }
  if (no_capping) {
    output_ = stitch_frozen_vals(tau_.tau, frozen_, config_.beta);
    res.modified = trigger;
    if (trigger) ++c_count_[static_cast<std::size_t>(j)];
  } else {
    res.capped = true;
    capped_ever_ = true;
  }

  res.phase_reset = reset_now;
  res.output = output_;
  if (sink) sink(time_, res);
  return res;
}

StepResult RobustDeEngine::step(const Update& u) { return run_step(&u, false); }

void RobustDeEngine::phase_reset() {
  tau_.tau = 0;
  svt_wrapper_->redraw();
}

StepResult RobustDeEngine::step_null() { return run_step(nullptr, true); }

}  // namespace robustf2
