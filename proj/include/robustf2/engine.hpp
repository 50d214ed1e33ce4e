#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "robustf2/dp.hpp"
#include "robustf2/estimators.hpp"
#include "robustf2/rng.hpp"
#include "robustf2/stream.hpp"

namespace robustf2 {

/// Binary phase counter. Bit `beta` marks an open phase; the low bits count
/// output modifications inside the phase and drive level selection through
/// their carry structure.
struct TauCounter {
  std::int64_t tau = 0;
  bool bit(std::int64_t b) const { return ((tau >> b) & 1) != 0; }
};

/// Level selection: the tracker level while no phase is open, otherwise the
/// index of the lowest set bit of tau+1.
std::int64_t active_lvl(const TauCounter& tau, std::int64_t beta);

/// Full engine calibration. `finalize()` derives every dependent quantity and
/// `validate()` enforces the constraint system, naming the first violated
/// inequality.
struct EngineConfig {
  // Inputs.
  double alpha = 0.2;
  double delta = 0.05;
  std::int64_t lambda = 64;
  std::int64_t n = 512;
  std::int64_t m = 5000;
  bool theory_mode = false;
  bool noise_enabled = true;
  /// Streams must carry a warm-up prefix lifting F2 to `warm_floor()`; the
  /// constructor refuses configs that do not declare one.
  bool warm_start_declared = false;
  double warm_f2 = 0.0;

  // Calibration constants.
  double gamma_wrapper = 2.0;  // ratio guarded by the wrapper level
  std::int64_t c_p = 4;        // freeze-cap multiplier: P_j = ceil(c_p*lambda/2^j)
  double eps_experiment = 4.0; // per-level epsilon in experiment mode
  double est_delta = 0.05;     // per-step failure budget of one estimator
  std::int64_t k_floor = 15;   // estimators per level in experiment mode
  double theory_eps = 0.01;    // base epsilon of the theory-mode formulas

  /// Accuracy parameters the oblivious estimators are instantiated with. The
  /// analysis-side cascade below is far too small to size desk-scale sketches,
  /// so experiment mode keeps these separate (alpha/4 and alpha/2 by default).
  double alpha_st_sketch = 0.0;
  double alpha_tde_sketch = 0.0;

  // Derived.
  double step_size = 0.0;
  double mu_size = 0.0;
  std::int64_t phase_size = 0;
  std::int64_t beta = 0;
  double alpha_stitch = 0.0;   // Gamma*(alpha_st + beta*alpha_tde), cascade values
  double alpha_st_cal = 0.0;
  double alpha_tde_cal = 0.0;
  double c_gamma = 0.0;
  double gamma0 = 0.0;         // violation scale the monitor effectively detects
  std::vector<double> gamma_level;        // gamma_j, TDE levels 0..beta-1
  std::vector<std::int64_t> p_level;      // P_j, levels 0..beta; P_W = P_beta
  std::vector<std::int64_t> k_level;      // K_j, levels 0..beta; K_W = K_beta
  std::vector<double> eps_level;          // eps_j, levels 0..beta; eps_W = eps_beta
  std::vector<std::int64_t> toggle_budget;  // enable budget per TDE level
  SketchShape tracker_sh{};
  std::vector<SketchShape> de_sh;         // per TDE level
  double estimate_min = 1.0;
  double estimate_max = 0.0;

  static EngineConfig experiment(double alpha, double delta, std::int64_t lambda, std::int64_t n,
                                 std::int64_t m);
  static EngineConfig theory(double alpha, double delta, std::int64_t lambda, std::int64_t n,
                             std::int64_t m);

  void finalize();
  void validate() const;

  double warm_floor() const;
  std::int64_t wrapper_index() const { return beta + 1; }
  std::int64_t level_count() const { return beta + 2; }  // TDE levels + tracker + wrapper

  std::int64_t total_estimators() const;
  double tracker_words() const;
  double toggle_words(std::int64_t level) const;
  double total_space_words() const;
};

/// Sum of the tracker's frozen value and the frozen differences of every low
/// bit set in the counter argument.
double stitch_frozen_vals(std::int64_t tau_arg, const std::vector<double>& frozen,
                          std::int64_t beta);

struct StepResult {
  double output = 0.0;
  std::int64_t level = 0;
  bool modified = false;
  bool froze = false;
  bool phase_reset = false;
  bool capped = false;
};

/// Robust F2 estimation engine: per-level banks of privacy-protected
/// estimators, a wrapper bank bounding in-phase drift, sparse-vector gated
/// output modification, private-median freezing, and hard per-level caps.
class RobustDeEngine {
 public:
  RobustDeEngine(EngineConfig config, std::uint64_t seed);
  RobustDeEngine(EngineConfig config, const TrackerFactory& tracker_factory,
                 const ToggleFactory& toggle_factory, std::uint64_t seed);

  /// One stream update through the full pipeline.
  StepResult step(const Update& u);

  /// Behaves as if the wrapper condition fired: next level selection sees
  /// tau = 0 and a fresh wrapper threshold.
  void phase_reset();

  /// Post-reset re-step with no update consumed; the caller's reset command
  /// produces a replacement output in the same time step.
  StepResult step_null();

  double output() const { return output_; }
  const TauCounter& tau() const { return tau_; }
  const EngineConfig& config() const { return config_; }

  // Diagnostics.
  std::int64_t modification_count(std::int64_t level) const { return c_count_.at(level); }
  std::int64_t capp(std::int64_t level) const { return capp_.at(level); }
  std::int64_t wrapper_triggers() const { return wrapper_triggers_; }
  std::int64_t freeze_events() const { return freeze_events_; }
  bool capped_ever() const { return capped_ever_; }
  double frozen_value(std::int64_t level) const { return frozen_.at(level); }
  std::int64_t enabling_time(std::int64_t level) const { return enabling_time_.at(level); }
  std::int64_t now() const { return time_; }
  const BudgetAccount& budget() const { return budget_; }
  std::uint64_t estimator_seed_key(std::int64_t level, std::int64_t k) const;

  /// Optional per-step sink, invoked once per step with the final result.
  std::function<void(std::int64_t, const StepResult&)> sink;

 private:
  StepResult run_step(const Update* u, bool external_reset);
  void feed_all(const Update& u);
  std::vector<double> level_estimates(std::int64_t level) const;
  void freeze_level(std::int64_t level, const std::vector<double>& estimates);

  EngineConfig config_;
  NoiseMode noise_;
  Rng root_;

  std::vector<std::vector<std::unique_ptr<IF2ToggleEstimator>>> toggles_;  // levels 0..beta-1
  std::vector<std::unique_ptr<IF2Estimator>> trackers_;                    // level beta
  std::vector<std::unique_ptr<IF2Estimator>> wrappers_;                    // level W

  std::vector<SvtState> svt_;            // levels 0..beta
  std::optional<SvtState> svt_wrapper_;
  std::vector<Rng> median_rng_;
  std::vector<std::int64_t> median_calls_;

  ValueGrid grid_positive_;
  ValueGrid grid_signed_;

  std::vector<double> frozen_;            // Z_j, levels 0..beta
  std::vector<std::int64_t> enabling_time_;
  TauCounter tau_;
  double output_ = 0.0;
  std::int64_t time_ = 0;

  std::vector<std::int64_t> capp_;        // levels 0..beta, then wrapper
  std::vector<std::int64_t> c_count_;
  std::int64_t wrapper_triggers_ = 0;
  std::int64_t freeze_events_ = 0;
  bool capped_ever_ = false;
  BudgetAccount budget_;
};

}  // namespace robustf2
