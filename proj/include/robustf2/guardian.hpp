#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "robustf2/engine.hpp"

namespace robustf2 {

/// Monitor calibration plus the inner engine's configuration. The inner
/// engine absorbs the reset budget through an inflated flip-number bound.
struct GuardianConfig {
  double alpha = 0.2;
  double delta = 0.05;
  std::int64_t lambda = 64;
  std::int64_t mu = 0;
  std::int64_t n = 512;
  std::int64_t m = 5000;

  double c_lambda = 2.0;
  std::int64_t c_m = 2;
  double c_k = 2.0;
  double alpha_m = 0.0;   // monitor accuracy, alpha/10
  double eps_m = 8.0;
  std::int64_t k_m = 20;
  std::int64_t p_m = 0;   // c_m * mu
  std::int64_t lambda_hat = 0;
  double est_delta = 0.05;
  bool noise_enabled = true;
  SketchShape monitor_sh{};
  EngineConfig engine;

  static GuardianConfig make(double alpha, double delta, std::int64_t lambda, std::int64_t mu,
                             std::int64_t n, std::int64_t m);
  void validate() const;
};

/// Output validator wrapped around the engine: an independent bank of
/// trackers checks every emitted value, and a sparse-vector comparator turns
/// sustained disagreement into a phase-reset command followed by a re-step.
template <class Engine>
class GuardianT {
 public:
  GuardianT(GuardianConfig cfg, Engine engine,
            std::vector<std::unique_ptr<IF2Estimator>> monitors, Rng svt_rng)
      : cfg_(std::move(cfg)),
        engine_(std::move(engine)),
        monitors_(std::move(monitors)),
        noise_{cfg_.noise_enabled} {
    svt_m_.emplace(cfg_.eps_m, static_cast<double>(cfg_.k_m) / 2.0, noise_, std::move(svt_rng));
  }

  StepResult step(const Update& u) {
    for (auto& mo : monitors_) mo->ingest(u);
    StepResult result = engine_.step(u);
    const double next = result.output;
    double outside = 0.0;
    for (const auto& mo : monitors_) {
      const double z = mo->estimate();
      if (std::abs(z - next) >= 0.75 * cfg_.alpha * next) outside += 1.0;
    }
    if (svt_m_->query(outside) == SvtVerdict::Top) {
      svt_m_->redraw();
      engine_.phase_reset();
      result = engine_.step_null();
      result.phase_reset = true;
      ++resets_;
    }
    return result;
  }

  std::int64_t reset_count() const { return resets_; }
  const GuardianConfig& config() const { return cfg_; }
  Engine& engine() { return engine_; }
  const Engine& engine() const { return engine_; }
  const std::vector<std::unique_ptr<IF2Estimator>>& monitors() const { return monitors_; }

 private:
  GuardianConfig cfg_;
  Engine engine_;
  std::vector<std::unique_ptr<IF2Estimator>> monitors_;
  std::optional<SvtState> svt_m_;
  NoiseMode noise_;
  std::int64_t resets_ = 0;
};

using Guardian = GuardianT<RobustDeEngine>;

/// Standard construction: monitors, monitor comparator, and the inner engine
/// all draw from disjoint sub-streams of one run seed.
Guardian make_guardian(const GuardianConfig& cfg, std::uint64_t seed);

/// Seed keys of the monitor estimators, for the independence audit.
std::vector<std::uint64_t> guardian_monitor_keys(std::uint64_t seed, std::int64_t k_m);

}  // namespace robustf2
