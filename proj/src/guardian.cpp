#include "robustf2/guardian.hpp"

namespace robustf2 {

namespace {
constexpr std::uint64_t kTagMonitors = 4;
constexpr std::uint64_t kTagEngineSeed = 5;
constexpr std::uint64_t kTagMonitorSvt = 6;
}  // namespace

GuardianConfig GuardianConfig::make(double alpha, double delta, std::int64_t lambda,
                                    std::int64_t mu, std::int64_t n, std::int64_t m) {
  GuardianConfig cfg;
  cfg.alpha = alpha;
  cfg.delta = delta;
  cfg.lambda = lambda;
  cfg.mu = mu;
  cfg.n = n;
  cfg.m = m;
  cfg.alpha_m = alpha / 10.0;
  cfg.p_m = std::max<std::int64_t>(1, cfg.c_m * mu);
  const std::int64_t inv_alpha = static_cast<std::int64_t>(std::ceil(1.0 / alpha));
  cfg.lambda_hat = static_cast<std::int64_t>(
      std::ceil(cfg.c_lambda * static_cast<double>(lambda + mu * inv_alpha)));
  cfg.monitor_sh = tracker_shape(cfg.alpha_m, cfg.est_delta);
  cfg.engine = EngineConfig::experiment(alpha, delta / 2.0, cfg.lambda_hat, n, m);
  cfg.engine.noise_enabled = cfg.noise_enabled;
  cfg.validate();
  return cfg;
}

void GuardianConfig::validate() const {
  if (alpha_m > alpha / 10.0 + 1e-12) {
    throw std::invalid_argument("guardian config: alpha_m must be at most alpha/10");
  }
  const double k_floor = (c_k / eps_m) * std::log(static_cast<double>(m) / delta);
  if (static_cast<double>(k_m) < k_floor) {
    throw std::invalid_argument("guardian config: K_M below (c_k/eps_m)*log(m/delta)");
  }
  const std::int64_t inv_alpha = static_cast<std::int64_t>(std::ceil(1.0 / alpha));
  if (lambda_hat < lambda + mu * inv_alpha) {
    throw std::invalid_argument("guardian config: lambda_hat below lambda + mu*ceil(1/alpha)");
  }
  if (p_m < std::max<std::int64_t>(1, mu)) {
    throw std::invalid_argument("guardian config: P_M below the reset budget");
  }
}

Guardian make_guardian(const GuardianConfig& cfg, std::uint64_t seed) {
  Rng root(seed);
  std::vector<std::unique_ptr<IF2Estimator>> monitors;
  const Rng monitor_root = root.fork(kTagMonitors);
  for (std::int64_t k = 0; k < cfg.k_m; ++k) {
    monitors.push_back(std::make_unique<SketchTrackerEstimator>(
        cfg.monitor_sh, monitor_root.fork(static_cast<std::uint64_t>(k))));
  }
  RobustDeEngine engine(cfg.engine, root.fork(kTagEngineSeed).key());
  return Guardian(cfg, std::move(engine), std::move(monitors), root.fork(kTagMonitorSvt));
}

std::vector<std::uint64_t> guardian_monitor_keys(std::uint64_t seed, std::int64_t k_m) {
  Rng root(seed);
  const Rng monitor_root = root.fork(kTagMonitors);
  std::vector<std::uint64_t> keys;
  for (std::int64_t k = 0; k < k_m; ++k) {
    keys.push_back(monitor_root.fork(static_cast<std::uint64_t>(k)).key());
  }
  return keys;
}

}  // namespace robustf2
