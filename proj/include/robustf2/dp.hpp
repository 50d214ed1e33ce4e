#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "robustf2/rng.hpp"

namespace robustf2 {

/// Inverse-CDF sample of the Laplace distribution with the given scale.
/// Deterministic under a fixed stream state.
double sample_laplace(double scale, Rng& rng);

double laplace_cdf(double x, double scale);

/// Noise toggle threaded through every mechanism. Disabling yields the exact
/// deterministic limit of each primitive, which makes control flow testable.
struct NoiseMode {
  bool enabled = true;

  double laplace(double scale, Rng& rng) const {
    return enabled ? sample_laplace(scale, rng) : 0.0;
  }
};

enum class SvtVerdict { Top, Bottom };

/// One arm of the sparse-vector comparator: a noisy threshold drawn once,
/// queried until it reports Top, then re-armed explicitly.
class SvtState {
 public:
  SvtState(double epsilon, double threshold, NoiseMode noise, Rng rng)
      : epsilon_(epsilon), threshold_(threshold), noise_(noise), rng_(std::move(rng)) {
    if (epsilon_ <= 0.0) throw std::invalid_argument("SvtState: epsilon must be positive");
    draw_threshold();
  }

  SvtVerdict query(double value) {
    if (exhausted_) throw std::logic_error("SvtState: query on exhausted instance");
    const double noisy = value + noise_.laplace(4.0 / epsilon_, rng_);
    if (noisy > noisy_threshold_) {
      exhausted_ = true;
      return SvtVerdict::Top;
    }
    return SvtVerdict::Bottom;
  }

  /// Re-arms with a fresh noisy threshold; optionally moves the base threshold.
  void redraw() { draw_threshold(); }
  void redraw(double new_threshold) {
    threshold_ = new_threshold;
    draw_threshold();
  }

  bool exhausted() const { return exhausted_; }
  double threshold() const { return threshold_; }
  double noisy_threshold() const { return noisy_threshold_; }
  double epsilon() const { return epsilon_; }

 private:
  void draw_threshold() {
    noisy_threshold_ = threshold_ + noise_.laplace(2.0 / epsilon_, rng_);
    exhausted_ = false;
  }

  double epsilon_;
  double threshold_;
  double noisy_threshold_ = 0.0;
  bool exhausted_ = false;
  NoiseMode noise_;
  Rng rng_;
};

/// Geometric value grid: 0 and +/- g_min*(1+rho)^k up to g_max, sorted. The
/// private median snaps its inputs to these points.
class ValueGrid {
 public:
  static ValueGrid positive(double g_min, double g_max, double rho);
  static ValueGrid symmetric(double g_min, double g_max, double rho);

  double snap(double value) const;
  std::size_t snap_index(double value) const;
  const std::vector<double>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  double resolution() const { return rho_; }
  bool contains(double value) const;

 private:
  std::vector<double> points_;
  double rho_ = 0.0;
};

/// Exponential-mechanism median over a finite grid. Utility is the negative
/// two-sided rank deficiency, sensitivity 1, selection weight exp(eps*u/2).
/// With noise disabled this is the utility argmax: the exact grid median.
double private_median(const std::vector<double>& values, const ValueGrid& grid, double epsilon,
                      NoiseMode noise, Rng& rng);

/// Rank deficiency of point x against the multiset: how far x falls short of
/// having |S|/2 elements on each side. Zero at any true median.
double median_rank_error(double x, std::vector<double> values);

/// k-fold adaptive composition: (k*eps, k*delta).
std::pair<double, double> compose_simple(std::int64_t k, double epsilon, double delta);

/// Advanced composition: (sqrt(2k ln(1/delta'))*eps + 2k*eps^2, k*delta + delta').
std::pair<double, double> compose_advanced(std::int64_t k, double epsilon, double delta,
                                           double delta_prime);

/// Tracks per-level interaction counts and refuses a charge exactly when the
/// advanced-composition epsilon would exceed the target.
class BudgetAccount {
 public:
  BudgetAccount(double epsilon_target, double delta_target, double delta_prime)
      : epsilon_target_(epsilon_target), delta_target_(delta_target), delta_prime_(delta_prime) {}

  void register_level(std::int64_t level, double epsilon, double delta);

  /// True and counted if the level stays within budget after one more
  /// interaction; false (and not counted) otherwise.
  bool charge(std::int64_t level);

  std::int64_t spent(std::int64_t level) const;
  double epsilon_running(std::int64_t level) const;

  /// CSV rows: level, k_j, eps_j, eps_running.
  void write_ledger(std::ostream& out) const;

 private:
  struct Level {
    std::int64_t id;
    double epsilon;
    double delta;
    std::int64_t spent = 0;
  };
  const Level& find(std::int64_t level) const;
  Level& find(std::int64_t level);

  double epsilon_target_;
  double delta_target_;
  double delta_prime_;
  std::vector<Level> levels_;
};

}  // namespace robustf2
