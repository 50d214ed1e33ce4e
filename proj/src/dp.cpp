#include "robustf2/dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace robustf2 {

double sample_laplace(double scale, Rng& rng) {
  if (scale <= 0.0) throw std::domain_error("sample_laplace: scale must be positive");
  double u = rng.next_unit();
  constexpr double kTiny = 0x1.0p-60;
  if (u < kTiny) u = kTiny;
  if (u < 0.5) return scale * std::log(2.0 * u);
  const double tail = 1.0 - u;
  return -scale * std::log(2.0 * (tail < kTiny ? kTiny : tail));
}

double laplace_cdf(double x, double scale) {
  if (x < 0.0) return 0.5 * std::exp(x / scale);
  return 1.0 - 0.5 * std::exp(-x / scale);
}

ValueGrid ValueGrid::positive(double g_min, double g_max, double rho) {
  if (!(g_min > 0.0) || !(g_max >= g_min) || !(rho > 0.0)) {
    throw std::invalid_argument("ValueGrid: need 0 < g_min <= g_max and rho > 0");
  }
  ValueGrid grid;
  grid.rho_ = rho;
  grid.points_.push_back(0.0);
  for (double g = g_min; g <= g_max * (1.0 + 1e-12); g *= (1.0 + rho)) {
    grid.points_.push_back(g);
  }
  return grid;
}

ValueGrid ValueGrid::symmetric(double g_min, double g_max, double rho) {
  ValueGrid pos = positive(g_min, g_max, rho);
  ValueGrid grid;
  grid.rho_ = rho;
  for (auto it = pos.points_.rbegin(); it != pos.points_.rend(); ++it) {
    if (*it > 0.0) grid.points_.push_back(-*it);
  }
  grid.points_.insert(grid.points_.end(), pos.points_.begin(), pos.points_.end());
  return grid;
}

std::size_t ValueGrid::snap_index(double value) const {
  const auto it = std::lower_bound(points_.begin(), points_.end(), value);
  if (it == points_.begin()) return 0;
  if (it == points_.end()) return points_.size() - 1;
  const std::size_t hi = static_cast<std::size_t>(it - points_.begin());
  const std::size_t lo = hi - 1;
  return (value - points_[lo] <= points_[hi] - value) ? lo : hi;
}

double ValueGrid::snap(double value) const { return points_[snap_index(value)]; }

bool ValueGrid::contains(double value) const {
  return std::binary_search(points_.begin(), points_.end(), value);
}

namespace {

// Two-sided rank deficiency for each grid point against the snapped multiset.
std::vector<double> rank_errors(const std::vector<double>& snapped, const ValueGrid& grid) {
  std::vector<double> sorted = snapped;
  std::sort(sorted.begin(), sorted.end());
  const double half = static_cast<double>(sorted.size()) / 2.0;
  std::vector<double> err(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.points()[i];
    const auto le = std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
    const auto ge = sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), x);
    const double deficiency =
        std::max({half - static_cast<double>(le), half - static_cast<double>(ge), 0.0});
    err[i] = deficiency;
  }
  return err;
}

}  // namespace

double private_median(const std::vector<double>& values, const ValueGrid& grid, double epsilon,
                      NoiseMode noise, Rng& rng) {
  if (values.empty()) throw std::domain_error("private_median: empty input");
  if (epsilon <= 0.0) throw std::invalid_argument("private_median: epsilon must be positive");

  std::vector<double> snapped(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) snapped[i] = grid.snap(values[i]);
  const std::vector<double> err = rank_errors(snapped, grid);

  if (!noise.enabled) {
    // Deterministic limit: utility argmax; ties resolve to the point nearest
    // the exact median of the snapped inputs.
    std::vector<double> sorted = snapped;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double anchor = sorted[sorted.size() / 2];
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
      if (err[i] < err[best] ||
          (err[i] == err[best] &&
           std::abs(grid.points()[i] - anchor) < std::abs(grid.points()[best] - anchor))) {
        best = i;
      }
    }
    return grid.points()[best];
  }

  // exp(eps * u / 2) weights, sampled by inverse transform over the grid.
  double max_u = -std::numeric_limits<double>::infinity();
  for (double e : err) max_u = std::max(max_u, -e);
  std::vector<double> weights(grid.size());
  double total = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    weights[i] = std::exp(0.5 * epsilon * (-err[i] - max_u));
    total += weights[i];
  }
  double target = rng.next_unit() * total;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    target -= weights[i];
    if (target <= 0.0) return grid.points()[i];
  }
  return grid.points().back();
}

double median_rank_error(double x, std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const double half = static_cast<double>(values.size()) / 2.0;
  const auto le = std::upper_bound(values.begin(), values.end(), x) - values.begin();
  const auto ge = values.end() - std::lower_bound(values.begin(), values.end(), x);
  return std::max({half - static_cast<double>(le), half - static_cast<double>(ge), 0.0});
}

std::pair<double, double> compose_simple(std::int64_t k, double epsilon, double delta) {
  return {static_cast<double>(k) * epsilon, static_cast<double>(k) * delta};
}

std::pair<double, double> compose_advanced(std::int64_t k, double epsilon, double delta,
                                           double delta_prime) {
  if (k < 0) throw std::invalid_argument("compose_advanced: negative k");
  if (k == 0) return {0.0, delta_prime};
  const double kd = static_cast<double>(k);
  const double eps_total = std::sqrt(2.0 * kd * std::log(1.0 / delta_prime)) * epsilon +
                           2.0 * kd * epsilon * epsilon;
  return {eps_total, kd * delta + delta_prime};
}

void BudgetAccount::register_level(std::int64_t level, double epsilon, double delta) {
  levels_.push_back(Level{level, epsilon, delta, 0});
}

const BudgetAccount::Level& BudgetAccount::find(std::int64_t level) const {
  for (const Level& l : levels_) {
    if (l.id == level) return l;
  }
  throw std::invalid_argument("BudgetAccount: unknown level");
}

BudgetAccount::Level& BudgetAccount::find(std::int64_t level) {
  for (Level& l : levels_) {
    if (l.id == level) return l;
  }
  throw std::invalid_argument("BudgetAccount: unknown level");
}

bool BudgetAccount::charge(std::int64_t level) {
  Level& l = find(level);
  const auto [eps, delta] = compose_advanced(l.spent + 1, l.epsilon, l.delta, delta_prime_);
  if (eps > epsilon_target_ || delta > delta_target_) return false;
  ++l.spent;
  return true;
}

std::int64_t BudgetAccount::spent(std::int64_t level) const { return find(level).spent; }

double BudgetAccount::epsilon_running(std::int64_t level) const {
  const Level& l = find(level);
  return compose_advanced(l.spent, l.epsilon, l.delta, delta_prime_).first;
}

void BudgetAccount::write_ledger(std::ostream& out) const {
  out << "level,k,epsilon,epsilon_running\n";
  for (const Level& l : levels_) {
    out << l.id << ',' << l.spent << ',' << l.epsilon << ','
        << compose_advanced(l.spent, l.epsilon, l.delta, delta_prime_).first << '\n';
  }
}

}  // namespace robustf2
