#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>

#include "robustf2/stream.hpp"

namespace robustf2 {

/// Turns any single-shot difference estimator into one whose baseline can be
/// re-set up to p_max times. A fresh copy consumes the whole stream and is
/// never enabled; each enable event overwrites the active copy with a deep
/// copy of the fresh state and enables it there.
///
/// DE must be copyable and provide ingest(Update), enable(), estimate().
template <class DE>
class ToggleDE {
 public:
  ToggleDE(DE fresh, std::int64_t p_max)
      : fresh_(std::move(fresh)), enabled_(fresh_), p_max_(p_max) {
    if (p_max_ < 1) throw std::invalid_argument("ToggleDE: p_max must be at least 1");
  }

  /// Re-set the baseline to the current position (all consumed updates become
  /// the new prefix). Counts against the p_max budget.
  void enable() {
    if (enable_count_ >= p_max_) throw std::logic_error("ToggleDE: enable budget exhausted");
    enabled_ = fresh_;
    enabled_.enable();
    ++enable_count_;
    enabling_time_ = time_;
  }

  /// Stream input with the re-enable bit: an enable event fires before the
  /// update itself is consumed, so the update lands in the new suffix.
  void feed(const TdeUpdate& u) {
    if (u.enable) enable();
    ingest(u.update);
  }

  void ingest(const Update& u) {
    fresh_.ingest(u);
    enabled_.ingest(u);
    ++time_;
  }

  double estimate() const {
    if (enable_count_ == 0) throw std::logic_error("ToggleDE: estimate before first enable");
    return enabled_.estimate();
  }

  std::int64_t enable_count() const { return enable_count_; }
  std::int64_t enabling_time() const { return enabling_time_; }
  std::int64_t p_max() const { return p_max_; }
  std::int64_t consumed() const { return time_; }

  const DE& fresh_copy() const { return fresh_; }
  const DE& enabled_copy() const { return enabled_; }

  Eigen::Index accumulator_count() const {
    return fresh_.accumulator_count() + enabled_.accumulator_count();
  }

 private:
  DE fresh_;
  DE enabled_;
  std::int64_t p_max_;
  std::int64_t enable_count_ = 0;
  std::int64_t enabling_time_ = -1;
  std::int64_t time_ = 0;
};

}  // namespace robustf2
