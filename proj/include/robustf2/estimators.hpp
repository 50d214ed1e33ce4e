#pragma once

#include <functional>
#include <memory>

#include "robustf2/sketch.hpp"
#include "robustf2/toggle.hpp"

namespace robustf2 {

/// Whole-stream estimator surface the engine consumes.
class IF2Estimator {
 public:
  virtual ~IF2Estimator() = default;
  virtual void ingest(const Update& u) = 0;
  virtual double estimate() const = 0;
  virtual Eigen::Index accumulator_count() const = 0;
};

/// Difference estimator with a re-settable baseline.
class IF2ToggleEstimator : public IF2Estimator {
 public:
  virtual void enable() = 0;
  virtual std::int64_t enable_count() const = 0;
};

using TrackerFactory = std::function<std::unique_ptr<IF2Estimator>(Rng rng)>;
using ToggleFactory =
    std::function<std::unique_ptr<IF2ToggleEstimator>(double gamma, std::int64_t p_max, Rng rng)>;

class SketchTrackerEstimator final : public IF2Estimator {
 public:
  SketchTrackerEstimator(SketchShape shape, Rng rng) : inner_(shape, std::move(rng)) {}
  void ingest(const Update& u) override { inner_.ingest(u); }
  double estimate() const override { return inner_.estimate(); }
  Eigen::Index accumulator_count() const override { return inner_.accumulator_count(); }
  const StrongTrackerF2& inner() const { return inner_; }

 private:
  StrongTrackerF2 inner_;
};

class SketchToggleEstimator final : public IF2ToggleEstimator {
 public:
  SketchToggleEstimator(SketchShape shape, std::int64_t p_max, Rng rng)
      : inner_(DiffEstimatorF2(shape, std::move(rng)), p_max) {}
  void ingest(const Update& u) override { inner_.ingest(u); }
  double estimate() const override { return inner_.estimate(); }
  void enable() override { inner_.enable(); }
  std::int64_t enable_count() const override { return inner_.enable_count(); }
  Eigen::Index accumulator_count() const override { return inner_.accumulator_count(); }
  const ToggleDE<DiffEstimatorF2>& inner() const { return inner_; }

 private:
  ToggleDE<DiffEstimatorF2> inner_;
};

}  // namespace robustf2
