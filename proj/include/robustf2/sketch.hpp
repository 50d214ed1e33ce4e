#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "robustf2/hashing.hpp"
#include "robustf2/rng.hpp"
#include "robustf2/stream.hpp"

namespace robustf2 {

struct SketchShape {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
};

/// Calibration constants for sizing sketches from (alpha, delta). Recorded
/// here so every caller derives identical shapes.
constexpr double kSketchRowFactor = 8.0;   // rows = ceil(8 ln(1/delta)), odd
constexpr double kSketchColFactor = 6.0;   // cols = ceil(6 / alpha^2)

inline Eigen::Index odd_rows(double raw) {
  Eigen::Index r = static_cast<Eigen::Index>(std::ceil(raw));
  if (r < 3) r = 3;
  return (r % 2 == 0) ? r + 1 : r;
}

inline SketchShape tracker_shape(double alpha, double delta) {
  if (alpha <= 0.0 || delta <= 0.0 || delta >= 1.0) {
    throw std::invalid_argument("tracker_shape: need alpha > 0, delta in (0,1)");
  }
  return SketchShape{odd_rows(kSketchRowFactor * std::log(1.0 / delta)),
                     static_cast<Eigen::Index>(std::ceil(kSketchColFactor / (alpha * alpha)))};
}

inline SketchShape diff_shape(double gamma, double alpha, double delta) {
  SketchShape s = tracker_shape(alpha, delta);
  s.cols = static_cast<Eigen::Index>(std::ceil(gamma * kSketchColFactor / (alpha * alpha)));
  if (s.cols < 2) s.cols = 2;
  return s;
}

using RowHashes = std::vector<FourwiseHash>;

inline double median_of(Eigen::VectorXd v) {
  std::nth_element(v.data(), v.data() + v.size() / 2, v.data() + v.size());
  return v[v.size() / 2];
}

/// Random-sign bucket sketch: each row accumulates sign(i)*delta into one
/// bucket. Linear in the stream, so accumulators always equal the sketch of
/// the net frequency vector. Per-row squared norms are kept incrementally.
class SignSketch {
 public:
  SignSketch(SketchShape shape, std::shared_ptr<const RowHashes> hashes)
      : table_(Eigen::MatrixXd::Zero(shape.rows, shape.cols)),
        row_sq_(Eigen::VectorXd::Zero(shape.rows)),
        hashes_(std::move(hashes)) {
    if (static_cast<Eigen::Index>(hashes_->size()) != shape.rows) {
      throw std::invalid_argument("SignSketch: one hash per row required");
    }
  }

  SignSketch(SketchShape shape, Rng rng)
      : SignSketch(shape, make_hashes(shape.rows, rng)) {}

  static std::shared_ptr<const RowHashes> make_hashes(Eigen::Index rows, Rng rng) {
    auto hashes = std::make_shared<RowHashes>();
    hashes->reserve(static_cast<std::size_t>(rows));
    for (Eigen::Index r = 0; r < rows; ++r) hashes->emplace_back(rng);
    return hashes;
  }

  void ingest(const Update& u) {
    const double d = static_cast<double>(u.delta);
    for (Eigen::Index r = 0; r < table_.rows(); ++r) {
      const std::uint64_t h = (*hashes_)[static_cast<std::size_t>(r)].eval(
          static_cast<std::uint64_t>(u.item));
      const Eigen::Index c = static_cast<Eigen::Index>(
          (*hashes_)[static_cast<std::size_t>(r)].bucket(h, static_cast<std::uint64_t>(cols())));
      const double sd = FourwiseHash::sign(h) * d;
      double& cell = table_(r, c);
      row_sq_[r] += sd * (2.0 * cell + sd);
      cell += sd;
    }
  }

  void clear() {
    table_.setZero();
    row_sq_.setZero();
  }

  /// Median over rows of the per-row squared norm.
  double f2_estimate() const { return median_of(row_sq_); }

  Eigen::Index rows() const { return table_.rows(); }
  Eigen::Index cols() const { return table_.cols(); }
  const Eigen::MatrixXd& table() const { return table_; }
  const Eigen::VectorXd& row_squares() const { return row_sq_; }
  const std::shared_ptr<const RowHashes>& hashes() const { return hashes_; }

  /// Locate the addressed cell of one row for an item; used by jointly-seeded
  /// consumers that need the co-located value in a sibling sketch.
  std::pair<Eigen::Index, double> locate(Eigen::Index row, std::int64_t item) const {
    const std::uint64_t h =
        (*hashes_)[static_cast<std::size_t>(row)].eval(static_cast<std::uint64_t>(item));
    const Eigen::Index c = static_cast<Eigen::Index>(
        (*hashes_)[static_cast<std::size_t>(row)].bucket(h, static_cast<std::uint64_t>(cols())));
    return {c, FourwiseHash::sign(h)};
  }

  /// Diagnostic state dump: versioned plain text with the per-row hash
  /// coefficients followed by the accumulator table.
  void dump(std::ostream& out) const {
    out << "signsketch v1 " << rows() << ' ' << cols() << '\n';
    for (const FourwiseHash& h : *hashes_) {
      const std::uint64_t* c = h.coefficients();
      out << "hash " << c[0] << ' ' << c[1] << ' ' << c[2] << ' ' << c[3] << '\n';
    }
    const Eigen::IOFormat flat(Eigen::FullPrecision, Eigen::DontAlignCols, " ", "\n", "", "");
    out << table_.format(flat) << '\n';
  }

 private:
  Eigen::MatrixXd table_;
  Eigen::VectorXd row_sq_;
  std::shared_ptr<const RowHashes> hashes_;
};

/// Accumulators the sketch would hold after ingesting exactly this frequency
/// vector; the linear-map oracle used by tests.
inline Eigen::MatrixXd sketch_of_vector(const SignSketch& sk, const FrequencyVector& fv) {
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(sk.rows(), sk.cols());
  for (Eigen::Index i = 0; i < fv.domain(); ++i) {
    if (fv.counts[i] == 0) continue;
    for (Eigen::Index r = 0; r < sk.rows(); ++r) {
      const auto [c, sign] = sk.locate(r, i);
      table(r, c) += sign * static_cast<double>(fv.counts[i]);
    }
  }
  return table;
}

/// Oblivious whole-stream F2 estimator: one sign sketch, median over rows.
class StrongTrackerF2 {
 public:
  StrongTrackerF2(double alpha, double delta, Rng rng)
      : StrongTrackerF2(tracker_shape(alpha, delta), std::move(rng)) {}

  StrongTrackerF2(SketchShape shape, Rng rng) : sketch_(shape, std::move(rng)) {}

  void ingest(const Update& u) { sketch_.ingest(u); }
  double estimate() const { return sketch_.f2_estimate(); }
  const SignSketch& sketch() const { return sketch_; }
  Eigen::Index accumulator_count() const { return sketch_.rows() * sketch_.cols(); }

 private:
  SignSketch sketch_;
};

/// F2 difference estimator: freeze a prefix sketch at the enabling time, keep
/// a suffix sketch over later updates, and combine
///   F2(p + v) - F2(p) = |v|^2 + 2 <p, v>
/// with both terms estimated from jointly-seeded sketches. Per-row cross
/// products are maintained incrementally as the suffix grows.
class DiffEstimatorF2 {
 public:
  DiffEstimatorF2(double gamma, double alpha, double delta, Rng rng)
      : DiffEstimatorF2(diff_shape(gamma, alpha, delta), std::move(rng)) {}

  DiffEstimatorF2(SketchShape shape, Rng rng)
      : hashes_(SignSketch::make_hashes(shape.rows, rng)),
        prefix_(shape, hashes_),
        suffix_(shape, hashes_),
        cross_(Eigen::VectorXd::Zero(shape.rows)) {}

  void ingest(const Update& u) {
    if (!enabled_) {
      prefix_.ingest(u);
      return;
    }
    const double d = static_cast<double>(u.delta);
    for (Eigen::Index r = 0; r < suffix_.rows(); ++r) {
      const auto [c, sign] = suffix_.locate(r, u.item);
      cross_[r] += sign * d * prefix_.table()(r, c);
    }
    suffix_.ingest(u);
  }

  void enable() {
    if (enabled_) throw std::logic_error("DiffEstimatorF2: already enabled");
    enabled_ = true;
    suffix_.clear();
    cross_.setZero();
  }

  bool enabled() const { return enabled_; }

  double estimate() const {
    if (!enabled_) throw std::logic_error("DiffEstimatorF2: estimate before enable");
    return suffix_.f2_estimate() + 2.0 * median_of(cross_);
  }

  /// Estimated inner product between the frozen prefix and the suffix.
  double cross_estimate() const { return median_of(cross_); }

  const SignSketch& prefix() const { return prefix_; }
  const SignSketch& suffix() const { return suffix_; }
  Eigen::Index accumulator_count() const {
    return prefix_.rows() * prefix_.cols() + suffix_.rows() * suffix_.cols();
  }

 private:
  std::shared_ptr<const RowHashes> hashes_;
  SignSketch prefix_;
  SignSketch suffix_;
  Eigen::VectorXd cross_;
  bool enabled_ = false;
};

}  // namespace robustf2
