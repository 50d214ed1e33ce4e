#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "robustf2/stream.hpp"

namespace robustf2 {

/// Functional evaluated on exact prefix tallies; the harness supplies F2.
using PrefixFunctional = std::function<double(const FrequencyVector&)>;

inline PrefixFunctional f2_functional() {
  return [](const FrequencyVector& fv) { return f2_exact(fv); };
}

/// Values of f on every prefix of the stream (index t = first t updates).
std::vector<double> prefix_values(const StreamSegment& stream, Eigen::Index n,
                                  const PrefixFunctional& f);

/// True when moving from `base` to `value` counts as a relative jump of size
/// alpha. A zero baseline jumps exactly when the new value is positive.
inline bool alpha_jump(double base, double value, double alpha) {
  if (base == 0.0) return value > 0.0;
  return std::abs(value - base) >= alpha * base;
}

/// Left-to-right scan over nonnegative values, tracking per-jump-count value
/// extremes. Returns the maximal number of chained alpha-jumps; agrees with
/// the exhaustive chain search.
std::int64_t flip_count_greedy(const std::vector<double>& values, double alpha);

/// O(m^2) chain dynamic program: longest sequence of indices i_1<...<i_k with
/// every consecutive pair an alpha-jump; returns k-1. Independent of the
/// greedy scan; used to check it.
std::int64_t flip_count_exhaustive(const std::vector<double>& values, double alpha);

/// Indices of one maximum jump chain, reconstructed from the chain search.
std::vector<std::int64_t> optimal_chain(const std::vector<double>& values, double alpha);

std::int64_t flip_number(const StreamSegment& stream, double alpha, Eigen::Index n,
                         const PrefixFunctional& f = f2_functional());
std::int64_t flip_number_exhaustive(const StreamSegment& stream, double alpha, Eigen::Index n,
                                    const PrefixFunctional& f = f2_functional());

struct TwistResult {
  std::int64_t mu = 0;
  /// True when the value came from the exact partition search. The scan used
  /// above the exhaustive size cap only certifies a lower bound.
  bool exact = false;
  /// Half-open [begin, end) bounds of the chosen self-cancelling segments.
  std::vector<std::pair<std::int64_t, std::int64_t>> witness;
};

constexpr std::int64_t kTwistExhaustiveCap = 40;

/// Maximal number of disjoint segment pairs P_i, V_i such that each V_i has a
/// large standalone value but barely moves the running value. Streams shorter
/// than `exhaustive_cap` are searched exactly; longer streams get a greedy
/// witness-building lower bound.
TwistResult twist_number(const StreamSegment& stream, double alpha, Eigen::Index n,
                         const PrefixFunctional& f = f2_functional(),
                         std::int64_t exhaustive_cap = kTwistExhaustiveCap);

/// True when the cut between prefix and suffix breaks the difference-estimator
/// precondition: the suffix moves the total by at most gamma relative, yet its
/// standalone value exceeds gamma times the prefix value.
bool is_suffix_violation(const StreamSegment& prefix, const StreamSegment& suffix, double gamma);

/// All (b, e) cut pairs of the stream that violate at scale gamma, F2 only.
/// O(m^2) with incremental segment tallies; `limit` caps the returned list.
std::vector<std::pair<std::int64_t, std::int64_t>> violation_pairs_f2(
    const StreamSegment& stream, Eigen::Index n, double gamma, std::size_t limit = 16);

/// Point check of one candidate cut: does the segment [b, e) violate at
/// scale gamma? Unlike is_suffix_violation this accepts any positive gamma.
bool violation_cut_f2(const StreamSegment& stream, Eigen::Index n, std::int64_t b,
                      std::int64_t e, double gamma);

}  // namespace robustf2
