#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace robustf2 {

using CountVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

/// One turnstile update: signed weight applied to one item of the domain.
struct Update {
  std::int64_t item = 0;
  std::int64_t delta = 0;
};

/// Turnstile update plus the re-enable bit consumed by toggle estimators.
struct TdeUpdate {
  Update update;
  bool enable = false;
};

/// Contiguous run of updates with its position inside the parent stream.
struct StreamSegment {
  std::vector<Update> updates;
  std::int64_t start = 0;
  std::int64_t end = 0;

  StreamSegment() = default;
  explicit StreamSegment(std::vector<Update> u)
      : updates(std::move(u)), start(0), end(static_cast<std::int64_t>(updates.size())) {}

  std::int64_t size() const { return static_cast<std::int64_t>(updates.size()); }
};

/// Exact per-item tallies for a consumed stream prefix. This is ground truth
/// bookkeeping, so dense O(n) storage is fine.
struct FrequencyVector {
  CountVector counts;

  explicit FrequencyVector(Eigen::Index n) : counts(CountVector::Zero(n)) {}

  Eigen::Index domain() const { return counts.size(); }
};

inline void apply_update(FrequencyVector& fv, const Update& u) {
  if (u.item < 0 || u.item >= fv.domain()) {
    throw std::domain_error("apply_update: item " + std::to_string(u.item) +
                            " outside domain [0," + std::to_string(fv.domain()) + ")");
  }
  fv.counts[u.item] += u.delta;
}

/// Second moment of any integer- or real-valued dense vector expression.
template <typename Derived>
double f2_exact(const Eigen::MatrixBase<Derived>& counts) {
  return counts.template cast<double>().squaredNorm();
}

inline double f2_exact(const FrequencyVector& fv) { return f2_exact(fv.counts); }

/// F2 value after every prefix: out[t] = F2 of the first t updates, t = 0..m.
std::vector<double> f2_prefix_values(const StreamSegment& stream, Eigen::Index n);

/// Smallest domain size that accommodates every item in the stream.
Eigen::Index required_domain(const StreamSegment& stream);

/// Text format: one `item delta [enable]` triple per line, `#` starts a comment.
void write_stream(std::ostream& out, const StreamSegment& stream);
void write_stream_file(const std::string& path, const StreamSegment& stream);
StreamSegment read_stream(std::istream& in);
StreamSegment read_stream_file(const std::string& path);

/// Same format with the enable column written explicitly.
void write_tde_stream(std::ostream& out, const std::vector<TdeUpdate>& stream);
std::vector<TdeUpdate> read_tde_stream(std::istream& in);

}  // namespace robustf2
