#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "robustf2/engine.hpp"
#include "robustf2/guardian.hpp"
#include "robustf2/oracles.hpp"
#include "robustf2/stream.hpp"

namespace robustf2 {

enum class StreamKind { InsertionOnly, TurnstileBounded, ViolationInjected };

StreamKind stream_kind_from_string(const std::string& s);
std::string to_string(StreamKind kind);

/// Generator request. Every generated stream starts with a warm-up prefix of
/// `warm_size` distinct unit inserts and ships with oracle certificates.
struct StreamSpec {
  StreamKind kind = StreamKind::TurnstileBounded;
  std::int64_t n = 512;
  std::int64_t m = 5000;
  std::int64_t lambda_target = 64;  // certified flip bound at `alpha`
  std::int64_t mu_target = 0;       // injected violations (ViolationInjected)
  std::int64_t warm_size = 0;
  double alpha = 0.2;               // certification scale
  double alpha_prime = 0.0;         // fine certification scale; 0 skips
  double cert_gamma = 0.0;          // violation-pair scan scale; 0 skips
  std::uint64_t seed = 1;
};

struct StreamCertificate {
  std::int64_t lambda_measured = 0;     // flip number at spec.alpha
  std::int64_t lambda_fine = -1;        // flip number at spec.alpha_prime
  std::int64_t violation_pairs = -1;    // validated cuts at spec.cert_gamma
  std::vector<std::pair<std::int64_t, std::int64_t>> violation_cuts;  // injected [b, e)
  std::vector<std::int64_t> violation_times;  // injected segment end times
  double warm_f2 = 0.0;
};

struct GeneratedStream {
  StreamSegment stream;
  StreamCertificate cert;
};

GeneratedStream gen_stream(const StreamSpec& spec);

/// Algorithms playable in a match. Non-engine algorithms report output only.
class StreamAlgorithm {
 public:
  virtual ~StreamAlgorithm() = default;
  virtual StepResult step(const Update& u) = 0;
  virtual std::string name() const = 0;
};

class OracleAlgorithm final : public StreamAlgorithm {
 public:
  explicit OracleAlgorithm(Eigen::Index n) : fv_(n) {}
  StepResult step(const Update& u) override;
  std::string name() const override { return "oracle"; }

 private:
  FrequencyVector fv_;
  double f2_ = 0.0;
};

class TrackerAlgorithm final : public StreamAlgorithm {
 public:
  TrackerAlgorithm(SketchShape shape, std::uint64_t seed)
      : tracker_(shape, Rng(seed)) {}
  StepResult step(const Update& u) override;
  std::string name() const override { return "tracker"; }

 private:
  StrongTrackerF2 tracker_;
};

class EngineAlgorithm final : public StreamAlgorithm {
 public:
  EngineAlgorithm(const EngineConfig& cfg, std::uint64_t seed) : engine_(cfg, seed) {}
  StepResult step(const Update& u) override { return engine_.step(u); }
  std::string name() const override { return "engine"; }
  RobustDeEngine& engine() { return engine_; }
  const RobustDeEngine& engine() const { return engine_; }

 private:
  RobustDeEngine engine_;
};

class GuardianAlgorithm final : public StreamAlgorithm {
 public:
  GuardianAlgorithm(const GuardianConfig& cfg, std::uint64_t seed)
      : guardian_(make_guardian(cfg, seed)) {}
  StepResult step(const Update& u) override { return guardian_.step(u); }
  std::string name() const override { return "guardian"; }
  Guardian& guardian() { return guardian_; }
  const Guardian& guardian() const { return guardian_; }

 private:
  Guardian guardian_;
};

/// Update suppliers. Adaptive sources see only the past output sequence.
class UpdateSource {
 public:
  virtual ~UpdateSource() = default;
  virtual std::optional<Update> next(double previous_output) = 0;
};

class ReplaySource final : public UpdateSource {
 public:
  explicit ReplaySource(const StreamSegment& stream) : stream_(stream) {}
  std::optional<Update> next(double) override;

 private:
  const StreamSegment& stream_;
  std::size_t at_ = 0;
};

struct AdversaryPolicy {
  std::int64_t n = 256;
  std::int64_t m = 4000;
  double warm_f2 = 320.0;          // second moment the warm-up must reach
  double keep_threshold = 0.0;     // keep a probe whose observed response is <= this
  std::uint64_t seed = 1;
};

/// Output-chasing attacker. The warm-up packs many low-count items into the
/// domain so that probe items collide often, then the probe loop inserts a
/// candidate, watches how the published estimate responds, keeps items whose
/// response is at or below the threshold (the sketch under-counts them) and
/// deletes the rest. Truth grows along the kept set while the estimate lags.
class EstimateChasingAdversary final : public UpdateSource {
 public:
  explicit EstimateChasingAdversary(AdversaryPolicy policy);
  std::optional<Update> next(double previous_output) override;

  std::int64_t warm_updates() const { return warm_updates_; }

 private:
  std::int64_t next_candidate();
  std::int64_t next_delete_candidate();

  AdversaryPolicy policy_;
  Rng rng_;
  std::vector<Update> warm_plan_;
  std::int64_t warm_updates_ = 0;
  std::int64_t pool_begin_ = 0;
  std::int64_t delete_begin_ = 0;
  std::vector<std::int64_t> count_;  // the attacker's own tally of its items
  std::int64_t emitted_ = 0;
  std::int64_t candidate_ = -1;      // probe awaiting a verdict
  std::int64_t probe_delta_ = +1;
  bool flip_ = false;
  double base_output_ = 0.0;
  std::int64_t cursor_ = 0;
  std::int64_t delete_cursor_ = 0;
};

struct TraceRow {
  double f2_true = 0.0;
  double output = 0.0;
  double rel_err = 0.0;
  std::int64_t level = -1;
  bool modified = false;
  bool froze = false;
  bool reset = false;
  bool capped = false;
};

struct RunTrace {
  std::vector<TraceRow> rows;
  std::string algorithm;
  std::uint64_t seed = 0;
  std::string config_hash;
  StreamCertificate cert;
  StreamSegment consumed;  // the realized update sequence (matters for adversaries)
  // Engine diagnostics when the algorithm has them.
  std::vector<std::int64_t> level_modifications;  // C_j per level
  std::vector<std::int64_t> level_caps;           // P_j per level
  std::int64_t guardian_resets = 0;
  std::string budget_ledger;                      // CSV: level, k, eps, eps_running
};

/// Two-player protocol: the source emits an update (seeing only past
/// outputs), the algorithm answers, ground truth is tracked exactly.
RunTrace run_match(StreamAlgorithm& alg, UpdateSource& source, Eigen::Index n,
                   std::int64_t max_steps);

struct TraceSummary {
  std::uint64_t seed = 0;
  double q50 = 0.0, q90 = 0.0, q99 = 0.0, err_max = 0.0;
  double frac_within = 0.0;  // fraction of steps with rel_err <= alpha
  std::int64_t resets = 0;
  std::int64_t modifications = 0;
  bool any_capped = false;
};

TraceSummary summarize(const RunTrace& trace, double alpha);

/// Per-step validation report of a finished run against its exact path.
struct AccuracyReport {
  std::vector<double> per_step;
  double max_err = 0.0;
};

AccuracyReport output_accuracy_probe(const RunTrace& trace);

void write_trace_csv(std::ostream& out, const RunTrace& trace);
void write_summary_csv(std::ostream& out, const std::vector<TraceSummary>& summaries,
                       double alpha);

/// Per-level modification counts against their caps (CSV: level, count, cap).
void write_level_csv(std::ostream& out, const RunTrace& trace);

/// Least-squares slope of log(y) against log(x).
double fit_loglog_exponent(const std::vector<double>& xs, const std::vector<double>& ys);

/// Flat key/value run configuration: `key = value` or `key value` lines,
/// `#` comments. The echo is canonical (sorted) and hashed into run traces.
class KvConfig {
 public:
  static KvConfig parse(std::istream& in);
  static KvConfig load(const std::string& path);

  bool has(const std::string& key) const { return kv_.count(key) != 0; }
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  void set(const std::string& key, const std::string& value) { kv_[key] = value; }

  void write(std::ostream& out) const;
  std::string echo() const;
  std::string hash() const;  // FNV-1a of the canonical echo, hex

 private:
  std::map<std::string, std::string> kv_;
};

/// Assemble and run one experiment from a flat config; used by the CLI.
RunTrace execute_run(const KvConfig& cfg, std::uint64_t seed);

}  // namespace robustf2
