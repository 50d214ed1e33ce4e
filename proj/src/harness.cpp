#include "robustf2/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace robustf2 {

StreamKind stream_kind_from_string(const std::string& s) {
  if (s == "insertion-only") return StreamKind::InsertionOnly;
  if (s == "turnstile-bounded") return StreamKind::TurnstileBounded;
  if (s == "violation-injected") return StreamKind::ViolationInjected;
  throw std::invalid_argument("unknown stream kind: " + s);
}

std::string to_string(StreamKind kind) {
  switch (kind) {
    case StreamKind::InsertionOnly: return "insertion-only";
    case StreamKind::TurnstileBounded: return "turnstile-bounded";
    case StreamKind::ViolationInjected: return "violation-injected";
  }
  return "?";
}

namespace {

struct GenState {
  StreamSegment stream;
  std::vector<std::int64_t> counts;
  double f2 = 0.0;

  explicit GenState(std::int64_t n) : counts(static_cast<std::size_t>(n), 0) {}

  void push(std::int64_t item, std::int64_t delta) {
    const double c = static_cast<double>(counts[static_cast<std::size_t>(item)]);
    const double d = static_cast<double>(delta);
    f2 += d * (2.0 * c + d);
    counts[static_cast<std::size_t>(item)] += delta;
    stream.updates.push_back(Update{item, delta});
  }

  std::int64_t size() const { return stream.size(); }
};

void warm_up(GenState& st, std::int64_t warm) {
  for (std::int64_t i = 0; i < warm; ++i) st.push(i, +1);
}

// Unit-amplitude filler: insert a scratch item, then take it back.
void wiggle(GenState& st, std::int64_t item, std::int64_t steps_left) {
  st.push(item, +1);
  if (steps_left > 1) st.push(item, -1);
}

}  // namespace

GeneratedStream gen_stream(const StreamSpec& spec) {
  if (spec.warm_size <= 0) throw std::invalid_argument("gen_stream: warm_size must be positive");
  if (spec.warm_size > spec.n) throw std::invalid_argument("gen_stream: warm_size exceeds domain");
  if (spec.m < spec.warm_size) throw std::invalid_argument("gen_stream: m smaller than warm-up");
  if (spec.mu_target > 0 && spec.kind != StreamKind::ViolationInjected) {
    throw std::invalid_argument("gen_stream: mu target requires the violation-injected kind");
  }
  if (spec.kind == StreamKind::ViolationInjected) {
    const std::int64_t need = spec.warm_size * (1 + 2 * spec.mu_target) + 2 * spec.mu_target;
    if (spec.m < need) {
      throw std::invalid_argument("gen_stream: m too small for the requested violations");
    }
  }

  Rng rng(spec.seed);
  GenState st(spec.n);
  warm_up(st, spec.warm_size);
  GeneratedStream out;
  out.cert.warm_f2 = st.f2;

  const std::int64_t heavy_n = std::max<std::int64_t>(spec.warm_size, spec.n / 2);
  std::int64_t scratch = std::min(heavy_n, spec.n - 1);  // wiggle region [heavy_n, n)
  auto next_scratch = [&]() {
    const std::int64_t item = scratch;
    if (spec.n > heavy_n) {
      scratch = heavy_n + ((scratch - heavy_n + 1) % (spec.n - heavy_n));
    }
    return item;
  };

  // The warm ramp itself consumes jump budget; size the legs by what is left.
  const std::int64_t warm_flips =
      flip_count_greedy(f2_prefix_values(st.stream, spec.n), spec.alpha);

  switch (spec.kind) {
    case StreamKind::InsertionOnly: {
      while (st.size() < spec.m) {
        st.push(static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(spec.n))), +1);
      }
      break;
    }
    case StreamKind::TurnstileBounded: {
      // Alternate growth and decay legs under a flip budget, then pad with
      // unit wiggles. Decay strictly undoes the latest growth (stack order),
      // so any round trip cancels coordinate-wise and no stretch of the
      // stream can hide a large self-cancelling displacement.
      const double leg_flips =
          0.5 * static_cast<double>(std::max<std::int64_t>(0, spec.lambda_target - warm_flips - 4));
      double budget = leg_flips * std::log1p(spec.alpha);
      std::vector<std::int64_t> grow_stack;
      bool grow = true;
      while (budget > 0.05 && st.size() + 2 < spec.m) {
        const double leg = std::min(budget, 0.35 + 0.45 * rng.next_unit());
        budget -= leg;
        const double target = grow ? st.f2 * std::exp(leg) : st.f2 * std::exp(-leg);
        while (st.size() + 2 < spec.m &&
               (grow ? st.f2 < target : st.f2 > std::max(target, out.cert.warm_f2))) {
          if (grow) {
            std::int64_t item = -1;
            for (int attempt = 0; attempt < 16; ++attempt) {
              const std::int64_t cand =
                  static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(heavy_n)));
              const std::int64_t c = st.counts[static_cast<std::size_t>(cand)];
              if ((2.0 * static_cast<double>(c) + 1.0) / st.f2 > 0.01) continue;
              item = cand;
              break;
            }
            if (item < 0) break;
            st.push(item, +1);
            grow_stack.push_back(item);
          } else {
            if (grow_stack.empty()) break;
            const std::int64_t item = grow_stack.back();
            grow_stack.pop_back();
            st.push(item, -1);
          }
        }
        grow = !grow;
      }
      while (st.size() < spec.m) wiggle(st, next_scratch(), spec.m - st.size());
      break;
    }
    case StreamKind::ViolationInjected: {
      // Each injection flips the warm items by two units, item by item. The
      // running value never moves by more than one unit, yet the segment's
      // standalone value is four times the prefix value: a certified
      // violation that leaves no trace in the exact path.
      const std::int64_t gap =
          (spec.m - st.size()) / (spec.mu_target + 1) - 2 * spec.warm_size;
      std::int64_t direction = -1;
      for (std::int64_t v = 0; v < spec.mu_target; ++v) {
        for (std::int64_t g = 0; g < std::max<std::int64_t>(2, gap) && st.size() + 2 < spec.m;
             g += 2) {
          wiggle(st, next_scratch(), spec.m - st.size());
        }
        const std::int64_t begin = st.size();
        for (std::int64_t i = 0; i < spec.warm_size; ++i) {
          st.push(i, direction);
          st.push(i, direction);
        }
        out.cert.violation_cuts.emplace_back(begin, st.size());
        out.cert.violation_times.push_back(st.size());
        direction = -direction;
      }
      while (st.size() < spec.m) wiggle(st, next_scratch(), spec.m - st.size());
      break;
    }
  }

  st.stream.start = 0;
  st.stream.end = st.stream.size();
  out.stream = std::move(st.stream);

  out.cert.lambda_measured = flip_number(out.stream, spec.alpha, spec.n);
  if (out.cert.lambda_measured > spec.lambda_target) {
    throw std::runtime_error("gen_stream: flip certificate " +
                             std::to_string(out.cert.lambda_measured) + " exceeds target " +
                             std::to_string(spec.lambda_target));
  }
  if (spec.alpha_prime > 0.0) {
    out.cert.lambda_fine = flip_number(out.stream, spec.alpha_prime, spec.n);
  }
  if (spec.cert_gamma > 0.0) {
    if (spec.kind == StreamKind::ViolationInjected) {
      // Validate each injected cut directly; disjoint valid cuts certify the
      // twist number from below.
      std::int64_t validated = 0;
      for (const auto& [b, e] : out.cert.violation_cuts) {
        if (violation_cut_f2(out.stream, spec.n, b, e, spec.cert_gamma)) ++validated;
      }
      out.cert.violation_pairs = validated;
      if (validated < spec.mu_target) {
        throw std::runtime_error("gen_stream: injected violations not certified");
      }
    } else {
      const auto pairs = violation_pairs_f2(out.stream, spec.n, spec.cert_gamma, 1);
      out.cert.violation_pairs = static_cast<std::int64_t>(pairs.size());
      if (out.cert.violation_pairs != 0) {
        throw std::runtime_error("gen_stream: unexpected suffix violation in generated stream");
      }
    }
  }
  return out;
}

StepResult OracleAlgorithm::step(const Update& u) {
  const double c = static_cast<double>(fv_.counts[u.item]);
  const double d = static_cast<double>(u.delta);
  f2_ += d * (2.0 * c + d);
  apply_update(fv_, u);
  StepResult r;
  r.output = f2_;
  r.level = -1;
  return r;
}

StepResult TrackerAlgorithm::step(const Update& u) {
  tracker_.ingest(u);
  StepResult r;
  r.output = tracker_.estimate();
  r.level = -1;
  return r;
}

std::optional<Update> ReplaySource::next(double) {
  if (at_ >= stream_.updates.size()) return std::nullopt;
  return stream_.updates[at_++];
}

EstimateChasingAdversary::EstimateChasingAdversary(AdversaryPolicy policy)
    : policy_(policy), rng_(policy.seed) {
  // Warm layout: mostly single-count items (dense bucket collisions for the
  // probes) topped up with a few count-5 items to reach the target value
  // while leaving at least 30% of the domain as probe candidates.
  const std::int64_t budget_items = (policy_.n * 7) / 10;
  const double f = policy_.warm_f2;
  std::int64_t heavies = 0;
  if (f > static_cast<double>(budget_items)) {
    heavies = static_cast<std::int64_t>(std::ceil((f - budget_items) / 24.0));
  }
  const std::int64_t singles = std::max<std::int64_t>(
      0, std::min<std::int64_t>(budget_items - heavies,
                                static_cast<std::int64_t>(std::ceil(f)) - 25 * heavies));
  std::int64_t item = 0;
  for (std::int64_t h = 0; h < heavies; ++h, ++item) {
    for (int k = 0; k < 5; ++k) warm_plan_.push_back(Update{item, +1});
  }
  for (std::int64_t s = 0; s < singles; ++s, ++item) warm_plan_.push_back(Update{item, +1});
  pool_begin_ = item;
  if (pool_begin_ >= policy_.n) {
    throw std::invalid_argument("adversary: warm-up leaves no probe candidates");
  }
  warm_updates_ = static_cast<std::int64_t>(warm_plan_.size());
  count_.assign(static_cast<std::size_t>(policy_.n), 0);
  for (const Update& u : warm_plan_) count_[static_cast<std::size_t>(u.item)] += u.delta;
  delete_begin_ = heavies;  // deletion probes target the warm singles
  cursor_ = pool_begin_;
  delete_cursor_ = delete_begin_;
}

std::int64_t EstimateChasingAdversary::next_candidate() {
  const std::int64_t item = cursor_;
  cursor_ = pool_begin_ + (cursor_ - pool_begin_ + 1) % (policy_.n - pool_begin_);
  return item;
}

std::int64_t EstimateChasingAdversary::next_delete_candidate() {
  const std::int64_t item = delete_cursor_;
  delete_cursor_ = delete_begin_ + (delete_cursor_ - delete_begin_ + 1) %
                                       std::max<std::int64_t>(1, pool_begin_ - delete_begin_);
  return item;
}

std::optional<Update> EstimateChasingAdversary::next(double previous_output) {
  if (emitted_ >= policy_.m) return std::nullopt;
  ++emitted_;

  if (emitted_ <= warm_updates_) {
    return warm_plan_[static_cast<std::size_t>(emitted_ - 1)];
  }

  if (candidate_ >= 0) {
    // Verdict on the outstanding probe: the true contribution of moving the
    // item's own count by the probe delta is delta*(2c + delta). A response
    // at least two units short of that means the published estimate moved
    // away from the truth, so the probe stays in.
    const double response = previous_output - base_output_;
    const std::int64_t probed = candidate_;
    const std::int64_t c = count_[static_cast<std::size_t>(probed)];
    const double true_delta = static_cast<double>(probe_delta_) *
                              (2.0 * static_cast<double>(c) + static_cast<double>(probe_delta_));
    candidate_ = -1;
    if (response > true_delta - 2.0 + policy_.keep_threshold) {
      return Update{probed, -probe_delta_};  // the sketch noticed it; undo
    }
    count_[static_cast<std::size_t>(probed)] += probe_delta_;
  }

  // Alternate insertion probes over the candidate pool with deletion probes
  // over the warm singles; deletions shrink the baseline, which compounds
  // the relative error.
  flip_ = !flip_;
  if (flip_ && pool_begin_ > delete_begin_) {
    probe_delta_ = -1;
    candidate_ = next_delete_candidate();
  } else {
    probe_delta_ = +1;
    candidate_ = next_candidate();
  }
  base_output_ = previous_output;
  return Update{candidate_, probe_delta_};
}

RunTrace run_match(StreamAlgorithm& alg, UpdateSource& source, Eigen::Index n,
                   std::int64_t max_steps) {
  RunTrace trace;
  trace.algorithm = alg.name();
  FrequencyVector fv(n);
  double f2 = 0.0;
  double last_output = 0.0;
  for (std::int64_t t = 0; t < max_steps; ++t) {
    const std::optional<Update> u = source.next(last_output);
    if (!u) break;
    const double c = static_cast<double>(fv.counts[u->item]);
    const double d = static_cast<double>(u->delta);
    f2 += d * (2.0 * c + d);
    apply_update(fv, *u);

    const StepResult r = alg.step(*u);
    TraceRow row;
    row.f2_true = f2;
    row.output = r.output;
    row.rel_err = f2 > 0.0 ? std::abs(r.output - f2) / f2
                           : (r.output == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    row.level = r.level;
    row.modified = r.modified;
    row.froze = r.froze;
    row.reset = r.phase_reset;
    row.capped = r.capped;
    trace.rows.push_back(row);
    trace.consumed.updates.push_back(*u);
    last_output = r.output;
  }
  trace.consumed.end = trace.consumed.size();
  return trace;
}

TraceSummary summarize(const RunTrace& trace, double alpha) {
  TraceSummary s;
  s.seed = trace.seed;
  if (trace.rows.empty()) return s;
  std::vector<double> errs;
  errs.reserve(trace.rows.size());
  std::int64_t within = 0;
  for (const TraceRow& row : trace.rows) {
    errs.push_back(row.rel_err);
    if (row.rel_err <= alpha) ++within;
    if (row.reset) ++s.resets;
    if (row.modified) ++s.modifications;
    if (row.capped) s.any_capped = true;
  }
  std::sort(errs.begin(), errs.end());
  auto quantile = [&](double q) {
    const std::size_t idx = std::min(
        errs.size() - 1, static_cast<std::size_t>(std::ceil(q * static_cast<double>(errs.size()))) -
                             (q > 0.0 ? 1 : 0));
    return errs[idx];
  };
  s.q50 = quantile(0.50);
  s.q90 = quantile(0.90);
  s.q99 = quantile(0.99);
  s.err_max = errs.back();
  s.frac_within = static_cast<double>(within) / static_cast<double>(errs.size());
  return s;
}

AccuracyReport output_accuracy_probe(const RunTrace& trace) {
  AccuracyReport report;
  report.per_step.reserve(trace.rows.size());
  for (const TraceRow& row : trace.rows) {
    report.per_step.push_back(row.rel_err);
    report.max_err = std::max(report.max_err, row.rel_err);
  }
  return report;
}

void write_level_csv(std::ostream& out, const RunTrace& trace) {
  out << "level,modifications,cap\n";
  for (std::size_t j = 0; j < trace.level_modifications.size(); ++j) {
    out << j << ',' << trace.level_modifications[j] << ','
        << (j < trace.level_caps.size() ? trace.level_caps[j] : -1) << '\n';
  }
}

void write_trace_csv(std::ostream& out, const RunTrace& trace) {
  out << "# algorithm=" << trace.algorithm << " seed=" << trace.seed
      << " config=" << trace.config_hash << " lambda=" << trace.cert.lambda_measured
      << " lambda_fine=" << trace.cert.lambda_fine
      << " violation_pairs=" << trace.cert.violation_pairs << " warm_f2=" << trace.cert.warm_f2;
  if (!trace.cert.violation_times.empty()) {
    out << " violation_times=";
    for (std::size_t i = 0; i < trace.cert.violation_times.size(); ++i) {
      out << (i ? ";" : "") << trace.cert.violation_times[i];
    }
  }
  out << "\n";
  out << "t,f2_true,output,rel_err,level,modified,froze,reset,capped\n";
  out << std::setprecision(12);
  std::int64_t t = 1;
  for (const TraceRow& r : trace.rows) {
    out << t++ << ',' << r.f2_true << ',' << r.output << ',' << r.rel_err << ',' << r.level << ','
        << int(r.modified) << ',' << int(r.froze) << ',' << int(r.reset) << ',' << int(r.capped)
        << '\n';
  }
}

void write_summary_csv(std::ostream& out, const std::vector<TraceSummary>& summaries,
                       double alpha) {
  out << "seed,q50,q90,q99,err_max,frac_within_alpha,resets,modifications,any_capped\n";
  out << std::setprecision(12);
  for (const TraceSummary& s : summaries) {
    out << s.seed << ',' << s.q50 << ',' << s.q90 << ',' << s.q99 << ',' << s.err_max << ','
        << s.frac_within << ',' << s.resets << ',' << s.modifications << ',' << int(s.any_capped)
        << '\n';
  }
  (void)alpha;
}

double fit_loglog_exponent(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("fit_loglog_exponent: need matching series of length >= 2");
  }
  Eigen::MatrixXd a(static_cast<Eigen::Index>(xs.size()), 2);
  Eigen::VectorXd b(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    a(static_cast<Eigen::Index>(i), 0) = 1.0;
    a(static_cast<Eigen::Index>(i), 1) = std::log(xs[i]);
    b(static_cast<Eigen::Index>(i)) = std::log(ys[i]);
  }
  const Eigen::Vector2d coeffs = a.colPivHouseholderQr().solve(b);
  return coeffs[1];
}

KvConfig KvConfig::parse(std::istream& in) {
  KvConfig cfg;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto eq = line.find('=');
    std::string key, value;
    if (eq != std::string::npos) {
      key = line.substr(0, eq);
      value = line.substr(eq + 1);
    } else {
      std::istringstream ls(line);
      if (!(ls >> key)) continue;
      std::getline(ls, value);
    }
    auto trim = [](std::string& s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      s = (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
    };
    trim(key);
    trim(value);
    if (!key.empty()) cfg.kv_[key] = value;
  }
  return cfg;
}

KvConfig KvConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return parse(in);
}

std::string KvConfig::get(const std::string& key, const std::string& fallback) const {
  const auto it = kv_.find(key);
  return it == kv_.end() ? fallback : it->second;
}

double KvConfig::get_double(const std::string& key, double fallback) const {
  const auto it = kv_.find(key);
  return it == kv_.end() ? fallback : std::stod(it->second);
}

std::int64_t KvConfig::get_int(const std::string& key, std::int64_t fallback) const {
  const auto it = kv_.find(key);
  return it == kv_.end() ? fallback : std::stoll(it->second);
}

bool KvConfig::get_bool(const std::string& key, bool fallback) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) return fallback;
  return it->second == "1" || it->second == "true" || it->second == "on" || it->second == "yes";
}

void KvConfig::write(std::ostream& out) const {
  for (const auto& [k, v] : kv_) out << k << " = " << v << '\n';
}

std::string KvConfig::echo() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

std::string KvConfig::hash() const {
  const std::string text = echo();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

RunTrace execute_run(const KvConfig& cfg, std::uint64_t seed) {
  const std::string algorithm = cfg.get("algorithm", "engine");
  const double alpha = cfg.get_double("alpha", 0.2);
  const double delta = cfg.get_double("delta", 0.05);
  const std::int64_t lambda = cfg.get_int("lambda", 128);
  const std::int64_t mu = cfg.get_int("mu", 0);
  const std::int64_t n = cfg.get_int("n", 512);
  const std::int64_t m = cfg.get_int("m", 5000);
  const bool noise = cfg.get_bool("noise", true);

  EngineConfig ec = EngineConfig::experiment(alpha, delta, lambda, n, m);
  ec.noise_enabled = noise;
  const std::int64_t warm =
      std::max<std::int64_t>(cfg.get_int("warm", 0), static_cast<std::int64_t>(ec.warm_floor()));
  ec.warm_start_declared = true;
  ec.warm_f2 = static_cast<double>(warm);

  RunTrace trace;
  const std::string adversary = cfg.get("adversary", "none");
  std::unique_ptr<StreamAlgorithm> alg;
  EngineAlgorithm* engine_alg = nullptr;
  GuardianAlgorithm* guardian_alg = nullptr;
  if (algorithm == "engine") {
    auto p = std::make_unique<EngineAlgorithm>(ec, Rng(seed).fork(10).key());
    engine_alg = p.get();
    alg = std::move(p);
  } else if (algorithm == "guardian") {
    GuardianConfig gc = GuardianConfig::make(alpha, delta, lambda, std::max<std::int64_t>(mu, 1),
                                             n, m);
    gc.noise_enabled = noise;
    gc.engine.noise_enabled = noise;
    gc.engine.warm_start_declared = true;
    gc.engine.warm_f2 = static_cast<double>(warm);
    auto p = std::make_unique<GuardianAlgorithm>(gc, Rng(seed).fork(10).key());
    guardian_alg = p.get();
    alg = std::move(p);
  } else if (algorithm == "tracker") {
    alg = std::make_unique<TrackerAlgorithm>(tracker_shape(alpha, ec.est_delta),
                                             Rng(seed).fork(10).key());
  } else if (algorithm == "oracle") {
    alg = std::make_unique<OracleAlgorithm>(n);
  } else {
    throw std::invalid_argument("unknown algorithm: " + algorithm);
  }

  if (adversary == "estimate-chasing") {
    AdversaryPolicy policy;
    policy.n = n;
    policy.m = m;
    policy.warm_f2 = static_cast<double>(warm);
    policy.keep_threshold = cfg.get_double("adversary_keep_threshold", 0.0);
    policy.seed = Rng(seed).fork(11).key();
    EstimateChasingAdversary source(policy);
    trace = run_match(*alg, source, n, m);
  } else {
    StreamSpec ss;
    ss.kind = stream_kind_from_string(cfg.get("stream", "turnstile-bounded"));
    ss.n = n;
    ss.m = m;
    ss.lambda_target = cfg.get_int("stream_lambda", std::max<std::int64_t>(1, lambda / 2));
    ss.mu_target = (ss.kind == StreamKind::ViolationInjected) ? std::max<std::int64_t>(mu, 1) : 0;
    ss.warm_size = warm;
    ss.alpha = alpha;
    ss.alpha_prime = ec.step_size / 2.0;
    ss.cert_gamma = ec.gamma0;
    ss.seed = Rng(seed).fork(12).key();
    GeneratedStream gen = gen_stream(ss);
    ReplaySource source(gen.stream);
    trace = run_match(*alg, source, n, m);
    trace.cert = gen.cert;
  }

  const auto harvest = [&trace](const RobustDeEngine& engine) {
    const EngineConfig& c = engine.config();
    for (std::int64_t j = 0; j < c.level_count(); ++j) {
      trace.level_modifications.push_back(engine.modification_count(j));
      trace.level_caps.push_back(c.p_level[static_cast<std::size_t>(std::min(j, c.beta))]);
    }
    std::ostringstream ledger;
    engine.budget().write_ledger(ledger);
    trace.budget_ledger = ledger.str();
  };
  if (engine_alg != nullptr) harvest(engine_alg->engine());
  if (guardian_alg != nullptr) {
    harvest(guardian_alg->guardian().engine());
    trace.guardian_resets = guardian_alg->guardian().reset_count();
  }

  trace.seed = seed;
  trace.config_hash = cfg.hash();
  return trace;
}

}  // namespace robustf2
