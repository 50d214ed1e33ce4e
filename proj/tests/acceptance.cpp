// Acceptance suite: one criterion per section, one pass/fail line each.
// Run everything with no arguments or a single criterion with --criterion N.

#include <cmath>
#include <cstring>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "robustf2/dp.hpp"
#include "robustf2/harness.hpp"
#include "support/reference_tau.hpp"
#include "support/stubs.hpp"
#include "support/test_streams.hpp"

using namespace robustf2;
using namespace robustf2::testing;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& label, const std::string& detail) {
  std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion << ": " << label
            << " — " << detail << std::endl;
  if (!pass) ++g_failures;
}

// ---------------------------------------------------------------- criterion 1
void criterion1() {
  std::int64_t flip_agree = 0;
  const std::int64_t flip_trials = 1000;
  for (std::int64_t trial = 0; trial < flip_trials; ++trial) {
    const std::uint64_t seed = 90000 + static_cast<std::uint64_t>(trial);
    const std::int64_t n = 4 + (trial % 4) * 10;
    const std::int64_t m = 12 + (trial % 14) * 4;  // up to 64
    const double alpha = (trial % 3 == 0) ? 0.3 : (trial % 3 == 1 ? 0.5 : 0.8);
    const StreamSegment s = (trial % 2 == 0) ? random_walk_stream(n, m, seed)
                                             : nonneg_walk_stream(n, m, seed);
    const std::vector<double> values = f2_prefix_values(s, n);
    if (flip_count_greedy(values, alpha) == flip_count_exhaustive(values, alpha)) ++flip_agree;
  }

  std::int64_t twist_zero = 0;
  for (std::int64_t trial = 0; trial < 100; ++trial) {
    const StreamSegment s =
        insertion_only_stream(6, 16 + (trial % 12) * 2, 7000 + static_cast<std::uint64_t>(trial));
    const TwistResult tw = twist_number(s, 0.25, 6);
    if (tw.exact && tw.mu == 0) ++twist_zero;
  }

  std::int64_t sandwich_ok = 0;
  const std::int64_t splits = 500;
  for (std::int64_t trial = 0; trial < splits / 2; ++trial) {
    const std::uint64_t seed = 50000 + static_cast<std::uint64_t>(trial);
    const std::int64_t n = 4 + (trial % 3) * 10;
    const StreamSegment s = random_walk_stream(n, 64, seed);
    const std::vector<double> values = f2_prefix_values(s, n);
    const double alpha = (trial % 2) ? 0.4 : 0.6;
    Rng rng(seed);
    const std::int64_t cut =
        8 + static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(48)));
    for (int part = 0; part < 2; ++part) {
      const std::int64_t r1 = part == 0 ? 0 : cut;
      const std::int64_t r2 = part == 0 ? cut : static_cast<std::int64_t>(values.size());
      const std::int64_t inside = witness_inside_pairs(values, alpha, r1, r2);
      const std::vector<double> window(values.begin() + r1, values.begin() + r2);
      const std::int64_t wf = flip_count_exhaustive(window, alpha);
      if (wf >= inside && wf <= inside + 2) ++sandwich_ok;
    }
  }

  std::ostringstream detail;
  detail << "greedy==chain-search " << flip_agree << "/" << flip_trials << ", insertion-only twist 0: "
         << twist_zero << "/100, sub-stream sandwich " << sandwich_ok << "/" << splits;
  report(1, flip_agree == flip_trials && twist_zero == 100 && sandwich_ok == splits,
         "oracle suite", detail.str());
}

// ---------------------------------------------------------------- criterion 2
void criterion2() {
  // Kolmogorov-Smirnov against the analytic CDF at significance 0.001.
  Rng rng(20221);
  const std::size_t n = 100000;
  std::vector<double> samples(n);
  for (double& s : samples) s = sample_laplace(1.0, rng);
  std::sort(samples.begin(), samples.end());
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double cdf = laplace_cdf(samples[i], 1.0);
    d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
    d = std::max(d, std::abs(cdf - static_cast<double>(i + 1) / n));
  }
  const double ks_crit = std::sqrt(-std::log(0.0005) / 2.0) / std::sqrt(static_cast<double>(n));
  const bool ks_ok = d < ks_crit;

  // Private median rank error across three privacy settings.
  const ValueGrid grid = ValueGrid::positive(1.0, 1000.0, 0.05);
  std::vector<double> values(1000);
  for (int i = 0; i < 1000; ++i) values[i] = grid.snap(static_cast<double>(i + 1));
  struct Setting {
    double eps, delta;
  };
  bool med_ok = true;
  std::ostringstream med_detail;
  for (const Setting s : {Setting{0.5, 0.01}, Setting{1.0, 0.05}, Setting{2.0, 0.1}}) {
    const double bound = (2.0 / s.eps) * std::log(static_cast<double>(grid.size()) / s.delta);
    std::int64_t ok = 0;
    const std::int64_t runs = 10000;
    for (std::int64_t run = 0; run < runs; ++run) {
      Rng mrng(40000 + static_cast<std::uint64_t>(run) * 7 +
               static_cast<std::uint64_t>(s.eps * 100));
      const double med = private_median(values, grid, s.eps, NoiseMode{true}, mrng);
      if (median_rank_error(med, values) <= bound) ++ok;
    }
    const double frac = static_cast<double>(ok) / static_cast<double>(runs);
    med_ok = med_ok && frac >= 1.0 - s.delta;
    med_detail << " (eps=" << s.eps << ": " << frac << ")";
  }

  // Composition formula against direct evaluation.
  bool comp_ok = true;
  for (const std::int64_t k : {0L, 1L, 7L, 200L}) {
    for (const double eps : {0.01, 0.1, 0.5}) {
      const auto [e, dd] = compose_advanced(k, eps, 1e-6, 0.01);
      const double direct =
          k == 0 ? 0.0
                 : std::sqrt(2.0 * static_cast<double>(k) * std::log(1.0 / 0.01)) * eps +
                       2.0 * static_cast<double>(k) * eps * eps;
      const double direct_delta = static_cast<double>(k) * 1e-6 + 0.01;
      comp_ok = comp_ok && std::abs(e - direct) <= 1e-12 && std::abs(dd - direct_delta) <= 1e-12;
    }
  }

  std::ostringstream detail;
  detail << "KS D=" << d << " (crit " << ks_crit << "), median within bound" << med_detail.str()
         << ", composition exact: " << (comp_ok ? "yes" : "no");
  report(2, ks_ok && med_ok && comp_ok, "dp primitives", detail.str());
}

// ---------------------------------------------------------------- criterion 3
void criterion3() {
  const SketchShape tracker_sh = tracker_shape(0.25, 0.1 / 2000.0);
  std::int64_t tracker_good = 0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    StrongTrackerF2 t(tracker_sh, Rng(333 + trial * 11));
    const StreamSegment s = tracker_test_stream(256, 2000, trial);
    FrequencyVector fv(256);
    bool all_good = true;
    for (const Update& u : s.updates) {
      t.ingest(u);
      apply_update(fv, u);
      const double truth = f2_exact(fv);
      if (truth > 0.0 && std::abs(t.estimate() - truth) > 0.25 * truth) {
        all_good = false;
        break;
      }
    }
    if (all_good) ++tracker_good;
  }

  const SketchShape de_sh = diff_shape(0.25, 0.1, 0.05);
  std::int64_t de_insert = 0, de_delete = 0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    DiffEstimatorF2 di(de_sh, Rng(777 + trial * 13));
    for (int i = 0; i < 100; ++i) di.ingest(Update{i, +1});
    di.enable();
    for (int i = 100; i < 110; ++i) di.ingest(Update{i, +1});
    if (std::abs(di.estimate() - 10.0) <= 0.1 * 100.0) ++de_insert;

    DiffEstimatorF2 dd(de_sh, Rng(778 + trial * 13));
    for (int i = 0; i < 100; ++i) dd.ingest(Update{i, +1});
    dd.enable();
    for (int i = 0; i < 5; ++i) dd.ingest(Update{i, -1});
    if (std::abs(dd.estimate() - (-5.0)) <= 0.1 * 100.0) ++de_delete;
  }

  bool linear = true;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const SketchShape shape{7, 128};
    const StreamSegment p = random_walk_stream(64, 200, seed * 2 + 1);
    const StreamSegment v = random_walk_stream(64, 150, seed * 2 + 2);
    SignSketch whole(shape, Rng(1000 + seed));
    SignSketch a(shape, Rng(1000 + seed));
    SignSketch b(shape, Rng(1000 + seed));
    for (const Update& u : p.updates) {
      whole.ingest(u);
      a.ingest(u);
    }
    for (const Update& u : v.updates) {
      whole.ingest(u);
      b.ingest(u);
    }
    linear = linear && (whole.table() == a.table() + b.table());
  }

  std::ostringstream detail;
  detail << "tracker all-step " << tracker_good << "/100, de insert-suffix " << de_insert
         << "/100, de deletion-suffix " << de_delete << "/100, linearity exact: "
         << (linear ? "yes" : "no");
  report(3, tracker_good >= 90 && de_insert >= 90 && de_delete >= 90 && linear, "sketch suite",
         detail.str());
}

// ---------------------------------------------------------------- criterion 4
void criterion4() {
  const SketchShape shape{7, 256};
  bool bit_identical = true;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const StreamSegment s = random_walk_stream(64, 400, 600 + seed);
    DiffEstimatorF2 plain(shape, Rng(4000 + seed));
    ToggleDE<DiffEstimatorF2> toggle(DiffEstimatorF2(shape, Rng(4000 + seed)), 1);
    const std::size_t cut = 120;
    for (std::size_t t = 0; t < s.updates.size(); ++t) {
      if (t == cut) {
        plain.enable();
        toggle.enable();
      }
      plain.ingest(s.updates[t]);
      toggle.ingest(s.updates[t]);
      if (t >= cut && toggle.estimate() != plain.estimate()) {
        bit_identical = false;
        break;
      }
    }
  }

  std::int64_t rebase_ok = 0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    ToggleDE<DiffEstimatorF2> toggle(DiffEstimatorF2(shape, Rng(8800 + trial * 3)), 4);
    FrequencyVector fv(512);
    auto feed = [&](const Update& u) {
      toggle.ingest(u);
      apply_update(fv, u);
    };
    Rng rng(trial);
    for (int i = 0; i < 200; ++i) feed(Update{i, +1});
    toggle.enable();
    for (int i = 0; i < 60; ++i) {
      feed(Update{static_cast<std::int64_t>(rng.next_below(200)), +1});
    }
    toggle.enable();
    const double f_e2 = f2_exact(fv);
    bool good = true;
    for (int i = 0; i < 40; ++i) {
      feed(Update{static_cast<std::int64_t>(rng.next_below(260)), +1});
      const double want = f2_exact(fv) - f_e2;
      if (std::abs(toggle.estimate() - want) > 0.1 * f_e2) good = false;
    }
    if (good) ++rebase_ok;
  }

  // Structural checks: double footprint, log-widened rows under the enable
  // budget split.
  DiffEstimatorF2 de(shape, Rng(5));
  ToggleDE<DiffEstimatorF2> tde(DiffEstimatorF2(shape, Rng(5)), 64);
  const bool footprint_ok = tde.accumulator_count() == 2 * de.accumulator_count();
  const EngineConfig cfg = EngineConfig::experiment(0.2, 0.05, 64, 512, 5000);
  bool rows_ok = true;
  for (std::int64_t j = 0; j < cfg.beta; ++j) {
    const SketchShape base = diff_shape(cfg.gamma_level[static_cast<std::size_t>(j)],
                                        cfg.alpha_tde_sketch, cfg.est_delta);
    const SketchShape widened = cfg.de_sh[static_cast<std::size_t>(j)];
    const double extra = std::log2(
        1.0 + static_cast<double>(cfg.toggle_budget[static_cast<std::size_t>(j)]));
    rows_ok = rows_ok && widened.rows >= base.rows && widened.cols == base.cols &&
              widened.rows == odd_rows(static_cast<double>(base.rows) + extra);
  }

  std::ostringstream detail;
  detail << "p=1 bit-identical: " << (bit_identical ? "yes" : "no") << ", re-enable tracking "
         << rebase_ok << "/100, double footprint: " << (footprint_ok ? "yes" : "no")
         << ", budget-split rows: " << (rows_ok ? "yes" : "no");
  report(4, bit_identical && rebase_ok >= 95 && footprint_ok && rows_ok, "toggle adapter",
         detail.str());
}

// ---------------------------------------------------------------- criterion 5
void criterion5() {
  std::int64_t scenarios_ok = 0;
  const std::int64_t scenarios = 10000;
  for (std::int64_t sc = 0; sc < scenarios; ++sc) {
    const std::uint64_t seed = 77000 + static_cast<std::uint64_t>(sc);
    EngineConfig cfg = StubEngineHarness::stub_config(0.2, 256, /*noise=*/false);
    StubEngineHarness h(cfg, seed);
    ReferenceAutomaton ref(cfg);
    Rng rng(seed * 97 + 13);

    double truth = cfg.warm_floor() * 4.0;
    bool match = true;
    for (std::int64_t t = 0; t < 120 && match; ++t) {
      const double r = rng.next_unit();
      bool reset = false;
      if (r < 0.02) {
        reset = true;
      } else if (r < 0.32) {
        const double sign = (rng.next_unit() < 0.5) ? 1.0 : -1.0;
        truth = std::max(cfg.warm_floor(), ref.output() * (1.0 + sign * 3.0 * cfg.step_size));
      } else {
        const double u = 2.0 * rng.next_unit() - 1.0;
        truth = std::max(cfg.warm_floor(), ref.output() * (1.0 + 0.3 * cfg.step_size * u));
      }
      if (reset) h.engine.phase_reset();
      const ReferenceStep want = ref.step(truth, reset);
      h.truth.value = truth;
      const StepResult got = h.engine.step(Update{0, 1});
      match = h.engine.tau().tau == want.tau && got.level == want.level &&
              got.froze == want.froze && got.output == want.output && !got.capped;
    }
    if (match) ++scenarios_ok;
  }
  std::ostringstream detail;
  detail << "exact counter/level/output agreement on " << scenarios_ok << "/" << scenarios
         << " scripted trigger sequences";
  report(5, scenarios_ok == scenarios, "deterministic automaton", detail.str());
}

// ---------------------------------------------------------------- criterion 6
struct EngineRunStats {
  std::int64_t trials_accurate = 0;
  std::int64_t trials_counts_ok = 0;
  std::int64_t trials = 0;
  bool any_capped = false;
  double worst_frac = 1.0;
};

EngineRunStats engine_endtoend(StreamKind kind, std::int64_t trials, std::uint64_t seed_base) {
  EngineRunStats stats;
  const double alpha = 0.2;
  // The per-level caps must cover the fine-scale flip number of the stream
  // (its flips at the output-modification band), which for these m=5000 runs
  // sits near 240 including the warm ramp; the certified bound at alpha
  // stays at or below 64.
  const std::int64_t lambda_engine = 320;
  EngineConfig cfg = EngineConfig::experiment(alpha, 0.05, lambda_engine, 512, 5000);
  cfg.warm_start_declared = true;
  cfg.warm_f2 = cfg.warm_floor();

  for (std::int64_t trial = 0; trial < trials; ++trial) {
    StreamSpec spec;
    spec.kind = kind;
    spec.n = 512;
    spec.m = 5000;
    spec.lambda_target = 64;
    spec.warm_size = static_cast<std::int64_t>(cfg.warm_floor());
    spec.alpha = alpha;
    spec.alpha_prime = cfg.step_size / 2.0;
    spec.cert_gamma = cfg.gamma0;
    spec.seed = seed_base + static_cast<std::uint64_t>(trial);
    const GeneratedStream gen = gen_stream(spec);

    EngineAlgorithm alg(cfg, seed_base + 100000 + static_cast<std::uint64_t>(trial));
    ReplaySource src(gen.stream);
    const RunTrace trace = run_match(alg, src, 512, 5000);
    const TraceSummary s = summarize(trace, alpha);

    ++stats.trials;
    if (s.frac_within >= 0.99) ++stats.trials_accurate;
    stats.worst_frac = std::min(stats.worst_frac, s.frac_within);
    stats.any_capped = stats.any_capped || s.any_capped;

    bool counts_ok = true;
    for (std::int64_t j = 0; j <= cfg.beta; ++j) {
      const double bound = 4.0 * static_cast<double>(lambda_engine) / std::ldexp(1.0, j);
      if (static_cast<double>(alg.engine().modification_count(j)) > bound) counts_ok = false;
    }
    if (counts_ok) ++stats.trials_counts_ok;
  }
  return stats;
}

void criterion6() {
  const EngineRunStats ins = engine_endtoend(StreamKind::InsertionOnly, 100, 61000);
  const EngineRunStats tur = engine_endtoend(StreamKind::TurnstileBounded, 100, 62000);
  std::ostringstream detail;
  detail << "insertion-only accurate " << ins.trials_accurate << "/100 (worst "
         << ins.worst_frac << "), turnstile accurate " << tur.trials_accurate << "/100 (worst "
         << tur.worst_frac << "), capped: " << (ins.any_capped || tur.any_capped ? "YES" : "never")
         << ", per-level counts within 4*lambda/2^j: " << ins.trials_counts_ok << "+"
         << tur.trials_counts_ok << "/200";
  const bool pass = ins.trials_accurate >= 95 && tur.trials_accurate >= 95 && !ins.any_capped &&
                    !tur.any_capped && ins.trials_counts_ok >= 99 && tur.trials_counts_ok >= 99;
  report(6, pass, "engine end-to-end", detail.str());
}

// ---------------------------------------------------------------- criterion 7
void criterion7() {
  bool resets_ok = true;
  bool recovery_ok = true;
  std::int64_t accurate = 0, trials_total = 0;
  std::ostringstream per_mu;
  for (const std::int64_t mu : {1, 2, 3}) {
    std::int64_t mu_accurate = 0;
    for (std::int64_t trial = 0; trial < 100; ++trial) {
      const std::int64_t m = 1500 + mu * 900;
      GuardianConfig gc = GuardianConfig::make(0.2, 0.05, 96, mu, 512, m);
      gc.engine.warm_start_declared = true;
      gc.engine.warm_f2 = gc.engine.warm_floor();

      StreamSpec spec;
      spec.kind = StreamKind::ViolationInjected;
      spec.n = 512;
      spec.m = m;
      spec.lambda_target = 48;
      spec.mu_target = mu;
      spec.warm_size = static_cast<std::int64_t>(gc.engine.warm_floor());
      spec.alpha = 0.2;
      spec.cert_gamma = gc.engine.gamma0;
      spec.seed = 71000 + static_cast<std::uint64_t>(mu * 1000 + trial);
      const GeneratedStream gen = gen_stream(spec);
      if (gen.cert.violation_pairs < mu) resets_ok = false;

      GuardianAlgorithm alg(gc, 72000 + static_cast<std::uint64_t>(mu * 1000 + trial));
      ReplaySource src(gen.stream);
      const RunTrace trace = run_match(alg, src, 512, m);
      const TraceSummary s = summarize(trace, 0.2);

      ++trials_total;
      if (alg.guardian().reset_count() > mu) resets_ok = false;
      for (const TraceRow& row : trace.rows) {
        if (row.reset && row.rel_err > 0.2) recovery_ok = false;
      }
      if (s.frac_within >= 0.99) {
        ++accurate;
        ++mu_accurate;
      }
    }
    per_mu << " mu=" << mu << ":" << mu_accurate << "/100";
  }
  std::ostringstream detail;
  detail << "resets within the twist budget in all trials: " << (resets_ok ? "yes" : "NO")
         << ", post-reset outputs accurate: " << (recovery_ok ? "yes" : "NO") << ", accuracy"
         << per_mu.str();
  report(7, resets_ok && recovery_ok && accurate >= 285, "guardian", detail.str());
}

// ---------------------------------------------------------------- criterion 8
void criterion8() {
  std::int64_t tracker_broken = 0;
  std::int64_t guardian_held = 0;
  const std::int64_t seeds = 100;
  for (std::int64_t seed = 0; seed < seeds; ++seed) {
    AdversaryPolicy policy;
    policy.n = 256;
    policy.m = 4000;
    policy.warm_f2 = 320.0;
    policy.seed = 81000 + static_cast<std::uint64_t>(seed);

    {
      EstimateChasingAdversary adv(policy);
      // plain median-of-9 tracker sized for the run accuracy
      TrackerAlgorithm alg(SketchShape{9, 96}, 82000 + static_cast<std::uint64_t>(seed));
      const RunTrace trace = run_match(alg, adv, 256, policy.m);
      if (summarize(trace, 0.2).err_max > 0.2) ++tracker_broken;
    }
    {
      EstimateChasingAdversary adv(policy);
      GuardianConfig gc = GuardianConfig::make(0.2, 0.05, 128, 4, 256, 4000);
      gc.engine.warm_start_declared = true;
      gc.engine.warm_f2 = 320.0;
      GuardianAlgorithm alg(gc, 83000 + static_cast<std::uint64_t>(seed));
      const RunTrace trace = run_match(alg, adv, 256, policy.m);
      if (summarize(trace, 0.2).frac_within >= 0.99) ++guardian_held;
    }
  }
  std::ostringstream detail;
  detail << "unprotected tracker broken " << tracker_broken << "/" << seeds
         << ", protected stack held >=99% steps in " << guardian_held << "/" << seeds;
  report(8, tracker_broken >= 80 && guardian_held >= 95, "robustness differential", detail.str());
}

// ---------------------------------------------------------------- criterion 9
void criterion9() {
  std::vector<double> lambdas = {16, 32, 64, 128, 256};
  std::vector<double> space_lambda;
  for (const double l : lambdas) {
    const EngineConfig cfg =
        EngineConfig::theory(0.2, 0.05, static_cast<std::int64_t>(l), 512, 5000);
    space_lambda.push_back(cfg.total_space_words());
  }
  const double exp_lambda = fit_loglog_exponent(lambdas, space_lambda);

  std::vector<double> mus = {16, 32, 64, 128, 256};
  std::vector<double> space_mu;
  const std::int64_t base_lambda = 16;
  const std::int64_t inv_alpha = 5;  // ceil(1/alpha) at alpha = 0.2
  for (const double mu : mus) {
    const std::int64_t lambda_hat =
        2 * (base_lambda + static_cast<std::int64_t>(mu) * inv_alpha);
    const EngineConfig cfg = EngineConfig::theory(0.2, 0.05, lambda_hat, 512, 5000);
    space_mu.push_back(cfg.total_space_words());
  }
  const double exp_mu = fit_loglog_exponent(mus, space_mu);

  // Doubling lambda should multiply the estimator count by about sqrt(2).
  const double k256 =
      static_cast<double>(EngineConfig::theory(0.2, 0.05, 256, 512, 5000).total_estimators());
  const double k128 =
      static_cast<double>(EngineConfig::theory(0.2, 0.05, 128, 512, 5000).total_estimators());
  const double ratio = k256 / k128;
  const bool ratio_ok = ratio >= std::sqrt(2.0) * 0.85 && ratio <= std::sqrt(2.0) * 1.15;

  std::ostringstream detail;
  detail << "space exponent vs flip bound " << exp_lambda << ", vs twist budget " << exp_mu
         << ", estimator-count doubling ratio " << ratio;
  const bool pass = exp_lambda >= 0.4 && exp_lambda <= 0.6 && exp_mu >= 0.4 && exp_mu <= 0.6 &&
                    ratio_ok;
  report(9, pass, "space scaling law", detail.str());
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i + 1 < argc + 1; ++i) {
    if (i < argc && std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[i + 1]);
    }
  }
  using Fn = void (*)();
  const Fn criteria[] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                         criterion6, criterion7, criterion8, criterion9};
  if (only >= 1 && only <= 9) {
    criteria[only - 1]();
  } else {
    for (const Fn fn : criteria) fn();
  }
  return g_failures == 0 ? 0 : 1;
}
