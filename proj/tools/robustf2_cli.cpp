#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "robustf2/harness.hpp"

namespace {

using namespace robustf2;

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> values;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) values.push_back(std::stod(tok));
  }
  return values;
}

int cmd_run(const std::string& config_path, std::uint64_t seed, const std::string& out_dir) {
  KvConfig cfg = config_path.empty() ? KvConfig{} : KvConfig::load(config_path);
  std::filesystem::create_directories(out_dir);

  RunTrace trace = execute_run(cfg, seed);
  const double alpha = cfg.get_double("alpha", 0.2);
  TraceSummary summary = summarize(trace, alpha);

  {
    std::ofstream out(out_dir + "/trace.csv");
    write_trace_csv(out, trace);
  }
  {
    std::ofstream out(out_dir + "/summary.csv");
    write_summary_csv(out, {summary}, alpha);
  }
  {
    std::ofstream out(out_dir + "/config_echo.txt");
    cfg.write(out);
    out << "config_hash = " << cfg.hash() << '\n';
  }
  if (!trace.level_modifications.empty()) {
    std::ofstream out(out_dir + "/levels.csv");
    write_level_csv(out, trace);
  }
  if (!trace.budget_ledger.empty()) {
    std::ofstream out(out_dir + "/budget_ledger.csv");
    out << trace.budget_ledger;
  }
  std::cout << "algorithm=" << trace.algorithm << " steps=" << trace.rows.size()
            << " within_alpha=" << summary.frac_within << " max_err=" << summary.err_max
            << " phase_resets=" << summary.resets << " guardian_resets=" << trace.guardian_resets
            << " capped=" << int(summary.any_capped) << '\n';
  std::cout << "certificates: lambda=" << trace.cert.lambda_measured
            << " lambda_fine=" << trace.cert.lambda_fine
            << " violation_pairs=" << trace.cert.violation_pairs << '\n';
  std::cout << "outputs written to " << out_dir << '\n';
  return 0;
}

int cmd_oracle(const std::string& which, const std::string& stream_path, double alpha,
               std::int64_t n_override) {
  StreamSegment stream = read_stream_file(stream_path);
  const Eigen::Index n = n_override > 0 ? n_override : required_domain(stream);
  if (which == "flip") {
    std::cout << "flip_number " << flip_number(stream, alpha, n) << '\n';
    if (stream.size() <= 256) {
      std::cout << "flip_number_exhaustive " << flip_number_exhaustive(stream, alpha, n) << '\n';
    }
  } else if (which == "twist") {
    const TwistResult tw = twist_number(stream, alpha, n);
    std::cout << "twist_number " << tw.mu << (tw.exact ? " (exact)" : " (lower bound)") << '\n';
    for (const auto& [b, e] : tw.witness) {
      std::cout << "segment [" << b << ", " << e << ")\n";
    }
  } else if (which == "violations") {
    const auto pairs = violation_pairs_f2(stream, n, alpha, 64);
    std::cout << "violation_pairs " << pairs.size() << '\n';
    for (const auto& [b, e] : pairs) {
      std::cout << "cut " << b << " end " << e << '\n';
    }
  } else {
    std::cerr << "unknown oracle: " << which << '\n';
    return 1;
  }
  return 0;
}

int cmd_sweep(const std::string& param, const std::string& values_csv, std::int64_t trials,
              const std::string& config_path, const std::string& out_dir) {
  KvConfig cfg = config_path.empty() ? KvConfig{} : KvConfig::load(config_path);
  std::filesystem::create_directories(out_dir);
  const std::vector<double> values = parse_values(values_csv);
  if (values.empty()) {
    std::cerr << "sweep: no values\n";
    return 1;
  }

  const double alpha = cfg.get_double("alpha", 0.2);
  const double delta = cfg.get_double("delta", 0.05);
  const std::int64_t n = cfg.get_int("n", 512);
  const std::int64_t m = cfg.get_int("m", 5000);

  std::ofstream out(out_dir + "/sweep.csv");
  if (param == "lambda" || param == "mu") {
    // Formula-level space profile in theory mode; a positive trial count adds
    // measured guardian runs per value (reset counts against the budget).
    out << param << ",total_estimators,total_space_words,max_resets\n";
    std::vector<double> xs, ys;
    for (const double v : values) {
      std::int64_t lambda = cfg.get_int("lambda", 16);
      if (param == "lambda") {
        lambda = static_cast<std::int64_t>(v);
      } else {
        const std::int64_t inv_alpha = static_cast<std::int64_t>(std::ceil(1.0 / alpha));
        lambda = cfg.get_int("lambda", 16) + static_cast<std::int64_t>(v) * inv_alpha;
      }
      const EngineConfig tc = EngineConfig::theory(alpha, delta, lambda, n, m);
      std::int64_t max_resets = -1;
      if (param == "mu" && trials > 0) {
        KvConfig run_cfg = cfg;
        run_cfg.set("algorithm", "guardian");
        run_cfg.set("stream", "violation-injected");
        run_cfg.set("mu", std::to_string(static_cast<std::int64_t>(v)));
        for (std::int64_t trial = 0; trial < trials; ++trial) {
          const RunTrace trace = execute_run(run_cfg, 5000 + static_cast<std::uint64_t>(trial));
          max_resets = std::max(max_resets, trace.guardian_resets);
        }
      }
      out << v << ',' << tc.total_estimators() << ',' << tc.total_space_words() << ','
          << max_resets << '\n';
      xs.push_back(v);
      ys.push_back(tc.total_space_words());
    }
    const double exponent = fit_loglog_exponent(xs, ys);
    out << "# fitted_exponent = " << exponent << '\n';
    std::cout << "fitted exponent vs " << param << ": " << exponent << '\n';
  } else if (param == "alpha") {
    out << "alpha,seed,frac_within_alpha,err_max,resets,any_capped\n";
    for (const double v : values) {
      KvConfig run_cfg = cfg;
      std::ostringstream os;
      os << v;
      run_cfg.set("alpha", os.str());
      for (std::int64_t trial = 0; trial < std::max<std::int64_t>(trials, 1); ++trial) {
        const RunTrace trace = execute_run(run_cfg, 1000 + static_cast<std::uint64_t>(trial));
        const TraceSummary s = summarize(trace, v);
        out << v << ',' << trace.seed << ',' << s.frac_within << ',' << s.err_max << ','
            << s.resets << ',' << int(s.any_capped) << '\n';
      }
    }
  } else {
    std::cerr << "unknown sweep parameter: " << param << '\n';
    return 1;
  }
  std::cout << "sweep written to " << out_dir << "/sweep.csv\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adversarially robust F2 estimation bench"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", stream_path, param, values_csv, which;
  std::uint64_t seed = 1;
  double alpha = 0.2;
  std::int64_t trials = 0, n_override = 0;

  CLI::App* run = app.add_subcommand("run", "run one experiment from a config file");
  run->add_option("--config", config_path, "flat key/value config file");
  run->add_option("--seed", seed, "run seed")->required();
  run->add_option("--out", out_dir, "output directory");

  CLI::App* oracle = app.add_subcommand("oracle", "evaluate brute-force oracles on a stream file");
  oracle->add_option("kind", which, "flip | twist | violations")->required();
  oracle->add_option("--stream", stream_path, "stream file (item delta per line)")->required();
  oracle->add_option("--alpha", alpha, "oracle scale")->required();
  oracle->add_option("--n", n_override, "domain size override");

  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep");
  sweep->add_option("--param", param, "lambda | mu | alpha")->required();
  sweep->add_option("--values", values_csv, "comma-separated values")->required();
  sweep->add_option("--trials", trials, "trials per value (alpha sweeps)");
  sweep->add_option("--config", config_path, "base config file");
  sweep->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, seed, out_dir);
    if (oracle->parsed()) return cmd_oracle(which, stream_path, alpha, n_override);
    if (sweep->parsed()) return cmd_sweep(param, values_csv, trials, config_path, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
