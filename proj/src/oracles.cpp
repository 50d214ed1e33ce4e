#include "robustf2/oracles.hpp"

#include <algorithm>
#include <cmath>

namespace robustf2 {

std::vector<double> prefix_values(const StreamSegment& stream, Eigen::Index n,
                                  const PrefixFunctional& f) {
  std::vector<double> values;
  values.reserve(stream.updates.size() + 1);
  FrequencyVector fv(n);
  values.push_back(f(fv));
  for (const Update& u : stream.updates) {
    apply_update(fv, u);
    values.push_back(f(fv));
  }
  return values;
}

std::int64_t flip_count_greedy(const std::vector<double>& values, double alpha) {
  // Left-to-right scan. For every jump count reached so far, keep the least
  // and greatest positive value ending a chain with that many jumps (plus
  // whether a zero does). Upward jumps get easier as the base shrinks and
  // downward jumps as it grows, so a new value can extend a count class iff
  // it can jump from one of its extremes; the scan therefore returns exactly
  // the chain-search maximum without lookahead.
  struct ClassExtremes {
    double lo_pos = std::numeric_limits<double>::infinity();
    double hi_pos = -std::numeric_limits<double>::infinity();
    bool has_zero = false;

    void absorb(double v) {
      if (v == 0.0) {
        has_zero = true;
      } else {
        lo_pos = std::min(lo_pos, v);
        hi_pos = std::max(hi_pos, v);
      }
    }
    bool can_extend_to(double v, double alpha) const {
      if (has_zero && v > 0.0) return true;
      return lo_pos <= hi_pos &&
             (alpha_jump(lo_pos, v, alpha) || alpha_jump(hi_pos, v, alpha));
    }
  };

  std::vector<ClassExtremes> cls;
  for (const double v : values) {
    if (v < 0.0) throw std::invalid_argument("flip_count: negative functional value");
    std::int64_t reached = 0;
    for (std::int64_t c = static_cast<std::int64_t>(cls.size()) - 1; c >= 0; --c) {
      if (cls[static_cast<std::size_t>(c)].can_extend_to(v, alpha)) {
        reached = c + 1;
        break;
      }
    }
    if (reached >= static_cast<std::int64_t>(cls.size())) cls.resize(cls.size() + 1);
    cls[static_cast<std::size_t>(reached)].absorb(v);
    cls[0].absorb(v);
  }
  return cls.empty() ? 0 : static_cast<std::int64_t>(cls.size()) - 1;
}

std::int64_t flip_count_exhaustive(const std::vector<double>& values, double alpha) {
  const std::size_t m = values.size();
  if (m == 0) return 0;
  std::vector<std::int64_t> best(m, 0);  // best[i]: jumps of the best chain ending at i
  std::int64_t answer = 0;
  for (std::size_t i = 1; i < m; ++i) {
    for (std::size_t s = 0; s < i; ++s) {
      if (alpha_jump(values[s], values[i], alpha) && best[s] + 1 > best[i]) {
        best[i] = best[s] + 1;
      }
    }
    answer = std::max(answer, best[i]);
  }
  return answer;
}

std::vector<std::int64_t> optimal_chain(const std::vector<double>& values, double alpha) {
  std::vector<std::int64_t> chain;
  const std::size_t m = values.size();
  if (m == 0) return chain;
  std::vector<std::int64_t> best(m, 0);
  std::vector<std::int64_t> parent(m, -1);
  std::size_t argmax = 0;
  for (std::size_t i = 1; i < m; ++i) {
    for (std::size_t s = 0; s < i; ++s) {
      if (alpha_jump(values[s], values[i], alpha) && best[s] + 1 > best[i]) {
        best[i] = best[s] + 1;
        parent[i] = static_cast<std::int64_t>(s);
      }
    }
    if (best[i] > best[argmax]) argmax = i;
  }
  for (std::int64_t at = static_cast<std::int64_t>(argmax); at >= 0;
       at = parent[static_cast<std::size_t>(at)]) {
    chain.push_back(at);
  }
  std::reverse(chain.begin(), chain.end());
  return chain;
}

std::int64_t flip_number(const StreamSegment& stream, double alpha, Eigen::Index n,
                         const PrefixFunctional& f) {
  if (alpha <= 0.0) throw std::invalid_argument("flip_number: alpha must be positive");
  return flip_count_greedy(prefix_values(stream, n, f), alpha);
}

std::int64_t flip_number_exhaustive(const StreamSegment& stream, double alpha, Eigen::Index n,
                                    const PrefixFunctional& f) {
  if (alpha <= 0.0) throw std::invalid_argument("flip_number: alpha must be positive");
  return flip_count_exhaustive(prefix_values(stream, n, f), alpha);
}

namespace {

// Standalone value of every segment [b, e), b <= e, as a flat (m+1)^2 table.
// Generic in f, so only used at exhaustive-oracle scale.
std::vector<double> segment_value_table(const StreamSegment& stream, Eigen::Index n,
                                        const PrefixFunctional& f) {
  const std::int64_t m = stream.size();
  std::vector<double> seg(static_cast<std::size_t>((m + 1) * (m + 1)), 0.0);
  for (std::int64_t b = 0; b <= m; ++b) {
    FrequencyVector fv(n);
    seg[static_cast<std::size_t>(b * (m + 1) + b)] = f(fv);
    for (std::int64_t e = b + 1; e <= m; ++e) {
      apply_update(fv, stream.updates[static_cast<std::size_t>(e - 1)]);
      seg[static_cast<std::size_t>(b * (m + 1) + e)] = f(fv);
    }
  }
  return seg;
}

bool pair_valid(double pre_b, double pre_e, double seg_be, double alpha) {
  return seg_be > alpha * pre_b && std::abs(pre_e - pre_b) <= alpha * pre_b;
}

}  // namespace

TwistResult twist_number(const StreamSegment& stream, double alpha, Eigen::Index n,
                         const PrefixFunctional& f, std::int64_t exhaustive_cap) {
  if (alpha <= 0.0) throw std::invalid_argument("twist_number: alpha must be positive");
  TwistResult result;
  const std::int64_t m = stream.size();
  if (m == 0) {
    result.exact = true;
    return result;
  }
  const std::vector<double> pre = prefix_values(stream, n, f);

  if (m <= exhaustive_cap) {
    // Exact search over all partitions P_0 V_0 ... P_{mu-1} V_{mu-1} [residual].
    // best[pos] = max pairs placeable in the suffix starting at pos; the gap
    // before each V and any trailing residual are absorbed by the P segments.
    const std::vector<double> seg = segment_value_table(stream, n, f);
    auto seg_at = [&](std::int64_t b, std::int64_t e) {
      return seg[static_cast<std::size_t>(b * (m + 1) + e)];
    };
    std::vector<std::int64_t> best(static_cast<std::size_t>(m + 2), 0);
    std::vector<std::int64_t> pick(static_cast<std::size_t>(m + 1), -1);
    for (std::int64_t pos = m - 1; pos >= 0; --pos) {
      best[pos] = best[pos + 1];
      pick[pos] = -1;
      for (std::int64_t e = pos + 1; e <= m; ++e) {
        if (pair_valid(pre[pos], pre[e], seg_at(pos, e), alpha) && 1 + best[e] > best[pos]) {
          best[pos] = 1 + best[e];
          pick[pos] = e;
        }
      }
    }
    result.mu = best[0];
    result.exact = true;
    std::int64_t pos = 0;
    while (pos < m) {
      if (pick[pos] >= 0 && best[pos] == 1 + best[pick[pos]]) {
        result.witness.emplace_back(pos, pick[pos]);
        pos = pick[pos];
      } else {
        ++pos;
      }
    }
    result.witness.resize(static_cast<std::size_t>(result.mu));
    return result;
  }

  // Greedy lower bound: repeatedly take the violation segment with the
  // earliest feasible end after the current position. Each round is one
  // O(m^2) sweep with incremental standalone tallies per begin point.
  result.exact = false;
  std::vector<std::int64_t> touched;
  std::vector<double> seg_counts(static_cast<std::size_t>(n), 0.0);
  std::int64_t pos = 0;
  while (pos < m) {
    std::int64_t found_b = -1, found_e = -1;
    for (std::int64_t b = pos; b < m; ++b) {
      if (found_e >= 0 && b + 1 >= found_e) break;
      for (std::int64_t i : touched) seg_counts[static_cast<std::size_t>(i)] = 0.0;
      touched.clear();
      double seg_f2 = 0.0;
      const std::int64_t e_stop = found_e >= 0 ? found_e : m;
      for (std::int64_t e = b + 1; e <= e_stop; ++e) {
        const Update& u = stream.updates[static_cast<std::size_t>(e - 1)];
        double& c = seg_counts[static_cast<std::size_t>(u.item)];
        if (c == 0.0) touched.push_back(u.item);
        const double d = static_cast<double>(u.delta);
        seg_f2 += d * (2.0 * c + d);
        c += d;
        if (pair_valid(pre[b], pre[e], seg_f2, alpha)) {
          found_b = b;
          found_e = e;
          break;
        }
      }
    }
    if (found_e < 0) break;
    result.witness.emplace_back(found_b, found_e);
    ++result.mu;
    pos = found_e;
  }
  return result;
}

bool is_suffix_violation(const StreamSegment& prefix, const StreamSegment& suffix, double gamma) {
  if (gamma <= 0.0 || gamma >= 1.0) {
    throw std::invalid_argument("is_suffix_violation: gamma must lie in (0,1)");
  }
  Eigen::Index n = 0;
  for (const Update& u : prefix.updates) n = std::max<Eigen::Index>(n, u.item + 1);
  for (const Update& u : suffix.updates) n = std::max<Eigen::Index>(n, u.item + 1);
  if (n == 0) n = 1;

  FrequencyVector pre_fv(n);
  for (const Update& u : prefix.updates) apply_update(pre_fv, u);
  const double f_prefix = f2_exact(pre_fv);
  if (f_prefix == 0.0) {
    throw std::domain_error("is_suffix_violation: prefix value is zero");
  }

  FrequencyVector suf_fv(n);
  FrequencyVector total_fv = pre_fv;
  for (const Update& u : suffix.updates) {
    apply_update(suf_fv, u);
    apply_update(total_fv, u);
  }
  const double f_suffix = f2_exact(suf_fv);
  const double f_total = f2_exact(total_fv);
  return std::abs(f_total - f_prefix) <= gamma * f_prefix && f_suffix > gamma * f_prefix;
}

bool violation_cut_f2(const StreamSegment& stream, Eigen::Index n, std::int64_t b,
                      std::int64_t e, double gamma) {
  if (gamma <= 0.0) throw std::invalid_argument("violation_cut_f2: gamma must be positive");
  if (b < 0 || e > stream.size() || b >= e) return false;
  FrequencyVector pre(n), seg(n), tot(n);
  for (std::int64_t t = 0; t < b; ++t) apply_update(pre, stream.updates[static_cast<std::size_t>(t)]);
  tot.counts = pre.counts;
  for (std::int64_t t = b; t < e; ++t) {
    apply_update(seg, stream.updates[static_cast<std::size_t>(t)]);
    apply_update(tot, stream.updates[static_cast<std::size_t>(t)]);
  }
  const double f_pre = f2_exact(pre);
  return f2_exact(seg) > gamma * f_pre && std::abs(f2_exact(tot) - f_pre) <= gamma * f_pre;
}

std::vector<std::pair<std::int64_t, std::int64_t>> violation_pairs_f2(
    const StreamSegment& stream, Eigen::Index n, double gamma, std::size_t limit) {
  if (gamma <= 0.0) throw std::invalid_argument("violation_pairs_f2: gamma must be positive");
  std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
  const std::int64_t m = stream.size();
  const std::vector<double> pre = f2_prefix_values(stream, n);
  std::vector<double> seg_counts(static_cast<std::size_t>(n), 0.0);
  std::vector<std::int64_t> touched;
  for (std::int64_t b = 0; b < m && pairs.size() < limit; ++b) {
    if (pre[b] <= 0.0) continue;
    for (std::int64_t i : touched) seg_counts[static_cast<std::size_t>(i)] = 0.0;
    touched.clear();
    double seg_f2 = 0.0;
    for (std::int64_t e = b + 1; e <= m; ++e) {
      const Update& u = stream.updates[static_cast<std::size_t>(e - 1)];
      double& c = seg_counts[static_cast<std::size_t>(u.item)];
      if (c == 0.0) touched.push_back(u.item);
      const double d = static_cast<double>(u.delta);
      seg_f2 += d * (2.0 * c + d);
      c += d;
      if (seg_f2 > gamma * pre[b] && std::abs(pre[e] - pre[b]) <= gamma * pre[b]) {
        pairs.emplace_back(b, e);
        if (pairs.size() >= limit) break;
      }
    }
  }
  return pairs;
}

}  // namespace robustf2
