#include "netsample/walk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "netsample/errors.hpp"
#include "netsample/parallel.hpp"

namespace netsample {

const char* to_string(SampleMode mode) {
  switch (mode) {
    case SampleMode::kWithReplacement:
      return "with";
    case SampleMode::kWithoutReplacement:
      return "without";
    case SampleMode::kBoth:
      return "both";
  }
  return "";
}

SampleMode parse_sample_mode(const std::string& text) {
  if (text == "with" || text == "with_replacement") return SampleMode::kWithReplacement;
  if (text == "without" || text == "without_replacement") return SampleMode::kWithoutReplacement;
  if (text == "both") return SampleMode::kBoth;
  throw ValidationError("unknown sampling mode '" + text + "' (with, without, both)");
}

void SimConfig::validate() const {
  if (replicates < 1) throw ValidationError("replicates must be >= 1");
  if (sample_budget < 1) throw ValidationError("sample budget must be >= 1");
  if (!fixed_tree && sample_budget > gw_target_size)
    throw ValidationError("sample budget exceeds the GW target size");
  if (fixed_tree && mode != SampleMode::kWithReplacement)
    throw ValidationError("a fixed tree is only supported with replacement");
}

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

// Draws states for the simple random walk on a graph.
class GraphStepper {
 public:
  explicit GraphStepper(const Graph& g) : g_(g) {
    row_start_.reserve(g.node_count() + 1);
    row_start_.push_back(0);
    stationary_cum_.reserve(g.node_count());
    double total = 0.0;
    for (NodeId i = 0; i < g.node_count(); ++i) {
      double acc = 0.0;
      for (const auto& nb : g.neighbors(i)) {
        unit_weights_ = unit_weights_ && nb.weight == 1.0;
        acc += nb.weight;
        row_cum_.push_back(acc);
      }
      row_start_.push_back(row_cum_.size());
      total += g.degree(i);
      stationary_cum_.push_back(total);
    }
    if (!(total > 0.0)) throw ValidationError("graph has no edges");
  }

  std::size_t size() const { return g_.node_count(); }

  NodeId stationary(CounterRng& rng) const {
    const double u = rng.uniform() * stationary_cum_.back();
    const auto it = std::upper_bound(stationary_cum_.begin(), stationary_cum_.end(), u);
    return static_cast<NodeId>(std::min<std::size_t>(it - stationary_cum_.begin(), size() - 1));
  }

  NodeId step(NodeId from, CounterRng& rng) const {
    const auto row = g_.neighbors(from);
    if (row.empty()) throw ValidationError("walk reached an isolated node");
    if (unit_weights_) return row[rng.below(row.size())].node;
    const auto b = row_cum_.begin() + static_cast<std::ptrdiff_t>(row_start_[from]);
    const auto e = row_cum_.begin() + static_cast<std::ptrdiff_t>(row_start_[from + 1]);
    const double u = rng.uniform() * *(e - 1);
    const auto it = std::upper_bound(b, e, u);
    return row[static_cast<std::size_t>(std::min(it - b, static_cast<std::ptrdiff_t>(row.size() - 1)))].node;
  }

  double degree(NodeId i, bool weighted) const {
    return weighted ? g_.degree(i) : static_cast<double>(g_.unweighted_degree(i));
  }

 private:
  const Graph& g_;
  std::vector<std::size_t> row_start_;
  std::vector<double> row_cum_;
  std::vector<double> stationary_cum_;
  bool unit_weights_ = true;
};

// Draws states from an explicit dense kernel.
class KernelStepper {
 public:
  explicit KernelStepper(const Kernel& k) : n_(k.size()), cum_(n_ * n_), stationary_cum_(n_) {
    for (std::size_t i = 0; i < n_; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n_; ++j) {
        acc += k.transition(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        cum_[i * n_ + j] = acc;
      }
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      acc += k.stationary(static_cast<Eigen::Index>(i));
      stationary_cum_[i] = acc;
    }
  }

  std::size_t size() const { return n_; }

  NodeId stationary(CounterRng& rng) const { return pick(stationary_cum_.data(), rng); }
  NodeId step(NodeId from, CounterRng& rng) const { return pick(cum_.data() + from * n_, rng); }

 private:
  NodeId pick(const double* cum, CounterRng& rng) const {
    const double u = rng.uniform() * cum[n_ - 1];
    const auto it = std::upper_bound(cum, cum + n_, u);
    return static_cast<NodeId>(std::min<std::ptrdiff_t>(it - cum, static_cast<std::ptrdiff_t>(n_ - 1)));
  }

  std::size_t n_;
  std::vector<double> cum_;
  std::vector<double> stationary_cum_;
};

template <typename Stepper>
std::vector<NodeId> walk_states(const Stepper& st, const ReferralForest& tree, const WalkInit& init,
                                CounterRng& rng) {
  if (!init.stationary && init.node >= st.size())
    throw ValidationError("fixed initial node is out of range");
  std::vector<NodeId> states(tree.size());
  for (auto v : tree.bfs_order()) {
    const auto p = tree.parent(v);
    if (p == kNoParent) {
      states[v] = init.stationary ? st.stationary(rng) : init.node;
    } else {
      states[v] = st.step(states[static_cast<std::size_t>(p)], rng);
    }
  }
  return states;
}

void observe(WalkSample& ws, std::span<const double> y) {
  ws.y.resize(ws.states.size());
  for (std::size_t t = 0; t < ws.states.size(); ++t) {
    if (ws.states[t] >= y.size()) throw ValidationError("feature shorter than the state space");
    ws.y[t] = y[ws.states[t]];
  }
}

void require_tree(const std::shared_ptr<const ReferralForest>& tree) {
  if (!tree || tree->size() == 0) throw ValidationError("walk needs a nonempty referral forest");
}

}  // namespace

namespace {

WalkSample walk_graph(const GraphStepper& st, std::span<const double> y,
                      std::shared_ptr<const ReferralForest> tree, const WalkInit& init, CounterRng& rng,
                      bool weighted_degrees) {
  require_tree(tree);
  WalkSample ws;
  ws.states = walk_states(st, *tree, init, rng);
  observe(ws, y);
  ws.degrees.resize(ws.states.size());
  for (std::size_t t = 0; t < ws.states.size(); ++t) ws.degrees[t] = st.degree(ws.states[t], weighted_degrees);
  ws.tree = std::move(tree);
  return ws;
}

}  // namespace

WalkSample walk_with_replacement(const Graph& g, std::span<const double> y,
                                 std::shared_ptr<const ReferralForest> tree, const WalkInit& init,
                                 CounterRng& rng, bool weighted_degrees) {
  return walk_graph(GraphStepper(g), y, std::move(tree), init, rng, weighted_degrees);
}

WalkSample walk_with_replacement(const Graph& g, std::span<const double> y,
                                 std::shared_ptr<const ReferralForest> tree, const WalkInit& init,
                                 std::uint64_t seed) {
  CounterRng rng(stream_key(seed, 0));
  return walk_with_replacement(g, y, std::move(tree), init, rng);
}

WalkSample walk_with_replacement(const Kernel& k, std::span<const double> y,
                                 std::shared_ptr<const ReferralForest> tree, const WalkInit& init,
                                 CounterRng& rng) {
  require_tree(tree);
  const KernelStepper st(k);
  WalkSample ws;
  ws.states = walk_states(st, *tree, init, rng);
  observe(ws, y);
  ws.tree = std::move(tree);
  return ws;
}

WalkSample walk_with_replacement(const Kernel& k, std::span<const double> y,
                                 std::shared_ptr<const ReferralForest> tree, const WalkInit& init,
                                 std::uint64_t seed) {
  CounterRng rng(stream_key(seed, 0));
  return walk_with_replacement(k, y, std::move(tree), init, rng);
}

namespace {

WithoutReplacementResult crawl_without_replacement(const Graph& g, const GraphStepper& st,
                                                   std::span<const double> y, const SimConfig& cfg,
                                                   CounterRng& rng) {
  if (g.node_count() < cfg.sample_budget)
    throw ValidationError("graph has fewer nodes than the sample budget");
  if (!cfg.init.stationary && cfg.init.node >= g.node_count())
    throw ValidationError("fixed initial node is out of range");

  WithoutReplacementResult out;
  const auto gw = gen_gw_tree(cfg.offspring, GwStop::min_size(cfg.gw_target_size), rng());
  out.gw_discards = gw.discarded;
  const ReferralForest& plan = gw.tree;

  const NodeId seed_node = cfg.init.stationary ? st.stationary(rng) : cfg.init.node;
  if (g.unweighted_degree(seed_node) == 0 && plan.size() > 1)
    throw ValidationError("seed node " + std::to_string(g.label(seed_node)) + " is isolated");

  std::vector<NodeId> states{seed_node};
  std::vector<std::int64_t> parents{kNoParent};
  std::vector<TreeIndex> planned{plan.roots().front()};
  std::unordered_set<NodeId> sampled;
  sampled.reserve(cfg.sample_budget * 2);
  sampled.insert(seed_node);
  std::vector<NodeId> viable;

  for (std::size_t head = 0; head < states.size() && states.size() < cfg.sample_budget; ++head) {
    const auto kids = plan.children(planned[head]);
    if (kids.empty()) continue;
    viable.clear();
    for (const auto& nb : g.neighbors(states[head]))
      if (nb.node != states[head] && !sampled.contains(nb.node)) viable.push_back(nb.node);
    const std::size_t take = std::min(kids.size(), viable.size());
    for (std::size_t c = 0; c < take && states.size() < cfg.sample_budget; ++c) {
      // Partial Fisher-Yates: uniform draw without replacement.
      const std::size_t pick = c + static_cast<std::size_t>(rng.below(viable.size() - c));
      std::swap(viable[c], viable[pick]);
      states.push_back(viable[c]);
      parents.push_back(static_cast<std::int64_t>(head));
      planned.push_back(kids[c]);
      sampled.insert(viable[c]);
    }
  }

  out.budget_reached = states.size() == cfg.sample_budget;
  auto pruned = std::make_shared<const ReferralForest>(ReferralForest::from_parents(std::move(parents)));
  out.sample.states = std::move(states);
  observe(out.sample, y);
  out.sample.degrees.resize(out.sample.states.size());
  for (std::size_t t = 0; t < out.sample.states.size(); ++t)
    out.sample.degrees[t] = st.degree(out.sample.states[t], cfg.weighted_degrees);
  out.sample.tree = pruned;
  out.pruned = std::move(pruned);
  return out;
}

}  // namespace

WithoutReplacementResult walk_without_replacement(const Graph& g, std::span<const double> y,
                                                  const SimConfig& cfg, CounterRng& rng) {
  const GraphStepper st(g);
  return crawl_without_replacement(g, st, y, cfg, rng);
}

WithoutReplacementResult walk_without_replacement(const Graph& g, std::span<const double> y,
                                                  const SimConfig& cfg, std::uint64_t seed) {
  CounterRng rng(stream_key(seed, 0));
  return walk_without_replacement(g, y, cfg, rng);
}

std::uint64_t count_repeats(std::span<const NodeId> states) {
  std::vector<NodeId> sorted(states.begin(), states.end());
  std::sort(sorted.begin(), sorted.end());
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const std::uint64_t c = j - i;
    total += c * (c - 1);
    i = j;
  }
  return total;
}

std::uint64_t count_repeats(const WalkSample& ws) { return count_repeats(ws.states); }

JackknifeVariance jackknife_variance(std::span<const double> values) {
  JackknifeVariance out;
  const std::size_t r = values.size();
  out.count = r;
  if (r < 3) throw ValidationError("jackknife needs at least 3 replicates");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(r);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double rd = static_cast<double>(r);
  out.variance = ss / (rd - 1.0);
  // Leave-one-out variances: (ss - d_i^2 r / (r - 1)) / (r - 2).
  std::vector<double> loo(r);
  double loo_mean = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    const double d = values[i] - mean;
    loo[i] = (ss - d * d * rd / (rd - 1.0)) / (rd - 2.0);
    loo_mean += loo[i];
  }
  loo_mean /= rd;
  double spread = 0.0;
  for (double v : loo) spread += (v - loo_mean) * (v - loo_mean);
  out.se = std::sqrt((rd - 1.0) / rd * spread);
  return out;
}

namespace {

struct ReplicateOutcome {
  std::vector<double> mean_with, mean_without;  // per grid entry, NaN if too small
  std::vector<double> rn_with, rn_without;
};

// Prefix means and repeat counts along the breadth-first order of ws.tree.
void record_prefixes(const WalkSample& ws, std::span<const std::size_t> n_grid,
                     std::vector<double>& means, std::vector<double>& repeats) {
  means.assign(n_grid.size(), kMissing);
  repeats.assign(n_grid.size(), kMissing);
  const auto& order = ws.tree->bfs_order();
  std::unordered_map<NodeId, std::uint32_t> seen;
  seen.reserve(order.size() * 2);
  double sum = 0.0;
  std::uint64_t rn = 0;
  std::size_t k = 0;
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    const std::size_t target = n_grid[g];
    if (target > order.size()) break;
    for (; k < target; ++k) {
      const auto v = order[k];
      sum += ws.y[v];
      rn += 2 * static_cast<std::uint64_t>(seen[ws.states[v]]++);
    }
    means[g] = sum / static_cast<double>(target);
    repeats[g] = static_cast<double>(rn);
  }
}

// Var_pi(Y), or 0 when y is constant up to rounding.
double stationary_variance_of(std::span<const double> pi, std::span<const double> y) {
  double mu = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) {
    mu += pi[i] * y[i];
    m2 += pi[i] * y[i] * y[i];
  }
  double var = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) var += pi[i] * (y[i] - mu) * (y[i] - mu);
  return var > 1e-24 * std::max(1.0, m2) ? var : 0.0;
}

std::vector<DesignEffectRow> summarize(const std::vector<ReplicateOutcome>& reps,
                                       std::span<const std::size_t> n_grid, const SimConfig& cfg,
                                       double sigma2) {
  std::vector<DesignEffectRow> rows;
  std::vector<SampleMode> modes;
  if (cfg.mode != SampleMode::kWithoutReplacement) modes.push_back(SampleMode::kWithReplacement);
  if (cfg.mode != SampleMode::kWithReplacement) modes.push_back(SampleMode::kWithoutReplacement);
  for (std::size_t g = 0; g < n_grid.size(); ++g) {
    for (auto mode : modes) {
      const bool with = mode == SampleMode::kWithReplacement;
      std::vector<double> means, repeats;
      for (const auto& r : reps) {
        const double m = with ? r.mean_with[g] : r.mean_without[g];
        if (std::isnan(m)) continue;
        means.push_back(m);
        repeats.push_back(with ? r.rn_with[g] : r.rn_without[g]);
      }
      DesignEffectRow row;
      row.n = n_grid[g];
      row.mode = mode;
      row.replicates_used = means.size();
      if (means.size() >= 3) {
        const auto jk = jackknife_variance(means);
        const double iid = cfg.quarter_variance ? 0.25 / static_cast<double>(row.n)
                                                : sigma2 / static_cast<double>(row.n);
        row.de = jk.variance / iid;
        row.de_se = jk.se / iid;
        double mean_rn = 0.0;
        for (double v : repeats) mean_rn += v;
        mean_rn /= static_cast<double>(repeats.size());
        double ss = 0.0;
        for (double v : repeats) ss += (v - mean_rn) * (v - mean_rn);
        row.mean_rn = mean_rn;
        row.rn_se = std::sqrt(ss / (static_cast<double>(repeats.size()) - 1.0) /
                              static_cast<double>(repeats.size()));
      } else {
        row.de = row.de_se = row.mean_rn = row.rn_se = kMissing;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::shared_ptr<const ReferralForest> replicate_tree(const SimConfig& cfg, CounterRng& rng) {
  if (cfg.fixed_tree) return cfg.fixed_tree;
  auto gw = gen_gw_tree(cfg.offspring, GwStop::min_size(cfg.gw_target_size), rng());
  const std::size_t keep = std::min(cfg.sample_budget, gw.tree.size());
  return std::make_shared<const ReferralForest>(gw.tree.bfs_prefix(keep));
}

void check_grid(std::span<const std::size_t> n_grid, const SimConfig& cfg) {
  const std::size_t limit = cfg.fixed_tree ? cfg.fixed_tree->size() : cfg.sample_budget;
  for (auto n : n_grid) {
    if (n == 0) throw ValidationError("n grid entries must be positive");
    if (n > limit) throw ValidationError("n = " + std::to_string(n) + " exceeds the sample budget");
  }
  if (!std::is_sorted(n_grid.begin(), n_grid.end())) throw ValidationError("n grid must be increasing");
}

}  // namespace

std::vector<DesignEffectRow> mc_design_effect(const Graph& g, std::span<const double> y,
                                              const SimConfig& cfg,
                                              std::span<const std::size_t> n_grid) {
  cfg.validate();
  check_grid(n_grid, cfg);
  if (y.size() != g.node_count()) throw ValidationError("feature length does not match the graph");
  const GraphStepper st(g);
  std::vector<double> pi(g.node_count());
  for (NodeId i = 0; i < g.node_count(); ++i) pi[i] = g.degree(i) / g.total_degree();
  const double sigma2 = stationary_variance_of(pi, y);
  if (!cfg.quarter_variance && !(sigma2 > 0.0))
    throw NumericError("feature is constant under pi; the design effect is undefined");

  std::vector<ReplicateOutcome> reps(cfg.replicates);
  parallel_for(cfg.replicates, cfg.threads, [&](std::size_t r) {
    auto rng = make_stream(cfg.seed, r);
    auto& out = reps[r];
    if (cfg.mode == SampleMode::kWithReplacement) {
      auto tree = replicate_tree(cfg, rng);
      const auto ws = walk_graph(st, y, std::move(tree), cfg.init, rng, cfg.weighted_degrees);
      record_prefixes(ws, n_grid, out.mean_with, out.rn_with);
      return;
    }
    const auto crawl = crawl_without_replacement(g, st, y, cfg, rng);
    record_prefixes(crawl.sample, n_grid, out.mean_without, out.rn_without);
    if (cfg.mode == SampleMode::kBoth) {
      const auto ws = walk_graph(st, y, crawl.pruned, cfg.init, rng, cfg.weighted_degrees);
      record_prefixes(ws, n_grid, out.mean_with, out.rn_with);
    }
  });
  return summarize(reps, n_grid, cfg, sigma2);
}

std::vector<DesignEffectRow> mc_design_effect(const Kernel& k, std::span<const double> y,
                                              const SimConfig& cfg,
                                              std::span<const std::size_t> n_grid) {
  cfg.validate();
  check_grid(n_grid, cfg);
  if (cfg.mode != SampleMode::kWithReplacement)
    throw ValidationError("explicit kernels support sampling with replacement only");
  if (y.size() != k.size()) throw ValidationError("feature length does not match the kernel");
  std::vector<double> pi(k.stationary.data(), k.stationary.data() + k.stationary.size());
  const double sigma2 = stationary_variance_of(pi, y);
  if (!cfg.quarter_variance && !(sigma2 > 0.0))
    throw NumericError("feature is constant under pi; the design effect is undefined");

  std::vector<ReplicateOutcome> reps(cfg.replicates);
  parallel_for(cfg.replicates, cfg.threads, [&](std::size_t r) {
    auto rng = make_stream(cfg.seed, r);
    auto tree = replicate_tree(cfg, rng);
    const auto ws = walk_with_replacement(k, y, std::move(tree), cfg.init, rng);
    record_prefixes(ws, n_grid, reps[r].mean_with, reps[r].rn_with);
  });
  return summarize(reps, n_grid, cfg, sigma2);
}

std::vector<RepeatRow> repeat_rate_experiment(const Graph& g, const SimConfig& cfg,
                                              std::span<const std::size_t> n_grid) {
  SimConfig with = cfg;
  with.mode = SampleMode::kWithReplacement;
  with.quarter_variance = true;  // the feature is a placeholder here
  const std::vector<double> zeros(g.node_count(), 0.0);
  const auto de_rows = mc_design_effect(g, zeros, with, n_grid);
  const double max_deg = static_cast<double>(g.max_unweighted_degree());
  std::vector<RepeatRow> rows;
  for (const auto& r : de_rows) {
    RepeatRow row;
    row.n = r.n;
    row.mean_rn = r.mean_rn;
    row.rn_se = r.rn_se;
    const double n = static_cast<double>(r.n);
    row.lower_bound = n / max_deg;
    row.n_over_sqrt_population = n / std::sqrt(static_cast<double>(g.node_count()));
    row.rn_over_nlogn = r.n > 1 ? r.mean_rn / (n * std::log(n)) : kMissing;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace netsample
