#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netsample/estimators.hpp"
#include "netsample/graph.hpp"
#include "netsample/rng.hpp"
#include "netsample/spectral.hpp"
#include "netsample/tree.hpp"

namespace netsample {

/// How roots of the referral forest are placed on the graph.
struct WalkInit {
  bool stationary = true;
  NodeId node = 0;

  static WalkInit from_stationary() { return {}; }
  static WalkInit fixed(NodeId node) { return {false, node}; }
};

enum class SampleMode { kWithReplacement, kWithoutReplacement, kBoth };
const char* to_string(SampleMode mode);
SampleMode parse_sample_mode(const std::string& text);

struct SimConfig {
  std::size_t replicates = 1000;
  std::uint64_t seed = 1;
  WalkInit init;
  SampleMode mode = SampleMode::kWithReplacement;
  std::size_t sample_budget = 500;
  std::size_t gw_target_size = 2000;
  OffspringSpec offspring = OffspringSpec::shifted_binomial(1, 2, 0.5);
  /// When set, every replicate walks this tree instead of drawing a GW tree
  /// (with-replacement mode only).
  std::shared_ptr<const ReferralForest> fixed_tree;
  /// Degree used by the VH estimator: weighted (sum of weights) or contact count.
  bool weighted_degrees = false;
  /// Use (4n)^-1 as the iid variance (binary balanced feature) instead of
  /// Var_pi(Y) / n.
  bool quarter_variance = false;
  unsigned threads = 0;

  void validate() const;
};

/// (T,P)-walk: roots drawn from `init`, each child drawn from its parent's
/// row, nodes visited in the forest's breadth-first order.
WalkSample walk_with_replacement(const Graph& g, std::span<const double> y,
                                 std::shared_ptr<const ReferralForest> tree, const WalkInit& init,
                                 CounterRng& rng, bool weighted_degrees = false);
WalkSample walk_with_replacement(const Graph& g, std::span<const double> y,
                                 std::shared_ptr<const ReferralForest> tree, const WalkInit& init,
                                 std::uint64_t seed);
WalkSample walk_with_replacement(const Kernel& k, std::span<const double> y,
                                 std::shared_ptr<const ReferralForest> tree, const WalkInit& init,
                                 CounterRng& rng);
WalkSample walk_with_replacement(const Kernel& k, std::span<const double> y,
                                 std::shared_ptr<const ReferralForest> tree, const WalkInit& init,
                                 std::uint64_t seed);

struct WithoutReplacementResult {
  WalkSample sample;                            // sample.tree is the pruned tree
  std::shared_ptr<const ReferralForest> pruned;
  bool budget_reached = false;
  std::size_t gw_discards = 0;
};

/// Crawl without replacement over a GW tree grown to cfg.gw_target_size.
///
/// The seed comes from cfg.init. Planned nodes are filled breadth-first; each
/// referral is drawn uniformly from the parent's neighbors that have not yet
/// been sampled anywhere in this realization. A node with fewer viable
/// neighbors than planned children refers all of them and its remaining
/// planned children (with their descendants) are pruned. Filling stops at
/// cfg.sample_budget nodes. The pruned tree is indexed in breadth-first
/// order, so sample index == tree index.
WithoutReplacementResult walk_without_replacement(const Graph& g, std::span<const double> y,
                                                  const SimConfig& cfg, CounterRng& rng);
WithoutReplacementResult walk_without_replacement(const Graph& g, std::span<const double> y,
                                                  const SimConfig& cfg, std::uint64_t seed);

/// |{(sigma, tau): sigma != tau, X_sigma = X_tau}| (ordered pairs).
std::uint64_t count_repeats(const WalkSample& ws);
std::uint64_t count_repeats(std::span<const NodeId> states);

/// Sample variance over replicates with a leave-one-out jackknife SE.
struct JackknifeVariance {
  double variance = 0.0;
  double se = 0.0;
  std::size_t count = 0;
};
JackknifeVariance jackknife_variance(std::span<const double> values);

struct DesignEffectRow {
  std::size_t n = 0;
  SampleMode mode = SampleMode::kWithReplacement;
  double de = 0.0;
  double de_se = 0.0;
  double mean_rn = 0.0;
  double rn_se = 0.0;
  std::size_t replicates_used = 0;
};

struct RepeatRow {
  std::size_t n = 0;
  double mean_rn = 0.0;
  double rn_se = 0.0;
  double lower_bound = 0.0;     // n / max degree
  double n_over_sqrt_population = 0.0;
  double rn_over_nlogn = 0.0;
};

/// Monte Carlo design effect of the sample mean over breadth-first prefixes.
///
/// For every n in n_grid: Var over replicates of the mean of the first n
/// sampled nodes, divided by Var_pi(Y) / n (or (4n)^-1 with
/// cfg.quarter_variance), with a jackknife SE. In kBoth mode each replicate
/// runs the crawl without replacement and then the (T,P)-walk on the pruned
/// tree it produced. Replicates whose tree is smaller than n are skipped for
/// that n. Results depend only on (seed, replicate index).
std::vector<DesignEffectRow> mc_design_effect(const Graph& g, std::span<const double> y,
                                              const SimConfig& cfg,
                                              std::span<const std::size_t> n_grid);
/// Same for an explicit kernel; requires cfg.fixed_tree or a GW tree, with
/// replacement only.
std::vector<DesignEffectRow> mc_design_effect(const Kernel& k, std::span<const double> y,
                                              const SimConfig& cfg,
                                              std::span<const std::size_t> n_grid);

/// Expected repeat count E R_n of the (T,P)-walk by Monte Carlo, against the
/// n / max-degree lower bound and the n log n trend.
std::vector<RepeatRow> repeat_rate_experiment(const Graph& g, const SimConfig& cfg,
                                              std::span<const std::size_t> n_grid);

}  // namespace netsample
