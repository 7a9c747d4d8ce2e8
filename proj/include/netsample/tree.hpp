#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "netsample/rng.hpp"

namespace netsample {

using TreeIndex = std::uint32_t;
inline constexpr std::int64_t kNoParent = -1;

/// Rooted referral tree or forest in parent-array form.
///
/// Node indices are dense 0..n-1; parent(i) == kNoParent marks a root.
/// Children lists are kept in increasing index order and the breadth-first
/// order visits roots in increasing index order, then each generation's
/// children in the order their parents were visited.
class ReferralForest {
 public:
  ReferralForest() = default;

  /// Validates the parent array (range, acyclicity, at least one root).
  static ReferralForest from_parents(std::vector<std::int64_t> parents,
                                     std::vector<std::string> labels = {});

  std::size_t size() const { return parent_.size(); }
  std::int64_t parent(TreeIndex i) const { return parent_[i]; }
  const std::vector<std::int64_t>& parents() const { return parent_; }
  const std::vector<TreeIndex>& roots() const { return roots_; }
  bool is_single_tree() const { return roots_.size() == 1; }
  std::span<const TreeIndex> children(TreeIndex i) const {
    return {child_list_.data() + child_offset_[i], child_list_.data() + child_offset_[i + 1]};
  }
  /// Distance to the node's own root.
  std::uint32_t depth(TreeIndex i) const { return depth_[i]; }
  std::uint32_t height() const { return height_; }
  const std::vector<TreeIndex>& bfs_order() const { return bfs_; }
  /// Root index of the component containing i.
  TreeIndex root_of(TreeIndex i) const { return root_of_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// True when index order coincides with breadth-first order.
  bool is_bfs_indexed() const;

  /// Induced forest on the first n nodes of breadth-first order, reindexed
  /// in that order.
  ReferralForest bfs_prefix(std::size_t n) const;

  /// Induced forest on nodes with depth <= h, reindexed breadth-first.
  ReferralForest truncated(std::uint32_t h) const;

  /// Generation sizes |D_k(0)| summed over roots, k = 0..height.
  std::vector<std::size_t> generation_sizes() const;

 private:
  std::vector<std::int64_t> parent_;
  std::vector<std::string> labels_;
  std::vector<TreeIndex> roots_;
  std::vector<std::size_t> child_offset_;
  std::vector<TreeIndex> child_list_;
  std::vector<std::uint32_t> depth_;
  std::vector<TreeIndex> root_of_;
  std::vector<TreeIndex> bfs_;
  std::uint32_t height_ = 0;
};

/// Reads `node,parent` CSV (optional `node,parent` header). Labels are
/// arbitrary strings; an empty parent or -1 marks a root. Throws
/// ValidationError on cycles (naming one), unknown parents, or duplicates.
ReferralForest load_tree(const std::filesystem::path& path);
ReferralForest parse_tree(const std::string& text);
void write_tree(const ReferralForest& f, const std::filesystem::path& path);

/// Complete m-ary tree with generations 0..height, indexed breadth-first.
ReferralForest gen_m_tree(std::uint32_t m, std::uint32_t height,
                          std::size_t node_cap = 50'000'000);

/// Offspring law of a Galton-Watson tree.
struct OffspringSpec {
  enum class Kind { kConstant, kShiftedBinomial, kPmf };
  Kind kind = Kind::kConstant;
  std::uint32_t constant = 0;
  std::uint32_t shift = 0;       // shifted binomial: shift + Binomial(trials, p)
  std::uint32_t trials = 0;
  double p = 0.0;
  std::vector<double> pmf;       // P(xi = k), k = 0..K

  static OffspringSpec fixed(std::uint32_t m);
  static OffspringSpec shifted_binomial(std::uint32_t shift, std::uint32_t trials, double p);
  static OffspringSpec from_pmf(std::vector<double> pmf);
  /// "const:2", "binom:1,2,0.5" (shift,trials,p) or "pmf:0.25,0.5,0.25".
  static OffspringSpec parse(const std::string& text);
  std::string to_string() const;

  double mean() const;
  std::uint32_t draw(CounterRng& rng) const;
};

struct GwStop {
  enum class Kind { kHeight, kMinSize };
  Kind kind = Kind::kHeight;
  std::size_t value = 0;

  static GwStop height(std::size_t h) { return {Kind::kHeight, h}; }
  static GwStop min_size(std::size_t s) { return {Kind::kMinSize, s}; }
};

struct GwTree {
  ReferralForest tree;
  std::size_t discarded = 0;  // extinct attempts thrown away under min_size
};

/// Galton-Watson tree grown breadth-first, one offspring draw per node.
///
/// kHeight: every node at depth < h draws offspring; the tree may die out
/// early. kMinSize: growth stops as soon as the tree holds exactly s nodes
/// (the node being expanded keeps only the children that fit); a tree that
/// dies out first is discarded and attempt a+1 uses stream (seed, a+1).
/// More than 10^6 discards throws NumericError.
GwTree gen_gw_tree(const OffspringSpec& offspring, const GwStop& stop, std::uint64_t seed,
                   std::size_t node_cap = 50'000'000);

/// Exact law of D = d(I, J) for I, J uniform with replacement.
struct DistanceSpectrum {
  std::vector<std::uint64_t> counts;  // counts[k] = #ordered pairs at distance k
  std::uint64_t infinite_pairs = 0;   // ordered pairs in different components
  std::uint64_t n = 0;

  /// sum_k k c_k / (n^2 - infinite_pairs).
  double mean_finite_distance() const;
};

/// Per-component lowest-common-ancestor aggregation: each node merges its
/// children's depth histograms, inheriting the deepest one and convolving
/// the rest in. O(n h) time.
DistanceSpectrum distance_spectrum(const ReferralForest& f);

/// G(z) = E z^D = sum_k c_k z^k / n^2 with z^inf = 0. At z = 1 this is the
/// same-component pair fraction. Throws ValidationError for |z| > 1.
double g_eval(const DistanceSpectrum& ds, double z);

/// Growth and balance diagnostics.
struct BalanceDiagnostics {
  std::uint32_t height = 0;
  double mean_depth = 0.0;
  std::uint32_t diameter = 0;
  std::vector<std::size_t> generation_sizes;
  double growth_rate = 0.0;                // the m the ratios are taken against
  std::vector<double> growth_ratios;       // |D_k(0)| / m^k
  std::vector<double> c_tau;               // per node: max_n |D_n(tau)| / m^(n - |tau|)
  std::vector<double> c_tau_second_moment; // per generation h: mean of c_tau^2 over |tau| = h
  double max_c_tau_second_moment = 0.0;
  std::size_t node_count = 0;
};

/// Stats for a forest; depths are measured to each node's own root and the
/// diameter is the largest finite distance.
BalanceDiagnostics tree_stats(const ReferralForest& f, double m);

struct GLowerBounds {
  double g = 0.0;
  double z_mean_distance = 0.0;   // z^{E D}
  double z_diameter = 0.0;        // z^{d(T)}
  double z_two_mean_depth = 0.0;  // z^{2 E|J|}
  double z_two_height = 0.0;      // z^{2 h}
  double inverse_n = 0.0;         // 1 / n
  bool chain_holds = false;       // G >= z^ED >= max >= min >= z^2h, and G >= 1/n
};

/// Lower-bound chain for a single tree; 0 < z < 1.
GLowerBounds g_lower_bounds(const BalanceDiagnostics& stats, const DistanceSpectrum& ds, double z);

enum class Regime { kSubCritical, kCritical, kSuperCritical };
const char* to_string(Regime r);

struct ThresholdParams {
  double m = 0.0;
  double lambda2 = 0.0;
  double beta = 0.0;   // lambda2^-2
  double alpha = 0.0;  // log_m lambda2^-2
  Regime regime = Regime::kSubCritical;
  double predicted_exponent = 0.0;  // growth exponent of the design effect
};

/// Requires m > 1 and 0 < lambda2 < 1. Critical when |m - beta| <= 1e-9.
ThresholdParams threshold_params(double m, double lambda2);

}  // namespace netsample
