#pragma once

#include <memory>
#include <span>
#include <vector>

#include "netsample/graph.hpp"
#include "netsample/tree.hpp"

namespace netsample {

/// A realized tree-indexed sample: X_tau, Y_tau = y(X_tau), deg(X_tau).
struct WalkSample {
  std::vector<NodeId> states;
  std::vector<double> y;
  std::vector<double> degrees;  // empty when the kernel has no graph
  std::shared_ptr<const ReferralForest> tree;

  std::size_t size() const { return states.size(); }
};

/// Plain average of Y over the sample.
double sample_mean(const WalkSample& ws);
double sample_mean(std::span<const double> y);

/// sum(Y / deg) / sum(1 / deg). Throws ValidationError on a zero degree.
double vh_estimator(const WalkSample& ws);

/// Volz-Heckathorn with the normalizer of pi ∝ deg supplied:
/// (1/n) sum Y * total_degree / (deg * N). Equals ht_estimator for the
/// simple random walk.
double vh_estimator_known_normalizer(const WalkSample& ws, double total_degree,
                                     std::size_t population);

/// (1/n) sum Y / (pi_X N).
double ht_estimator(const WalkSample& ws, std::span<const double> pi, std::size_t population);

/// y^pi(i) = y(i) / (pi_i N).
NodeFeature pi_transform(const NodeFeature& y, std::span<const double> pi, std::size_t population);

}  // namespace netsample
