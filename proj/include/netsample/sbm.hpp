#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "netsample/graph.hpp"

namespace netsample {

/// Stochastic blockmodel parameters: block probabilities, symmetric
/// connection-probability matrix psi, population size.
struct SbmSpec {
  std::vector<double> block_probs;
  Eigen::MatrixXd psi;
  std::size_t node_count = 0;

  std::size_t block_count() const { return block_probs.size(); }
  /// Throws ValidationError if psi is asymmetric or out of [0,1], or the
  /// block probabilities are negative or do not sum to 1 within 1e-12.
  void validate() const;
};

/// Block-level referral kernel of the infinite-population limit.
struct BlockKernel {
  Eigen::MatrixXd transition;     // row-stochastic B
  Eigen::VectorXd stationary;     // block_pi, B reversible w.r.t. it
};

struct SbmSample {
  Graph graph;
  std::vector<std::uint32_t> blocks;  // block id per node
};

/// Fixed block sizes round(pi_k * N); the rounding remainder goes to the
/// largest block (lowest index on ties). Nodes are laid out block by block.
std::vector<std::size_t> sbm_block_sizes(const SbmSpec& spec);

/// Draws each pair i<j independently with probability psi[b(i), b(j)], no
/// self-loops. Pairs are visited with geometric skips, so the cost is linear
/// in the number of edges. Reproducible for a given seed.
SbmSample sample_sbm(const SbmSpec& spec, std::uint64_t seed);

/// B_uv = pi_v psi_uv / sum_w pi_w psi_uw, with stationary distribution
/// proportional to pi_u sum_w pi_w psi_uw.
BlockKernel block_transition(const SbmSpec& spec);

struct TwoBlockParams {
  double p;  // extra within-block probability (within = p + r)
  double r;  // between-block probability
};

/// Solves r N + p N / 2 = expected_degree and 1 / (2 r / p + 1) = lambda2.
/// Throws ValidationError when r <= 0 or p + r > 1.
TwoBlockParams two_block_params(std::size_t node_count, double expected_degree,
                                double lambda2);

/// Balanced two-block spec with psi = [[p+r, r], [r, p+r]].
SbmSpec two_block_spec(std::size_t node_count, const TwoBlockParams& params);

}  // namespace netsample
