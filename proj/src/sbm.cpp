#include "netsample/sbm.hpp"

#include <cmath>
#include <string>

#include "netsample/errors.hpp"
#include "netsample/rng.hpp"

namespace netsample {

void SbmSpec::validate() const {
  const auto k = block_count();
  if (k == 0) throw ValidationError("SBM needs at least one block");
  if (psi.rows() != static_cast<Eigen::Index>(k) || psi.cols() != static_cast<Eigen::Index>(k))
    throw ValidationError("psi must be K x K with K = number of block probabilities");
  double total = 0.0;
  for (double p : block_probs) {
    if (!(p >= 0.0)) throw ValidationError("block probabilities must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw ValidationError("block probabilities must sum to 1 (got " + std::to_string(total) + ")");
  for (Eigen::Index u = 0; u < psi.rows(); ++u) {
    for (Eigen::Index v = 0; v < psi.cols(); ++v) {
      if (!(psi(u, v) >= 0.0 && psi(u, v) <= 1.0))
        throw ValidationError("psi entries must lie in [0,1]");
      if (psi(u, v) != psi(v, u)) throw ValidationError("psi must be symmetric");
    }
  }
  if (node_count < k) throw ValidationError("SBM needs N >= K");
}

std::vector<std::size_t> sbm_block_sizes(const SbmSpec& spec) {
  const auto k = spec.block_count();
  std::vector<std::size_t> sizes(k);
  std::size_t assigned = 0;
  std::size_t largest = 0;
  for (std::size_t b = 0; b < k; ++b) {
    sizes[b] = static_cast<std::size_t>(std::llround(spec.block_probs[b] * spec.node_count));
    assigned += sizes[b];
    if (spec.block_probs[b] > spec.block_probs[largest]) largest = b;
  }
  // Rounding can over- or under-shoot by a few nodes; settle it on the
  // largest block.
  const auto n = static_cast<std::int64_t>(spec.node_count);
  const auto fix = n - static_cast<std::int64_t>(assigned);
  const auto adjusted = static_cast<std::int64_t>(sizes[largest]) + fix;
  if (adjusted < 0) throw ValidationError("block size rounding failed");
  sizes[largest] = static_cast<std::size_t>(adjusted);
  return sizes;
}

namespace {

// Visits indices 0..count-1 keeping each with probability p, using geometric
// gaps so the cost is proportional to the number kept.
template <typename Emit>
void bernoulli_skip(std::uint64_t count, double p, CounterRng& rng, Emit&& emit) {
  if (p <= 0.0 || count == 0) return;
  if (p >= 1.0) {
    for (std::uint64_t i = 0; i < count; ++i) emit(i);
    return;
  }
  const double log_q = std::log1p(-p);
  std::uint64_t i = 0;
  for (;;) {
    const double gap = std::floor(std::log(rng.uniform_pos()) / log_q);
    if (gap >= static_cast<double>(count - i)) return;
    i += static_cast<std::uint64_t>(gap);
    emit(i);
    if (++i >= count) return;
  }
}

}  // namespace

SbmSample sample_sbm(const SbmSpec& spec, std::uint64_t seed) {
  spec.validate();
  const auto sizes = sbm_block_sizes(spec);
  const auto k = spec.block_count();
  std::vector<std::size_t> start(k + 1, 0);
  for (std::size_t b = 0; b < k; ++b) start[b + 1] = start[b] + sizes[b];

  SbmSample out;
  out.blocks.resize(spec.node_count);
  for (std::size_t b = 0; b < k; ++b)
    for (std::size_t i = start[b]; i < start[b + 1]; ++i) out.blocks[i] = static_cast<std::uint32_t>(b);

  std::vector<WeightedEdge> edges;
  std::uint64_t stream = 0;
  for (std::size_t u = 0; u < k; ++u) {
    for (std::size_t v = u; v < k; ++v, ++stream) {
      auto rng = make_stream(seed, stream);
      const double p = spec.psi(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v));
      if (u == v) {
        // Pairs i<j inside block u, enumerated row-major over the strict
        // upper triangle.
        const std::uint64_t m = sizes[u];
        const std::uint64_t pairs = m * (m - (m > 0 ? 1 : 0)) / 2;
        std::uint64_t row = 0, row_begin = 0;
        bernoulli_skip(pairs, p, rng, [&](std::uint64_t idx) {
          while (idx >= row_begin + (m - 1 - row)) {
            row_begin += m - 1 - row;
            ++row;
          }
          const std::uint64_t col = row + 1 + (idx - row_begin);
          edges.push_back({static_cast<NodeId>(start[u] + row), static_cast<NodeId>(start[u] + col), 1.0});
        });
      } else {
        const std::uint64_t cols = sizes[v];
        bernoulli_skip(static_cast<std::uint64_t>(sizes[u]) * cols, p, rng, [&](std::uint64_t idx) {
          edges.push_back({static_cast<NodeId>(start[u] + idx / cols),
                           static_cast<NodeId>(start[v] + idx % cols), 1.0});
        });
      }
    }
  }
  out.graph = Graph::from_edges(spec.node_count, edges);
  return out;
}

BlockKernel block_transition(const SbmSpec& spec) {
  const auto k = static_cast<Eigen::Index>(spec.block_count());
  BlockKernel out;
  out.transition.resize(k, k);
  out.stationary.resize(k);
  for (Eigen::Index u = 0; u < k; ++u) {
    double row = 0.0;
    for (Eigen::Index w = 0; w < k; ++w) row += spec.block_probs[static_cast<std::size_t>(w)] * spec.psi(u, w);
    if (!(row > 0.0))
      throw ValidationError("block " + std::to_string(u) + " has no expected edges");
    for (Eigen::Index v = 0; v < k; ++v)
      out.transition(u, v) = spec.block_probs[static_cast<std::size_t>(v)] * spec.psi(u, v) / row;
    out.stationary(u) = spec.block_probs[static_cast<std::size_t>(u)] * row;
  }
  out.stationary /= out.stationary.sum();
  return out;
}

TwoBlockParams two_block_params(std::size_t node_count, double expected_degree, double lambda2) {
  if (node_count == 0) throw ValidationError("N must be positive");
  if (!(expected_degree > 0.0)) throw ValidationError("expected degree must be positive");
  if (!(lambda2 > 0.0 && lambda2 <= 1.0))
    throw ValidationError("lambda2 target must lie in (0,1)");
  const double n = static_cast<double>(node_count);
  const double ratio = (1.0 / lambda2 - 1.0) / 2.0;  // r / p
  const double p = expected_degree / (n * (ratio + 0.5));
  const double r = ratio * p;
  if (!(r > 0.0))
    throw ValidationError("infeasible target: between-block probability r must be > 0 "
                          "(lambda2 = 1 disconnects the blocks in expectation)");
  if (p + r > 1.0)
    throw ValidationError("infeasible target: within-block probability p + r = " +
                          std::to_string(p + r) + " exceeds 1");
  return {p, r};
}

SbmSpec two_block_spec(std::size_t node_count, const TwoBlockParams& params) {
  SbmSpec spec;
  spec.block_probs = {0.5, 0.5};
  spec.psi.resize(2, 2);
  spec.psi << params.p + params.r, params.r, params.r, params.p + params.r;
  spec.node_count = node_count;
  return spec;
}

}  // namespace netsample
