#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace netsample {

using NodeId = std::uint32_t;
using Label = std::int64_t;

struct Neighbor {
  NodeId node;
  double weight;
};

struct WeightedEdge {
  NodeId u;
  NodeId v;
  double weight;
};

/// Undirected weighted graph over dense ids 0..N-1 in compressed-row form.
///
/// Every undirected edge {u,v}, u != v, is stored once in each endpoint's row
/// with bit-identical weights; a self-loop is stored once in its row. Rows are
/// sorted by neighbor id. Original labels are retained for I/O only.
class Graph {
 public:
  Graph() = default;

  /// Builds from undirected edges, each listed once. Parallel edges must be
  /// merged by the caller. Throws ValidationError on a non-positive weight or
  /// an out-of-range endpoint.
  static Graph from_edges(std::size_t node_count, std::span<const WeightedEdge> edges,
                          std::vector<Label> labels = {});

  std::size_t node_count() const { return labels_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  bool empty() const { return labels_.empty(); }

  std::span<const Neighbor> neighbors(NodeId i) const {
    return {adjacency_.data() + offsets_[i], adjacency_.data() + offsets_[i + 1]};
  }

  /// Sum of incident edge weights.
  double degree(NodeId i) const { return degree_[i]; }
  /// Number of distinct neighbors other than i itself.
  std::size_t unweighted_degree(NodeId i) const { return unweighted_degree_[i]; }
  double total_degree() const { return total_degree_; }
  std::size_t max_unweighted_degree() const;

  const std::vector<Label>& labels() const { return labels_; }
  Label label(NodeId i) const { return labels_[i]; }

  /// Weight of edge {i,j}, 0 if absent.
  double weight(NodeId i, NodeId j) const;

  /// Exact check that (i,j,w) is stored iff (j,i,w) is.
  bool is_symmetric() const;

  /// Induced subgraph on nodes with keep[i] set; ids are re-densified in
  /// increasing order and labels carried over.
  Graph induced(const std::vector<bool>& keep) const;

  /// Component id per node (components numbered by smallest member).
  std::vector<std::uint32_t> component_ids(std::size_t* count = nullptr) const;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adjacency_;
  std::vector<double> degree_;
  std::vector<std::size_t> unweighted_degree_;
  std::vector<Label> labels_;
  std::size_t edge_count_ = 0;
  double total_degree_ = 0.0;
};

/// A real-valued characteristic y(i) on the nodes of a graph.
struct NodeFeature {
  std::vector<double> values;
  std::string name;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
};

/// Reads a whitespace-separated `u v [w]` edge list (`#` comments).
///
/// Labels are nonnegative integers, remapped to dense ids in ascending label
/// order. Repeated declarations in the same direction sum; if an edge is
/// declared in both directions the two directional totals must agree exactly
/// and count once.
Graph load_edge_list(const std::filesystem::path& path);
Graph parse_edge_list(const std::string& text);

/// Writes `u v w` lines (original labels, 17 significant digits), one per
/// undirected edge.
void write_edge_list(const Graph& g, const std::filesystem::path& path);

/// Peels nodes of unweighted degree < k until none remain.
Graph k_core(const Graph& g, std::size_t k);

/// Induced subgraph on the largest connected component. Ties go to the
/// component whose smallest id is smallest. Throws on an empty graph.
Graph largest_connected_component(const Graph& g);

/// Same nodes and labels, self-loops dropped, every remaining edge weight 1.
Graph unit_simple_graph(const Graph& g);

/// unit_simple_graph, then the k-core, then its largest connected component.
Graph prepare_network(const Graph& g, std::size_t k = 2);

/// Reads `label,value` lines (optional header) and aligns them with g.
NodeFeature load_node_feature(const std::filesystem::path& path, const Graph& g);
NodeFeature parse_node_feature(const std::string& text, const Graph& g,
                               std::string name = "y");

}  // namespace netsample
