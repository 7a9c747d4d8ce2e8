#include "netsample/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "netsample/errors.hpp"
#include "netsample/io.hpp"

namespace netsample {

Graph Graph::from_edges(std::size_t node_count, std::span<const WeightedEdge> edges,
                        std::vector<Label> labels) {
  if (labels.empty()) {
    labels.resize(node_count);
    std::iota(labels.begin(), labels.end(), Label{0});
  }
  if (labels.size() != node_count)
    throw ValidationError("label count does not match node count");

  Graph g;
  g.labels_ = std::move(labels);
  std::vector<std::size_t> row_len(node_count, 0);
  for (const auto& e : edges) {
    if (e.u >= node_count || e.v >= node_count)
      throw ValidationError("edge endpoint out of range");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight))
      throw ValidationError("edge weight must be positive and finite");
    ++row_len[e.u];
    if (e.u != e.v) ++row_len[e.v];
  }
  g.offsets_.assign(node_count + 1, 0);
  for (std::size_t i = 0; i < node_count; ++i) g.offsets_[i + 1] = g.offsets_[i] + row_len[i];
  g.adjacency_.resize(g.offsets_.back());
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& e : edges) {
    g.adjacency_[cursor[e.u]++] = {e.v, e.weight};
    if (e.u != e.v) g.adjacency_[cursor[e.v]++] = {e.u, e.weight};
  }
  g.degree_.assign(node_count, 0.0);
  g.unweighted_degree_.assign(node_count, 0);
  for (std::size_t i = 0; i < node_count; ++i) {
    auto* b = g.adjacency_.data() + g.offsets_[i];
    auto* e = g.adjacency_.data() + g.offsets_[i + 1];
    std::sort(b, e, [](const Neighbor& a, const Neighbor& c) { return a.node < c.node; });
    for (auto* it = b; it != e; ++it) {
      if (it != b && (it - 1)->node == it->node)
        throw ValidationError("duplicate edge in from_edges; merge parallel edges first");
      g.degree_[i] += it->weight;
      if (it->node != i) ++g.unweighted_degree_[i];
    }
    g.total_degree_ += g.degree_[i];
  }
  g.edge_count_ = edges.size();
  return g;
}

std::size_t Graph::max_unweighted_degree() const {
  std::size_t best = 0;
  for (auto d : unweighted_degree_) best = std::max(best, d);
  return best;
}

double Graph::weight(NodeId i, NodeId j) const {
  const auto row = neighbors(i);
  const auto it = std::lower_bound(row.begin(), row.end(), j,
                                   [](const Neighbor& a, NodeId key) { return a.node < key; });
  return (it != row.end() && it->node == j) ? it->weight : 0.0;
}

bool Graph::is_symmetric() const {
  for (NodeId i = 0; i < node_count(); ++i)
    for (const auto& nb : neighbors(i))
      if (weight(nb.node, i) != nb.weight) return false;
  return true;
}

Graph Graph::induced(const std::vector<bool>& keep) const {
  std::vector<NodeId> remap(node_count(), 0);
  std::vector<Label> new_labels;
  NodeId next = 0;
  for (NodeId i = 0; i < node_count(); ++i) {
    if (keep[i]) {
      remap[i] = next++;
      new_labels.push_back(labels_[i]);
    }
  }
  std::vector<WeightedEdge> edges;
  for (NodeId i = 0; i < node_count(); ++i) {
    if (!keep[i]) continue;
    for (const auto& nb : neighbors(i))
      if (nb.node >= i && keep[nb.node]) edges.push_back({remap[i], remap[nb.node], nb.weight});
  }
  return from_edges(next, edges, std::move(new_labels));
}

std::vector<std::uint32_t> Graph::component_ids(std::size_t* count) const {
  constexpr auto kUnset = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> comp(node_count(), kUnset);
  std::uint32_t n_comp = 0;
  std::vector<NodeId> stack;
  for (NodeId s = 0; s < node_count(); ++s) {
    if (comp[s] != kUnset) continue;
    comp[s] = n_comp;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeId v = stack.back();
      stack.pop_back();
      for (const auto& nb : neighbors(v)) {
        if (comp[nb.node] == kUnset) {
          comp[nb.node] = n_comp;
          stack.push_back(nb.node);
        }
      }
    }
    ++n_comp;
  }
  if (count) *count = n_comp;
  return comp;
}

Graph parse_edge_list(const std::string& text) {
  std::map<std::pair<Label, Label>, double> directed;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() < 2 || tok.size() > 3)
      throw ParseError("expected 'u v [w]', got " + std::to_string(tok.size()) + " fields",
                       line_no);
    Label u = 0, v = 0;
    double w = 1.0;
    try {
      u = parse_int(tok[0]);
      v = parse_int(tok[1]);
      if (tok.size() == 3) w = parse_double(tok[2]);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line_no);
    }
    if (u < 0 || v < 0) throw ParseError("node labels must be nonnegative", line_no);
    if (!(w > 0.0) || !std::isfinite(w))
      throw ValidationError("line " + std::to_string(line_no) +
                            ": edge weight must be positive, got " + tok[2]);
    directed[{u, v}] += w;
  }

  std::map<Label, NodeId> ids;
  for (const auto& [key, w] : directed) {
    ids.emplace(key.first, 0);
    ids.emplace(key.second, 0);
  }
  std::vector<Label> labels;
  labels.reserve(ids.size());
  for (auto& [label, id] : ids) {
    id = static_cast<NodeId>(labels.size());
    labels.push_back(label);
  }

  std::vector<WeightedEdge> edges;
  for (const auto& [key, w] : directed) {
    const auto [u, v] = key;
    if (u > v) {
      // Reverse-only declarations are handled here; pairs seen both ways were
      // taken when visiting (v,u).
      if (directed.find({v, u}) == directed.end()) edges.push_back({ids[v], ids[u], w});
      continue;
    }
    if (u < v) {
      if (auto rev = directed.find({v, u}); rev != directed.end() && rev->second != w) {
        throw ValidationError("edge " + std::to_string(u) + "-" + std::to_string(v) +
                              " declared in both directions with different weights (" +
                              fmt_double(w) + " vs " + fmt_double(rev->second) + ")");
      }
    }
    edges.push_back({ids[u], ids[v], w});
  }
  const std::size_t n = labels.size();
  return Graph::from_edges(n, edges, std::move(labels));
}

Graph load_edge_list(const std::filesystem::path& path) {
  return parse_edge_list(read_text_file(path));
}

void write_edge_list(const Graph& g, const std::filesystem::path& path) {
  std::string out;
  for (NodeId i = 0; i < g.node_count(); ++i) {
    for (const auto& nb : g.neighbors(i)) {
      if (nb.node < i) continue;
      out += std::to_string(g.label(i));
      out += ' ';
      out += std::to_string(g.label(nb.node));
      out += ' ';
      out += fmt_double(nb.weight);
      out += '\n';
    }
  }
  write_text_file(path, out);
}

Graph k_core(const Graph& g, std::size_t k) {
  if (k == 0) throw ValidationError("k_core requires k >= 1");
  const std::size_t n = g.node_count();
  std::vector<std::size_t> deg(n);
  std::vector<bool> keep(n, true);
  std::vector<NodeId> queue;
  for (NodeId i = 0; i < n; ++i) {
    deg[i] = g.unweighted_degree(i);
    if (deg[i] < k) {
      keep[i] = false;
      queue.push_back(i);
    }
  }
  while (!queue.empty()) {
    const NodeId v = queue.back();
    queue.pop_back();
    for (const auto& nb : g.neighbors(v)) {
      if (nb.node == v || !keep[nb.node]) continue;
      if (--deg[nb.node] < k) {
        keep[nb.node] = false;
        queue.push_back(nb.node);
      }
    }
  }
  return g.induced(keep);
}

Graph largest_connected_component(const Graph& g) {
  if (g.empty()) throw ValidationError("largest_connected_component of an empty graph");
  std::size_t n_comp = 0;
  const auto comp = g.component_ids(&n_comp);
  std::vector<std::size_t> sizes(n_comp, 0);
  for (auto c : comp) ++sizes[c];
  // Components are numbered by first-seen node, so the lowest index among
  // equal sizes is the one with the smallest minimum id.
  const auto best = static_cast<std::uint32_t>(
      std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<bool> keep(g.node_count());
  for (std::size_t i = 0; i < keep.size(); ++i) keep[i] = comp[i] == best;
  return g.induced(keep);
}

Graph unit_simple_graph(const Graph& g) {
  std::vector<WeightedEdge> edges;
  for (NodeId i = 0; i < g.node_count(); ++i)
    for (const auto& nb : g.neighbors(i))
      if (nb.node > i) edges.push_back({i, nb.node, 1.0});
  return Graph::from_edges(g.node_count(), edges, g.labels());
}

Graph prepare_network(const Graph& g, std::size_t k) {
  return largest_connected_component(k_core(unit_simple_graph(g), k));
}

NodeFeature parse_node_feature(const std::string& text, const Graph& g, std::string name) {
  std::unordered_map<Label, NodeId> id_of;
  for (NodeId i = 0; i < g.node_count(); ++i) id_of.emplace(g.label(i), i);

  NodeFeature y{std::vector<double>(g.node_count(), 0.0), std::move(name)};
  std::vector<bool> seen(g.node_count(), false);
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool first_data = true;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto fields = split(body, ',');
    if (fields.size() != 2) throw ParseError("expected 'label,value'", line_no);
    Label label = 0;
    try {
      label = parse_int(fields[0]);
    } catch (const ValidationError&) {
      if (first_data) {  // header row
        first_data = false;
        continue;
      }
      throw ParseError("bad node label '" + std::string(trim(fields[0])) + "'", line_no);
    }
    first_data = false;
    double value = 0.0;
    try {
      value = parse_double(fields[1]);
    } catch (const ValidationError&) {
      throw ValidationError("node " + std::to_string(label) + ": non-numeric value '" +
                            std::string(trim(fields[1])) + "'");
    }
    if (!std::isfinite(value))
      throw ValidationError("node " + std::to_string(label) + ": value is not finite");
    const auto it = id_of.find(label);
    if (it == id_of.end()) continue;  // nodes dropped by preprocessing
    if (seen[it->second])
      throw ValidationError("node " + std::to_string(label) + " listed more than once");
    seen[it->second] = true;
    y.values[it->second] = value;
  }
  for (NodeId i = 0; i < g.node_count(); ++i)
    if (!seen[i]) throw ValidationError("node " + std::to_string(g.label(i)) + " has no value");
  return y;
}

NodeFeature load_node_feature(const std::filesystem::path& path, const Graph& g) {
  return parse_node_feature(read_text_file(path), g, path.stem().string());
}

}  // namespace netsample
