#include "netsample/tree.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "netsample/errors.hpp"
#include "netsample/io.hpp"

namespace netsample {

ReferralForest ReferralForest::from_parents(std::vector<std::int64_t> parents,
                                            std::vector<std::string> labels) {
  const std::size_t n = parents.size();
  if (n == 0) throw ValidationError("a referral tree needs at least one node");
  if (labels.empty()) {
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  }
  if (labels.size() != n) throw ValidationError("label count does not match node count");

  ReferralForest f;
  f.parent_ = std::move(parents);
  f.labels_ = std::move(labels);
  std::vector<std::size_t> n_children(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = f.parent_[i];
    if (p == kNoParent) {
      f.roots_.push_back(static_cast<TreeIndex>(i));
    } else if (p < 0 || static_cast<std::size_t>(p) >= n) {
      throw ValidationError("node " + f.labels_[i] + " has parent index out of range");
    } else {
      ++n_children[static_cast<std::size_t>(p)];
    }
  }
  if (f.roots_.empty()) throw ValidationError("referral forest has no root (every node has a parent)");

  f.child_offset_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) f.child_offset_[i + 1] = f.child_offset_[i] + n_children[i];
  f.child_list_.resize(n - f.roots_.size());
  std::vector<std::size_t> cursor(f.child_offset_.begin(), f.child_offset_.end() - 1);
  for (std::size_t i = 0; i < n; ++i)
    if (f.parent_[i] != kNoParent) f.child_list_[cursor[static_cast<std::size_t>(f.parent_[i])]++] = static_cast<TreeIndex>(i);

  f.depth_.assign(n, 0);
  f.root_of_.assign(n, 0);
  f.bfs_.reserve(n);
  for (auto r : f.roots_) {
    std::size_t head = f.bfs_.size();
    f.bfs_.push_back(r);
    f.root_of_[r] = r;
    while (head < f.bfs_.size()) {
      const TreeIndex v = f.bfs_[head++];
      for (auto c : f.children(v)) {
        f.depth_[c] = f.depth_[v] + 1;
        f.root_of_[c] = r;
        f.height_ = std::max(f.height_, f.depth_[c]);
        f.bfs_.push_back(c);
      }
    }
  }
  if (f.bfs_.size() != n) {
    // Some node never reached a root: walk parents from it until a repeat.
    std::vector<char> reached(n, 0);
    for (auto v : f.bfs_) reached[v] = 1;
    std::size_t start = 0;
    while (reached[start]) ++start;
    std::vector<std::size_t> step(n, 0);
    std::size_t v = start, k = 1;
    while (step[v] == 0) {
      step[v] = k++;
      v = static_cast<std::size_t>(f.parent_[v]);
    }
    std::string cycle = f.labels_[v];
    for (auto w = static_cast<std::size_t>(f.parent_[v]); w != v; w = static_cast<std::size_t>(f.parent_[w]))
      cycle += " -> " + f.labels_[w];
    cycle += " -> " + f.labels_[v];
    throw ValidationError("referral tree contains a cycle: " + cycle);
  }
  return f;
}

bool ReferralForest::is_bfs_indexed() const {
  for (std::size_t i = 0; i < bfs_.size(); ++i)
    if (bfs_[i] != i) return false;
  return true;
}

namespace {

ReferralForest induced_in_bfs_order(const ReferralForest& f, std::size_t count_limit,
                                    std::uint32_t depth_limit) {
  std::vector<std::int64_t> new_index(f.size(), -1);
  std::vector<std::int64_t> parents;
  std::vector<std::string> labels;
  for (auto v : f.bfs_order()) {
    if (parents.size() >= count_limit) break;
    if (f.depth(v) > depth_limit) continue;
    const auto p = f.parent(v);
    new_index[v] = static_cast<std::int64_t>(parents.size());
    parents.push_back(p == kNoParent ? kNoParent : new_index[static_cast<std::size_t>(p)]);
    labels.push_back(f.labels()[v]);
  }
  return ReferralForest::from_parents(std::move(parents), std::move(labels));
}

}  // namespace

ReferralForest ReferralForest::bfs_prefix(std::size_t n) const {
  if (n == 0 || n > size()) throw ValidationError("bfs_prefix: size out of range");
  // A BFS prefix is closed under parents, so every kept node's parent is kept.
  return induced_in_bfs_order(*this, n, height_);
}

ReferralForest ReferralForest::truncated(std::uint32_t h) const {
  return induced_in_bfs_order(*this, size(), h);
}

std::vector<std::size_t> ReferralForest::generation_sizes() const {
  std::vector<std::size_t> sizes(height_ + 1, 0);
  for (auto d : depth_) ++sizes[d];
  return sizes;
}

ReferralForest parse_tree(const std::string& text) {
  std::vector<std::string> nodes, parent_labels;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto fields = split(body, ',');
    if (fields.size() != 2) throw ParseError("expected 'node,parent'", line_no);
    const std::string node(trim(fields[0]));
    const std::string parent(trim(fields[1]));
    if (first && node == "node" && parent == "parent") {
      first = false;
      continue;
    }
    first = false;
    if (node.empty()) throw ParseError("empty node label", line_no);
    nodes.push_back(node);
    parent_labels.push_back(parent);
  }
  std::unordered_map<std::string, std::int64_t> index;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (!index.emplace(nodes[i], static_cast<std::int64_t>(i)).second)
      throw ValidationError("tree node '" + nodes[i] + "' listed more than once");
  std::vector<std::int64_t> parents(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& p = parent_labels[i];
    if (p.empty() || p == "-1") {
      parents[i] = kNoParent;
      continue;
    }
    const auto it = index.find(p);
    if (it == index.end())
      throw ValidationError("tree node '" + nodes[i] + "' refers to unknown parent '" + p + "'");
    parents[i] = it->second;
  }
  return ReferralForest::from_parents(std::move(parents), std::move(nodes));
}

ReferralForest load_tree(const std::filesystem::path& path) {
  return parse_tree(read_text_file(path));
}

void write_tree(const ReferralForest& f, const std::filesystem::path& path) {
  std::string out = "node,parent\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    out += f.labels()[i];
    out += ',';
    const auto p = f.parent(static_cast<TreeIndex>(i));
    out += p == kNoParent ? std::string("-1") : f.labels()[static_cast<std::size_t>(p)];
    out += '\n';
  }
  write_text_file(path, out);
}

ReferralForest gen_m_tree(std::uint32_t m, std::uint32_t height, std::size_t node_cap) {
  if (m < 1) throw ValidationError("gen_m_tree requires m >= 1");
  std::size_t total = 1, level = 1;
  for (std::uint32_t h = 0; h < height; ++h) {
    if (level > node_cap / m) throw ValidationError("gen_m_tree: node cap exceeded");
    level *= m;
    total += level;
    if (total > node_cap) throw ValidationError("gen_m_tree: node cap exceeded");
  }
  std::vector<std::int64_t> parents(total);
  parents[0] = kNoParent;
  // Breadth-first numbering: children of node v are m*v + 1 .. m*v + m.
  for (std::size_t i = 1; i < total; ++i) parents[i] = static_cast<std::int64_t>((i - 1) / m);
  return ReferralForest::from_parents(std::move(parents));
}

OffspringSpec OffspringSpec::fixed(std::uint32_t m) {
  OffspringSpec s;
  s.kind = Kind::kConstant;
  s.constant = m;
  return s;
}

OffspringSpec OffspringSpec::shifted_binomial(std::uint32_t shift, std::uint32_t trials, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("binomial p must lie in [0,1]");
  OffspringSpec s;
  s.kind = Kind::kShiftedBinomial;
  s.shift = shift;
  s.trials = trials;
  s.p = p;
  return s;
}

OffspringSpec OffspringSpec::from_pmf(std::vector<double> pmf) {
  if (pmf.empty()) throw ValidationError("offspring pmf is empty");
  double total = 0.0;
  for (double q : pmf) {
    if (!(q >= 0.0)) throw ValidationError("offspring pmf entries must be nonnegative");
    total += q;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ValidationError("offspring pmf must sum to 1");
  OffspringSpec s;
  s.kind = Kind::kPmf;
  s.pmf = std::move(pmf);
  return s;
}

OffspringSpec OffspringSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw ValidationError("offspring spec must look like const:M, binom:SHIFT,TRIALS,P or pmf:P0,P1,...");
  const std::string kind = text.substr(0, colon);
  const std::string_view rest = std::string_view(text).substr(colon + 1);
  if (kind == "const") return fixed(static_cast<std::uint32_t>(parse_int(rest)));
  if (kind == "binom") {
    const auto parts = split(rest, ',');
    if (parts.size() != 3) throw ValidationError("binom offspring needs SHIFT,TRIALS,P");
    return shifted_binomial(static_cast<std::uint32_t>(parse_int(parts[0])),
                            static_cast<std::uint32_t>(parse_int(parts[1])), parse_double(parts[2]));
  }
  if (kind == "pmf") return from_pmf(parse_double_list(rest));
  throw ValidationError("unknown offspring kind '" + kind + "'");
}

std::string OffspringSpec::to_string() const {
  switch (kind) {
    case Kind::kConstant:
      return "const:" + std::to_string(constant);
    case Kind::kShiftedBinomial:
      return "binom:" + std::to_string(shift) + "," + std::to_string(trials) + "," + fmt_double(p);
    case Kind::kPmf: {
      std::string out = "pmf:";
      for (std::size_t k = 0; k < pmf.size(); ++k) out += (k ? "," : "") + fmt_double(pmf[k]);
      return out;
    }
  }
  return {};
}

double OffspringSpec::mean() const {
  switch (kind) {
    case Kind::kConstant:
      return constant;
    case Kind::kShiftedBinomial:
      return shift + trials * p;
    case Kind::kPmf: {
      double m = 0.0;
      for (std::size_t k = 0; k < pmf.size(); ++k) m += static_cast<double>(k) * pmf[k];
      return m;
    }
  }
  return 0.0;
}

std::uint32_t OffspringSpec::draw(CounterRng& rng) const {
  switch (kind) {
    case Kind::kConstant:
      return constant;
    case Kind::kShiftedBinomial: {
      std::uint32_t k = shift;
      for (std::uint32_t t = 0; t < trials; ++t) k += rng.bernoulli(p) ? 1 : 0;
      return k;
    }
    case Kind::kPmf: {
      double u = rng.uniform();
      for (std::size_t k = 0; k + 1 < pmf.size(); ++k) {
        if (u < pmf[k]) return static_cast<std::uint32_t>(k);
        u -= pmf[k];
      }
      return static_cast<std::uint32_t>(pmf.size() - 1);
    }
  }
  return 0;
}

GwTree gen_gw_tree(const OffspringSpec& offspring, const GwStop& stop, std::uint64_t seed,
                   std::size_t node_cap) {
  constexpr std::size_t kMaxDiscards = 1'000'000;
  GwTree out;
  if (stop.kind == GwStop::Kind::kMinSize && stop.value == 0)
    throw ValidationError("min_size must be at least 1");
  if (stop.kind == GwStop::Kind::kMinSize && stop.value > node_cap)
    throw ValidationError("min_size exceeds the node cap");

  for (std::size_t attempt = 0;; ++attempt) {
    auto rng = make_stream(seed, attempt);
    std::vector<std::int64_t> parents{kNoParent};
    std::vector<std::uint32_t> depth{0};
    const bool by_size = stop.kind == GwStop::Kind::kMinSize;
    bool full = by_size && parents.size() >= stop.value;
    for (std::size_t head = 0; head < parents.size() && !full; ++head) {
      if (!by_size && depth[head] >= stop.value) break;  // BFS: the rest are deeper
      const auto kids = offspring.draw(rng);
      for (std::uint32_t c = 0; c < kids; ++c) {
        if (parents.size() >= node_cap) throw ValidationError("gen_gw_tree: node cap exceeded");
        parents.push_back(static_cast<std::int64_t>(head));
        depth.push_back(depth[head] + 1);
        if (by_size && parents.size() >= stop.value) {
          full = true;
          break;
        }
      }
    }
    if (!by_size || full) {
      out.tree = ReferralForest::from_parents(std::move(parents));
      return out;
    }
    if (++out.discarded > kMaxDiscards)
      throw NumericError("gen_gw_tree: more than 10^6 extinct trees before reaching the target size");
  }
}

double DistanceSpectrum::mean_finite_distance() const {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    num += static_cast<double>(k) * static_cast<double>(counts[k]);
    den += static_cast<double>(counts[k]);
  }
  return den > 0.0 ? num / den : 0.0;
}

DistanceSpectrum distance_spectrum(const ReferralForest& f) {
  const std::size_t n = f.size();
  DistanceSpectrum ds;
  ds.n = n;
  ds.counts.assign(2 * static_cast<std::size_t>(f.height()) + 1, 0);
  ds.counts[0] = n;

  // hist[v] holds subtree depth counts of v stored back to front:
  // hist[v][len - 1 - d] = #nodes at depth d below v (d = 0 is v itself).
  std::vector<std::vector<std::uint64_t>> hist(n);
  const auto& order = f.bfs_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const TreeIndex v = *it;
    const auto kids = f.children(v);
    if (kids.empty()) {
      hist[v] = {1};
      continue;
    }
    TreeIndex heavy = kids[0];
    for (auto c : kids)
      if (hist[c].size() > hist[heavy].size()) heavy = c;

    auto acc = std::move(hist[heavy]);
    // v paired with the heavy subtree: distance = depth below v.
    const std::size_t len = acc.size();
    for (std::size_t d = 0; d < len; ++d) ds.counts[d + 1] += 2 * acc[len - 1 - d];
    acc.push_back(1);

    for (auto c : kids) {
      if (c == heavy) continue;
      auto light = std::move(hist[c]);
      const std::size_t lc = light.size();
      const std::size_t la = acc.size();
      // Pairs (a, b): a in the merged part at depth i below v (v included),
      // b in the light subtree at depth j + 1 below v.
      for (std::size_t j = 0; j < lc; ++j) {
        const std::uint64_t cb = light[lc - 1 - j];
        if (cb == 0) continue;
        for (std::size_t i = 0; i < la; ++i) ds.counts[i + j + 1] += 2 * acc[la - 1 - i] * cb;
      }
      for (std::size_t j = 0; j < lc; ++j) acc[la - 2 - j] += light[lc - 1 - j];
      std::vector<std::uint64_t>().swap(light);
    }
    hist[v] = std::move(acc);
  }

  std::uint64_t same = 0;
  for (auto r : f.roots()) {
    std::uint64_t size = 0;
    for (auto c : hist[r]) size += c;
    same += size * size;
  }
  ds.infinite_pairs = static_cast<std::uint64_t>(n) * n - same;
  return ds;
}

double g_eval(const DistanceSpectrum& ds, double z) {
  if (!(std::abs(z) <= 1.0)) throw ValidationError("g_eval: |z| must not exceed 1");
  double acc = 0.0;
  for (std::size_t k = ds.counts.size(); k-- > 0;) acc = acc * z + static_cast<double>(ds.counts[k]);
  const double n = static_cast<double>(ds.n);
  return acc / (n * n);
}

BalanceDiagnostics tree_stats(const ReferralForest& f, double m) {
  if (!(m > 0.0)) throw ValidationError("tree_stats: growth rate m must be positive");
  const std::size_t n = f.size();
  BalanceDiagnostics out;
  out.node_count = n;
  out.height = f.height();
  out.growth_rate = m;
  out.generation_sizes = f.generation_sizes();
  double depth_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) depth_sum += f.depth(static_cast<TreeIndex>(i));
  out.mean_depth = depth_sum / static_cast<double>(n);
  for (std::size_t k = 0; k < out.generation_sizes.size(); ++k)
    out.growth_ratios.push_back(static_cast<double>(out.generation_sizes[k]) / std::pow(m, static_cast<double>(k)));

  // Subtree heights and the diameter (longest path through each node).
  std::vector<std::uint32_t> sub_height(n, 0);
  const auto& order = f.bfs_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const TreeIndex v = *it;
    std::uint32_t best = 0, second = 0;
    bool any = false;
    for (auto c : f.children(v)) {
      const std::uint32_t h = sub_height[c] + 1;
      if (h > best) {
        second = best;
        best = h;
      } else if (h > second) {
        second = h;
      }
      any = true;
    }
    sub_height[v] = any ? best : 0;
    out.diameter = std::max(out.diameter, best + second);
  }

  // |D_n(tau)| for every tau and generation n >= |tau|, laid out per node.
  std::vector<std::size_t> offset(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offset[i + 1] = offset[i] + sub_height[i] + 1;
  std::vector<std::uint32_t> desc(offset.back(), 0);
  for (std::size_t s = 0; s < n; ++s) {
    const auto ds = f.depth(static_cast<TreeIndex>(s));
    for (std::int64_t a = static_cast<std::int64_t>(s); a != kNoParent; a = f.parent(static_cast<TreeIndex>(a)))
      ++desc[offset[static_cast<std::size_t>(a)] + ds - f.depth(static_cast<TreeIndex>(a))];
  }
  out.c_tau.assign(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    double best = 0.0;
    for (std::size_t rel = 0; rel <= sub_height[t]; ++rel)
      best = std::max(best, desc[offset[t] + rel] / std::pow(m, static_cast<double>(rel)));
    out.c_tau[t] = best;
  }
  out.c_tau_second_moment.assign(out.height + 1, 0.0);
  for (std::size_t t = 0; t < n; ++t)
    out.c_tau_second_moment[f.depth(static_cast<TreeIndex>(t))] += out.c_tau[t] * out.c_tau[t];
  for (std::size_t h = 0; h <= out.height; ++h) {
    out.c_tau_second_moment[h] /= static_cast<double>(out.generation_sizes[h]);
    out.max_c_tau_second_moment = std::max(out.max_c_tau_second_moment, out.c_tau_second_moment[h]);
  }
  return out;
}

GLowerBounds g_lower_bounds(const BalanceDiagnostics& stats, const DistanceSpectrum& ds, double z) {
  if (!(z > 0.0 && z < 1.0)) throw ValidationError("g_lower_bounds: z must lie in (0,1)");
  if (ds.infinite_pairs != 0) throw ValidationError("g_lower_bounds: requires a single tree");
  GLowerBounds b;
  b.g = g_eval(ds, z);
  b.z_mean_distance = std::pow(z, ds.mean_finite_distance());
  b.z_diameter = std::pow(z, static_cast<double>(stats.diameter));
  b.z_two_mean_depth = std::pow(z, 2.0 * stats.mean_depth);
  b.z_two_height = std::pow(z, 2.0 * stats.height);
  b.inverse_n = 1.0 / static_cast<double>(ds.n);
  const double slack = 1e-12;
  const double hi = std::max(b.z_diameter, b.z_two_mean_depth);
  const double lo = std::min(b.z_diameter, b.z_two_mean_depth);
  b.chain_holds = b.g >= b.z_mean_distance * (1 - slack) && b.z_mean_distance >= hi * (1 - slack) &&
                  lo >= b.z_two_height * (1 - slack) && b.g >= b.inverse_n * (1 - slack);
  return b;
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::kSubCritical:
      return "sub-critical";
    case Regime::kCritical:
      return "critical";
    case Regime::kSuperCritical:
      return "super-critical";
  }
  return "";
}

ThresholdParams threshold_params(double m, double lambda2) {
  if (!(m > 1.0)) throw ValidationError("threshold_params: m must exceed 1");
  if (!(lambda2 > 0.0 && lambda2 < 1.0)) throw ValidationError("threshold_params: lambda2 must lie in (0,1)");
  ThresholdParams t;
  t.m = m;
  t.lambda2 = lambda2;
  t.beta = 1.0 / (lambda2 * lambda2);
  t.alpha = std::log(t.beta) / std::log(m);
  if (std::abs(m - t.beta) <= 1e-9) {
    t.regime = Regime::kCritical;
  } else {
    t.regime = m < t.beta ? Regime::kSubCritical : Regime::kSuperCritical;
  }
  t.predicted_exponent = t.regime == Regime::kSuperCritical ? 1.0 - t.alpha : 0.0;
  return t;
}

}  // namespace netsample
