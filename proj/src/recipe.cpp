#include "netsample/recipe.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "netsample/errors.hpp"
#include "netsample/graph.hpp"
#include "netsample/io.hpp"
#include "netsample/sbm.hpp"
#include "netsample/spectral.hpp"
#include "netsample/tree.hpp"
#include "netsample/variance.hpp"
#include "netsample/walk.hpp"

namespace netsample {

namespace fs = std::filesystem;

Recipe Recipe::parse(const std::string& text) {
  Recipe r;
  r.hash_ = fnv1a64(text);
  std::istringstream in(text);
  std::string line, section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto body = trim(line);
    if (body.empty() || body.front() == '#' || body.front() == ';') continue;
    if (body.front() == '[') {
      if (body.back() != ']') throw ParseError("unterminated section header", line_no);
      section = std::string(trim(body.substr(1, body.size() - 2)));
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
    const std::string key(trim(body.substr(0, eq)));
    if (key.empty()) throw ParseError("empty key", line_no);
    auto& slot = r.values_[section];
    if (slot.count(key)) throw ParseError("duplicate key '" + key + "'", line_no);
    slot[key] = std::string(trim(body.substr(eq + 1)));
  }
  r.name_ = r.get_or("", "name", "recipe");
  r.kind_ = r.get("", "kind");
  if (r.has("", "seed")) r.seed_ = static_cast<std::uint64_t>(parse_int(r.get("", "seed")));
  return r;
}

Recipe Recipe::load(const fs::path& path) { return parse(read_text_file(path)); }

bool Recipe::has(const std::string& section, const std::string& key) const {
  const auto it = values_.find(section);
  return it != values_.end() && it->second.count(key) > 0;
}

std::string Recipe::get(const std::string& section, const std::string& key) const {
  if (!has(section, key))
    throw ValidationError("recipe is missing " + (section.empty() ? key : section + "." + key));
  return values_.at(section).at(key);
}

std::string Recipe::get_or(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
  return has(section, key) ? get(section, key) : fallback;
}

double Recipe::get_double(const std::string& section, const std::string& key,
                          std::optional<double> fallback) const {
  if (!has(section, key) && fallback) return *fallback;
  return parse_double(get(section, key));
}

std::size_t Recipe::get_size(const std::string& section, const std::string& key,
                             std::optional<std::size_t> fallback) const {
  if (!has(section, key) && fallback) return *fallback;
  const auto v = parse_int(get(section, key));
  if (v < 0) throw ValidationError(section + "." + key + " must be nonnegative");
  return static_cast<std::size_t>(v);
}

bool Recipe::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  if (!has(section, key)) return fallback;
  const auto v = get(section, key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ValidationError(section + "." + key + ": expected a boolean, got '" + v + "'");
}

std::vector<double> Recipe::get_doubles(const std::string& section, const std::string& key) const {
  return parse_grid(get(section, key));
}

std::vector<std::size_t> Recipe::get_sizes(const std::string& section, const std::string& key) const {
  std::vector<std::size_t> out;
  for (auto v : parse_int_list(get(section, key))) {
    if (v <= 0) throw ValidationError(section + "." + key + " entries must be positive");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::vector<double> parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() == 1) return parse_double_list(text);
  if (parts.size() != 3) throw ValidationError("grid must be 'a:b:step' or a list: '" + text + "'");
  const double a = parse_double(parts[0]), b = parse_double(parts[1]), step = parse_double(parts[2]);
  if (!(step > 0.0) || b < a) throw ValidationError("grid needs a <= b and step > 0: '" + text + "'");
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9));
  for (std::size_t k = 0; k <= count; ++k) out.push_back(a + static_cast<double>(k) * step);
  return out;
}

namespace {

std::string provenance(const Recipe& r) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "# recipe=%s hash=%016" PRIx64 " seed=%" PRIu64 "\n",
                r.name().c_str(), r.hash(), r.seed());
  return buf;
}

std::string short_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::string de_table(const std::vector<DesignEffectRow>& rows) {
  std::ostringstream out;
  out << "n,mode,de,de_se,mean_rn,rn_se\n";
  for (const auto& row : rows)
    out << row.n << ',' << to_string(row.mode) << ',' << fmt_double(row.de) << ','
        << fmt_double(row.de_se) << ',' << fmt_double(row.mean_rn) << ','
        << fmt_double(row.rn_se) << '\n';
  return out.str();
}

std::string env_or(const char* var, const std::string& fallback) {
  const char* v = std::getenv(var);
  return v && *v ? std::string(v) : fallback;
}

}  // namespace

RecipeResult run_fig2_threshold(const Recipe& r, const fs::path& out_dir, unsigned threads) {
  const auto nodes = r.get_size("graph", "nodes");
  const auto degrees = r.get_doubles("graph", "degrees");
  const auto lambdas = r.get_doubles("graph", "lambda2");

  SimConfig cfg;
  cfg.seed = r.seed();
  cfg.replicates = r.get_size("sampling", "replicates");
  cfg.mode = parse_sample_mode(r.get_or("sampling", "modes", "both"));
  cfg.sample_budget = r.get_size("sampling", "budget", 500);
  cfg.gw_target_size = r.get_size("sampling", "gw_target", 2000);
  cfg.offspring = OffspringSpec::parse(r.get_or("sampling", "offspring", "binom:1,2,0.5"));
  cfg.quarter_variance = r.get_bool("sampling", "quarter_variance", true);
  cfg.threads = threads;
  const auto n_grid = r.get_sizes("sampling", "n_grid");

  RecipeResult result;
  std::size_t panel = 0;
  for (double deg : degrees) {
    for (double lambda2 : lambdas) {
      const auto params = two_block_params(nodes, deg, lambda2);
      const auto sbm = sample_sbm(two_block_spec(nodes, params), stream_key(r.seed(), 1000 + panel));
      std::vector<double> y(sbm.blocks.begin(), sbm.blocks.end());
      SimConfig panel_cfg = cfg;
      panel_cfg.seed = stream_key(r.seed(), panel);
      const auto rows = mc_design_effect(sbm.graph, y, panel_cfg, n_grid);

      std::ostringstream text;
      text << provenance(r) << "# degree=" << short_number(deg) << " lambda2=" << short_number(lambda2)
           << " nodes=" << nodes << " p=" << fmt_double(params.p) << " r=" << fmt_double(params.r)
           << " replicates=" << cfg.replicates << " offspring=" << cfg.offspring.to_string() << '\n'
           << de_table(rows);
      const auto path = out_dir / ("fig2_deg" + short_number(deg) + "_lambda" + short_number(lambda2) + ".csv");
      write_text_file(path, text.str());
      result.files.push_back(path);
      ++panel;
    }
  }
  return result;
}

RecipeResult run_fig3_blog_de(const Recipe& r, const fs::path& out_dir, unsigned threads) {
  RecipeResult result;
  const std::string edges = env_or("NETSAMPLE_BLOG_EDGES", r.get_or("data", "edges", ""));
  const std::string feature = env_or("NETSAMPLE_BLOG_FEATURE", r.get_or("data", "feature", ""));
  if (edges.empty() || feature.empty() || !fs::exists(edges) || !fs::exists(feature)) {
    result.notices.push_back("fig3: network or feature file not supplied; skipped");
    return result;
  }
  const Graph g = prepare_network(load_edge_list(edges), r.get_size("data", "core", 2));
  const auto y = load_node_feature(feature, g);
  const auto spectral = spectral_decompose(srw_kernel(g));
  const double lambda2 = spectral.lambda(2);
  const double rho = rho_correlation(spectral, y.values, 2);
  const double beta = 1.0 / (lambda2 * lambda2);

  const auto rates = r.get_doubles("sampling", "rates");
  const auto offspring_text = split(r.get("sampling", "offspring"), ';');
  if (offspring_text.size() != rates.size())
    throw ValidationError("sampling.offspring needs one law per entry of sampling.rates");
  const auto n_grid = r.get_sizes("sampling", "n_grid");
  const auto trees = r.get_size("sampling", "trees", 20);
  if (trees < 2) throw ValidationError("sampling.trees must be >= 2");
  const std::size_t max_n = *std::max_element(n_grid.begin(), n_grid.end());

  std::ostringstream text;
  text << provenance(r) << "# nodes=" << g.node_count() << " lambda2=" << fmt_double(lambda2)
       << " rho=" << fmt_double(rho) << " beta=" << fmt_double(beta) << '\n'
       << "m,offspring,regime,n,de,de_se,trees\n";
  for (std::size_t k = 0; k < rates.size(); ++k) {
    const auto law = OffspringSpec::parse(std::string(trim(offspring_text[k])));
    const char* regime = rates[k] > beta ? "super" : (rates[k] < beta ? "sub" : "critical");
    std::vector<std::vector<double>> de(n_grid.size());
    for (std::size_t t = 0; t < trees; ++t) {
      const auto gw = gen_gw_tree(law, GwStop::min_size(max_n), stream_key(r.seed(), k * 1'000'000 + t));
      for (std::size_t j = 0; j < n_grid.size(); ++j) {
        const auto ds = distance_spectrum(gw.tree.bfs_prefix(n_grid[j]));
        de[j].push_back(variance_exact(spectral, y.values, ds, threads).design_effect);
      }
    }
    for (std::size_t j = 0; j < n_grid.size(); ++j) {
      double mean = 0.0, ss = 0.0;
      for (double v : de[j]) mean += v;
      mean /= static_cast<double>(trees);
      for (double v : de[j]) ss += (v - mean) * (v - mean);
      const double se = std::sqrt(ss / static_cast<double>(trees - 1) / static_cast<double>(trees));
      text << short_number(rates[k]) << ',' << law.to_string() << ',' << regime << ',' << n_grid[j]
           << ',' << fmt_double(mean) << ',' << fmt_double(se) << ',' << trees << '\n';
    }
  }
  const auto path = out_dir / "fig3_blog_de.csv";
  write_text_file(path, text.str());
  result.files.push_back(path);
  return result;
}

RecipeResult run_fig5_gcurves(const Recipe& r, const fs::path& out_dir, unsigned) {
  RecipeResult result;
  const auto lambdas = r.get_doubles("curves", "lambda2");
  for (double z : lambdas)
    if (z < 0.0 || z >= 1.0) throw ValidationError("curves.lambda2 must lie in [0, 1)");

  std::vector<std::pair<std::string, ReferralForest>> trees;
  const std::string dir = r.get_or("trees", "dir", "");
  if (!dir.empty()) {
    if (!fs::is_directory(dir)) {
      result.notices.push_back("fig5: tree directory " + dir + " not found; skipped");
    } else {
      std::vector<fs::path> files;
      for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
      std::sort(files.begin(), files.end());
      for (const auto& file : files) {
        try {
          trees.emplace_back(file.stem().string(), load_tree(file));
        } catch (const std::exception& e) {
          result.notices.push_back("fig5: " + file.string() + ": " + e.what());
        }
      }
    }
  }
  if (r.has("trees", "two_tree_heights")) {
    for (auto h : r.get_sizes("trees", "two_tree_heights"))
      trees.emplace_back("2tree_h" + std::to_string(h), gen_m_tree(2, static_cast<std::uint32_t>(h)));
  }

  std::ostringstream text;
  text << provenance(r) << "tree,n,lambda2,G,nG\n";
  for (const auto& [name, tree] : trees) {
    const auto ds = distance_spectrum(tree);
    for (double z : lambdas) {
      const double g = g_eval(ds, z);
      text << name << ',' << tree.size() << ',' << fmt_double(z) << ',' << fmt_double(g) << ','
           << fmt_double(static_cast<double>(tree.size()) * g) << '\n';
    }
  }
  const auto path = out_dir / "fig5_gcurves.csv";
  write_text_file(path, text.str());
  result.files.push_back(path);
  return result;
}

RecipeResult run_recipe(const Recipe& r, const fs::path& out_dir, unsigned threads) {
  if (r.kind() == "fig2") return run_fig2_threshold(r, out_dir, threads);
  if (r.kind() == "fig3") return run_fig3_blog_de(r, out_dir, threads);
  if (r.kind() == "fig5") return run_fig5_gcurves(r, out_dir, threads);
  throw ValidationError("unknown recipe kind '" + r.kind() + "' (fig2, fig3, fig5)");
}

}  // namespace netsample
