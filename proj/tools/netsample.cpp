#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "netsample/errors.hpp"
#include "netsample/estimators.hpp"
#include "netsample/graph.hpp"
#include "netsample/io.hpp"
#include "netsample/recipe.hpp"
#include "netsample/sbm.hpp"
#include "netsample/spectral.hpp"
#include "netsample/tree.hpp"
#include "netsample/variance.hpp"
#include "netsample/walk.hpp"

namespace fs = std::filesystem;
using namespace netsample;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string out_dir;
};

fs::path resolve(const Globals& g, const std::string& path) {
  if (g.out_dir.empty() || fs::path(path).is_absolute()) return path;
  return fs::path(g.out_dir) / path;
}

void emit(const Globals& g, const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    write_text_file(resolve(g, out), text);
  }
}

Graph load_graph(const std::string& path, bool prepare) {
  Graph g = load_edge_list(path);
  return prepare ? prepare_network(g) : g;
}

std::vector<std::size_t> to_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  for (auto v : parse_int_list(text)) {
    if (v <= 0) throw ValidationError("n grid entries must be positive");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact variance and Monte Carlo design effects for network samples"};
  app.require_subcommand(1);
  Globals globals;
  app.add_option("--seed", globals.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", globals.threads, "Worker threads (0 = hardware)")->capture_default_str();
  app.add_option("--out-dir", globals.out_dir, "Directory for relative output paths");

  // gen-sbm
  auto* gen_sbm = app.add_subcommand("gen-sbm", "Sample a stochastic blockmodel graph");
  std::size_t sbm_n = 0;
  std::string sbm_pi, sbm_psi, sbm_edges, sbm_labels;
  double sbm_degree = 0.0, sbm_lambda2 = 0.0;
  gen_sbm->add_option("--n", sbm_n, "Number of nodes")->required();
  gen_sbm->add_option("--pi", sbm_pi, "Block probabilities, comma separated");
  gen_sbm->add_option("--psi", sbm_psi, "Connection probabilities, K*K row-major");
  gen_sbm->add_option("--degree", sbm_degree, "Expected degree (two-block form)");
  gen_sbm->add_option("--lambda2", sbm_lambda2, "Block-level lambda2 (two-block form)");
  gen_sbm->add_option("--out-edges", sbm_edges, "Edge list output")->required();
  gen_sbm->add_option("--out-labels", sbm_labels, "label,block output");

  // gen-tree
  auto* gen_tree = app.add_subcommand("gen-tree", "Generate an m-tree or a Galton-Watson tree");
  std::string tree_kind = "mtree", tree_offspring = "binom:1,2,0.5", tree_out;
  std::uint32_t tree_m = 2, tree_height = 3;
  std::size_t tree_min_size = 0;
  gen_tree->add_option("--kind", tree_kind, "mtree or gw")->check(CLI::IsMember({"mtree", "gw"}));
  gen_tree->add_option("--m", tree_m, "Referrals per node (mtree)");
  gen_tree->add_option("--height", tree_height, "Number of generations below the root");
  gen_tree->add_option("--offspring", tree_offspring, "const:M, binom:SHIFT,TRIALS,P or pmf:...");
  gen_tree->add_option("--min-size", tree_min_size, "Grow a GW tree to exactly this many nodes");
  gen_tree->add_option("--out", tree_out, "Tree CSV output");

  // gfunc
  auto* gfunc = app.add_subcommand("gfunc", "Evaluate G(z) on a tree");
  std::string gf_tree, gf_z = "0:0.95:0.05", gf_out;
  gfunc->add_option("--tree", gf_tree, "Tree CSV")->required();
  gfunc->add_option("--z", gf_z, "a:b:step or list");
  gfunc->add_option("--out", gf_out, "CSV output");

  // spectral
  auto* spectral = app.add_subcommand("spectral", "Eigenvalues of the simple random walk");
  std::string sp_graph, sp_out;
  std::size_t sp_k = 0;
  bool sp_functions = false, sp_prepare = false;
  spectral->add_option("--graph", sp_graph, "Edge list")->required();
  spectral->add_option("--k", sp_k, "Number of leading eigenvalues (0 = all)");
  spectral->add_flag("--eigenfunctions", sp_functions, "Append f_ell columns, one row per node");
  spectral->add_flag("--prepare", sp_prepare, "Unit weights, 2-core, largest component");
  spectral->add_option("--out", sp_out, "CSV output");

  // variance
  auto* variance = app.add_subcommand("variance", "Exact variance and design effect");
  std::string va_graph, va_y, va_tree, va_transform = "none", va_out;
  bool va_prepare = false;
  variance->add_option("--graph", va_graph, "Edge list")->required();
  variance->add_option("--y", va_y, "Feature CSV label,value")->required();
  variance->add_option("--tree", va_tree, "Tree CSV")->required();
  variance->add_option("--feature-transform", va_transform, "none or pi")
      ->check(CLI::IsMember({"none", "pi"}));
  variance->add_flag("--prepare", va_prepare, "Unit weights, 2-core, largest component");
  variance->add_option("--out", va_out, "report.json or report.csv");

  // simulate / repeats
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo design effect");
  auto* repeats = app.add_subcommand("repeats", "Monte Carlo repeat counts R_n");
  std::string si_graph, si_y, si_mode = "with", si_grid, si_out, si_offspring = "binom:1,2,0.5", si_tree;
  std::size_t si_reps = 1000, si_budget = 500, si_target = 2000;
  long long si_init = -1;
  bool si_quarter = false, si_weighted = false, si_prepare = false;
  for (auto* sub : {simulate, repeats}) {
    sub->add_option("--graph", si_graph, "Edge list")->required();
    sub->add_option("--reps", si_reps, "Replicates")->capture_default_str();
    sub->add_option("--n-grid", si_grid, "Comma-separated sample sizes")->required();
    sub->add_option("--budget", si_budget, "Nodes kept per replicate")->capture_default_str();
    sub->add_option("--gw-target", si_target, "GW tree size before pruning")->capture_default_str();
    sub->add_option("--offspring", si_offspring, "Offspring law")->capture_default_str();
    sub->add_option("--tree", si_tree, "Fixed tree CSV instead of GW trees (with replacement)");
    sub->add_option("--init", si_init, "Fixed seed node label (default: stationary draw)");
    sub->add_flag("--prepare", si_prepare, "Unit weights, 2-core, largest component");
    sub->add_option("--out", si_out, "CSV output");
  }
  simulate->add_option("--y", si_y, "Feature CSV label,value")->required();
  simulate->add_option("--mode", si_mode, "with, without or both")
      ->check(CLI::IsMember({"with", "without", "both"}));
  simulate->add_flag("--quarter-variance", si_quarter, "Divide by (4n)^-1 instead of Var_pi(Y)/n");
  simulate->add_flag("--weighted-degrees", si_weighted, "VH degrees from edge weights");

  // recipe
  auto* recipe = app.add_subcommand("recipe", "Run experiment recipes");
  std::vector<std::string> recipe_paths;
  recipe->add_option("paths", recipe_paths, "Recipe files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*gen_sbm) {
      SbmSpec spec;
      if (sbm_degree > 0.0 || sbm_lambda2 > 0.0) {
        spec = two_block_spec(sbm_n, two_block_params(sbm_n, sbm_degree, sbm_lambda2));
      } else {
        if (sbm_pi.empty() || sbm_psi.empty())
          throw ValidationError("give --pi and --psi, or --degree and --lambda2");
        spec.block_probs = parse_double_list(sbm_pi);
        const auto psi = parse_double_list(sbm_psi);
        const auto K = spec.block_probs.size();
        if (psi.size() != K * K) throw ValidationError("--psi needs K*K entries");
        spec.psi.resize(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(K));
        for (std::size_t a = 0; a < K; ++a)
          for (std::size_t b = 0; b < K; ++b)
            spec.psi(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = psi[a * K + b];
        spec.node_count = sbm_n;
      }
      const auto sample = sample_sbm(spec, globals.seed);
      write_edge_list(sample.graph, resolve(globals, sbm_edges));
      if (!sbm_labels.empty()) {
        std::ostringstream out;
        out << "label,block\n";
        for (NodeId i = 0; i < sample.graph.node_count(); ++i)
          out << sample.graph.label(i) << ',' << sample.blocks[i] << '\n';
        write_text_file(resolve(globals, sbm_labels), out.str());
      }
    } else if (*gen_tree) {
      ReferralForest tree;
      if (tree_kind == "mtree") {
        tree = gen_m_tree(tree_m, tree_height);
      } else {
        const auto stop = tree_min_size > 0 ? GwStop::min_size(tree_min_size) : GwStop::height(tree_height);
        const auto gw = gen_gw_tree(OffspringSpec::parse(tree_offspring), stop, globals.seed);
        if (gw.discarded > 0) std::cerr << "discarded " << gw.discarded << " extinct trees\n";
        tree = gw.tree;
      }
      if (tree_out.empty()) throw ValidationError("--out is required");
      write_tree(tree, resolve(globals, tree_out));
    } else if (*gfunc) {
      const auto tree = load_tree(gf_tree);
      const auto ds = distance_spectrum(tree);
      std::ostringstream out;
      out << "z,G,n,nG\n";
      const double n = static_cast<double>(tree.size());
      for (double z : parse_grid(gf_z)) {
        const double g = g_eval(ds, z);
        out << fmt_double(z) << ',' << fmt_double(g) << ',' << tree.size() << ',' << fmt_double(n * g) << '\n';
      }
      emit(globals, gf_out, out.str());
    } else if (*spectral) {
      const Graph g = load_graph(sp_graph, sp_prepare);
      const auto s = spectral_decompose(srw_kernel(g));
      const std::size_t k = sp_k == 0 ? s.size() : std::min(sp_k, s.size());
      std::ostringstream out;
      out << "ell,lambda\n";
      for (std::size_t ell = 1; ell <= k; ++ell) out << ell << ',' << fmt_double(s.lambda(ell)) << '\n';
      emit(globals, sp_out, out.str());
      if (sp_functions) {
        std::ostringstream f;
        f << "label,pi";
        for (std::size_t ell = 1; ell <= k; ++ell) f << ",f" << ell;
        f << '\n';
        for (NodeId i = 0; i < g.node_count(); ++i) {
          f << g.label(i) << ',' << fmt_double(s.kernel.stationary(i));
          for (std::size_t ell = 1; ell <= k; ++ell) f << ',' << fmt_double(s.f(ell)(i));
          f << '\n';
        }
        const std::string target = sp_out.empty() ? "" : sp_out + ".eigenfunctions.csv";
        emit(globals, target, f.str());
      }
    } else if (*variance) {
      const Graph g = load_graph(va_graph, va_prepare);
      const auto s = spectral_decompose(srw_kernel(g));
      auto y = load_node_feature(va_y, g);
      if (va_transform == "pi") {
        std::vector<double> pi(s.kernel.stationary.data(), s.kernel.stationary.data() + s.size());
        y = pi_transform(y, pi, g.node_count());
      }
      const auto tree = load_tree(va_tree);
      const auto report = variance_exact(s, y.values, distance_spectrum(tree), globals.threads);
      const bool csv = fs::path(va_out).extension() == ".csv";
      emit(globals, va_out, csv ? to_csv(report) : to_json(report).dump(2) + "\n");
    } else if (*simulate || *repeats) {
      const Graph g = load_graph(si_graph, si_prepare);
      SimConfig cfg;
      cfg.seed = globals.seed;
      cfg.threads = globals.threads;
      cfg.replicates = si_reps;
      cfg.sample_budget = si_budget;
      cfg.gw_target_size = si_target;
      cfg.offspring = OffspringSpec::parse(si_offspring);
      cfg.quarter_variance = si_quarter;
      cfg.weighted_degrees = si_weighted;
      if (!si_tree.empty()) {
        cfg.fixed_tree = std::make_shared<const ReferralForest>(load_tree(si_tree));
        cfg.sample_budget = cfg.fixed_tree->size();
      }
      if (si_init >= 0) {
        bool found = false;
        for (NodeId i = 0; i < g.node_count(); ++i)
          if (g.label(i) == si_init) {
            cfg.init = WalkInit::fixed(i);
            found = true;
          }
        if (!found) throw ValidationError("--init label " + std::to_string(si_init) + " is not in the graph");
      }
      const auto grid = to_sizes(si_grid);
      std::ostringstream out;
      if (*simulate) {
        cfg.mode = parse_sample_mode(si_mode);
        const auto y = load_node_feature(si_y, g);
        out << "n,mode,de,de_se,mean_rn,rn_se\n";
        for (const auto& row : mc_design_effect(g, y.values, cfg, grid))
          out << row.n << ',' << to_string(row.mode) << ',' << fmt_double(row.de) << ','
              << fmt_double(row.de_se) << ',' << fmt_double(row.mean_rn) << ',' << fmt_double(row.rn_se) << '\n';
      } else {
        out << "n,mode,de,de_se,mean_rn,rn_se,lower_bound,n_over_sqrt_N,rn_over_nlogn\n";
        for (const auto& row : repeat_rate_experiment(g, cfg, grid))
          out << row.n << ",with,nan,nan," << fmt_double(row.mean_rn) << ',' << fmt_double(row.rn_se) << ','
              << fmt_double(row.lower_bound) << ',' << fmt_double(row.n_over_sqrt_population) << ','
              << fmt_double(row.rn_over_nlogn) << '\n';
      }
      emit(globals, si_out, out.str());
    } else if (*recipe) {
      const bool seed_given = app.count("--seed") > 0;
      for (const auto& path : recipe_paths) {
        auto r = Recipe::load(path);
        if (seed_given) r.set_seed(globals.seed);
        const fs::path dir = globals.out_dir.empty() ? fs::path("out") / r.name() : fs::path(globals.out_dir);
        const auto result = run_recipe(r, dir, globals.threads);
        for (const auto& note : result.notices) std::cerr << note << '\n';
        for (const auto& f : result.files) std::cout << f.string() << '\n';
      }
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
