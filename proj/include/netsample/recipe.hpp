#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace netsample {

/// Declarative experiment description: `key = value` lines grouped under
/// optional `[section]` headers, `#` comments.
class Recipe {
 public:
  static Recipe parse(const std::string& text);
  static Recipe load(const std::filesystem::path& path);

  const std::string& name() const { return name_; }
  const std::string& kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }
  void set_seed(std::uint64_t seed) { seed_ = seed; }
  /// FNV-1a of the recipe text; identifies the parameter block.
  std::uint64_t hash() const { return hash_; }

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key) const;
  std::string get_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key,
                    std::optional<double> fallback = std::nullopt) const;
  std::size_t get_size(const std::string& section, const std::string& key,
                       std::optional<std::size_t> fallback = std::nullopt) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  /// Comma-separated list, or `a:b:step` for doubles.
  std::vector<double> get_doubles(const std::string& section, const std::string& key) const;
  std::vector<std::size_t> get_sizes(const std::string& section, const std::string& key) const;

 private:
  std::map<std::string, std::map<std::string, std::string>> values_;
  std::string name_, kind_;
  std::uint64_t seed_ = 1;
  std::uint64_t hash_ = 0;
};

struct RecipeResult {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> notices;  // skipped data, unreadable inputs
};

/// Threshold sweep on two-block SBMs: one CSV per (degree, lambda2) panel
/// with rows n,mode,de,de_se,mean_rn,rn_se.
RecipeResult run_fig2_threshold(const Recipe& r, const std::filesystem::path& out_dir,
                                unsigned threads);
/// Exact conditional design effect of GW-tree samples on a user-supplied
/// network and binary feature. Skips with a notice when the data is absent.
RecipeResult run_fig3_blog_de(const Recipe& r, const std::filesystem::path& out_dir,
                              unsigned threads);
/// n G(lambda2) curves for a directory of tree CSVs and synthetic 2-trees.
RecipeResult run_fig5_gcurves(const Recipe& r, const std::filesystem::path& out_dir,
                              unsigned threads);
/// Dispatches on the recipe's `kind`.
RecipeResult run_recipe(const Recipe& r, const std::filesystem::path& out_dir, unsigned threads);

/// "a:b:step" inclusive range (with a 1e-9 step slack) or a comma list.
std::vector<double> parse_grid(const std::string& text);

}  // namespace netsample
