#include <doctest.h>

#include <cmath>

#include "netsample/errors.hpp"
#include "netsample/tree.hpp"
#include "oracles.hpp"

using namespace netsample;

TEST_CASE("parse_tree") {
  const auto single = parse_tree("0,-1\n");
  CHECK(single.size() == 1);
  CHECK(single.height() == 0);
  const auto star = parse_tree("node,parent\n0,-1\n1,0\n2,0\n");
  CHECK(star.size() == 3);
  CHECK(star.height() == 1);
  const auto forest = parse_tree("0,-1\n1,\n");
  CHECK(forest.roots().size() == 2);
  CHECK(distance_spectrum(forest).infinite_pairs == 2);
  const auto labelled = parse_tree("b,a\na,-1\nc,b\n");
  CHECK(labelled.height() == 2);

  try {
    parse_tree("0,-1\n1,2\n2,3\n3,1\n");
    FAIL("expected a cycle error");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("cycle") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_tree("0,-1\n1,7\n"), ValidationError);
  CHECK_THROWS_AS(parse_tree("0,-1\n0,-1\n"), ValidationError);
  CHECK_THROWS_AS(parse_tree("1,0\n0,1\n"), ValidationError);
}

TEST_CASE("gen_m_tree") {
  CHECK(gen_m_tree(2, 2).size() == 7);
  const auto chain = gen_m_tree(1, 4);
  CHECK(chain.size() == 5);
  CHECK(chain.height() == 4);
  const auto t = gen_m_tree(3, 3);
  CHECK(t.size() == 40);
  CHECK(t.generation_sizes() == std::vector<std::size_t>{1, 3, 9, 27});
  CHECK(t.is_bfs_indexed());
  CHECK_THROWS_AS(gen_m_tree(10, 9, 1000), ValidationError);
}

TEST_CASE("gen_gw_tree") {
  const auto fixed = gen_gw_tree(OffspringSpec::fixed(2), GwStop::height(3), 5).tree;
  const auto ref = gen_m_tree(2, 3);
  CHECK(fixed.parents() == ref.parents());
  CHECK(gen_gw_tree(OffspringSpec::fixed(0), GwStop::height(5), 5).tree.size() == 1);

  const auto law = OffspringSpec::shifted_binomial(1, 2, 0.5);
  CHECK(law.mean() == doctest::Approx(2.0));
  const auto gw = gen_gw_tree(law, GwStop::min_size(2000), 17);
  CHECK(gw.tree.size() == 2000);
  CHECK(gw.discarded == 0);
  // Kesten-Stigum: |D_k| / 2^k settles for the complete generations.
  const auto stats = tree_stats(gw.tree, 2.0);
  const auto& ratios = stats.growth_ratios;
  REQUIRE(ratios.size() >= 8);
  for (std::size_t k = 5; k + 2 < ratios.size(); ++k)
    CHECK(std::abs(ratios[k + 1] / ratios[k] - 1.0) < 0.1);

  const auto a = gen_gw_tree(OffspringSpec::parse("pmf:0.3,0.2,0.5"), GwStop::min_size(300), 3);
  const auto b = gen_gw_tree(OffspringSpec::parse("pmf:0.3,0.2,0.5"), GwStop::min_size(300), 3);
  CHECK(a.tree.parents() == b.tree.parents());
  CHECK(a.tree.size() == 300);
  CHECK_THROWS_AS(gen_gw_tree(OffspringSpec::fixed(0), GwStop::min_size(5), 1), NumericError);
}

TEST_CASE("offspring spec parsing") {
  CHECK(OffspringSpec::parse("const:3").mean() == 3.0);
  CHECK(OffspringSpec::parse("binom:1,4,0.5").mean() == doctest::Approx(3.0));
  CHECK(OffspringSpec::parse("pmf:0.25,0.5,0.25").mean() == doctest::Approx(1.0));
  CHECK(OffspringSpec::parse(OffspringSpec::parse("binom:1,2,0.5").to_string()).mean() == doctest::Approx(2.0));
  CHECK_THROWS_AS(OffspringSpec::parse("poisson:2"), ValidationError);
  CHECK_THROWS_AS(OffspringSpec::parse("pmf:0.5,0.4"), ValidationError);
}

TEST_CASE("distance spectrum: small trees") {
  const auto two = parse_tree("0,-1\n1,0\n");
  const auto ds2 = distance_spectrum(two);
  CHECK(ds2.counts == std::vector<std::uint64_t>{2, 2, 0});  // padded to 2h + 1
  CHECK(g_eval(ds2, 0.5) == doctest::Approx(0.75));
  const auto star = parse_tree("0,-1\n1,0\n2,0\n");
  const auto ds3 = distance_spectrum(star);
  CHECK(ds3.counts == std::vector<std::uint64_t>{3, 4, 2});
  CHECK(g_eval(ds3, 0.3) == doctest::Approx((3 + 4 * 0.3 + 2 * 0.09) / 9));
  const auto one = distance_spectrum(parse_tree("0,-1\n"));
  CHECK(g_eval(one, 0.0) == 1.0);
  CHECK(g_eval(one, 0.7) == 1.0);
  CHECK_THROWS_AS(g_eval(ds3, 1.5), ValidationError);
  CHECK(g_eval(ds3, -1.0) == doctest::Approx((3 - 4 + 2) / 9.0));
}

TEST_CASE("distance spectrum equals the BFS oracle on random forests") {
  CounterRng rng(stream_key(5, 0));
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 1 + rng.below(300);
    const std::size_t roots = rep % 5 == 0 ? 1 + rng.below(std::min<std::size_t>(n, 4)) : 1;
    const auto f = oracle::random_forest(n, roots, rng);
    const auto ds = distance_spectrum(f);
    const auto ref = oracle::distance_counts(f);
    auto counts = ds.counts;
    while (!counts.empty() && counts.back() == 0) counts.pop_back();
    CHECK(counts == ref.counts);
    CHECK(ds.infinite_pairs == ref.infinite);
    std::uint64_t total = ds.infinite_pairs;
    for (auto c : ds.counts) total += c;
    CHECK(total == n * n);
    CHECK(ds.counts[0] == n);
    CHECK(ds.counts.size() <= 2 * f.height() + 1);
    CHECK(std::abs(g_eval(ds, 0.37) - oracle::g_direct(f, 0.37)) < 1e-12);
  }
}

TEST_CASE("tree_stats") {
  const auto t = gen_m_tree(2, 3);
  const auto s = tree_stats(t, 2.0);
  CHECK(s.height == 3);
  CHECK(s.generation_sizes == std::vector<std::size_t>{1, 2, 4, 8});
  for (double c : s.c_tau) CHECK(c == doctest::Approx(1.0));
  CHECK(s.max_c_tau_second_moment == doctest::Approx(1.0));
  const auto chain = tree_stats(gen_m_tree(1, 4), 1.0);
  CHECK(chain.height == 4);
  CHECK(chain.diameter == 4);
  CHECK(chain.mean_depth == doctest::Approx(2.0));
}

TEST_CASE("g lower bounds and the threshold") {
  const auto t = gen_m_tree(2, 10);
  const auto ds = distance_spectrum(t);
  const auto b = g_lower_bounds(tree_stats(t, 2.0), ds, 0.8);
  CHECK(b.chain_holds);
  CHECK(b.g >= b.z_mean_distance);
  const double n = static_cast<double>(t.size());
  const auto t6 = gen_m_tree(2, 6);
  CHECK(n * g_eval(ds, 0.8) > static_cast<double>(t6.size()) * g_eval(distance_spectrum(t6), 0.8));
  const auto near_zero = g_lower_bounds(tree_stats(t, 2.0), ds, 1e-9);
  CHECK(near_zero.g == doctest::Approx(1.0 / n).epsilon(1e-6));
  CHECK_THROWS_AS(g_lower_bounds(tree_stats(t, 2.0), ds, 1.0), ValidationError);

  const auto crit = threshold_params(2.0, 1.0 / std::sqrt(2.0));
  CHECK(crit.beta == doctest::Approx(2.0));
  CHECK(crit.regime == Regime::kCritical);
  const auto sub = threshold_params(2.0, 0.6);
  CHECK(sub.beta == doctest::Approx(1.0 / 0.36));
  CHECK(sub.regime == Regime::kSubCritical);
  CHECK(sub.predicted_exponent == 0.0);
  const auto sup = threshold_params(3.0, 0.8);
  CHECK(sup.regime == Regime::kSuperCritical);
  CHECK(sup.alpha == doctest::Approx(std::log(1.5625) / std::log(3.0)).epsilon(1e-12));
  CHECK(sup.predicted_exponent == doctest::Approx(0.5940).epsilon(1e-3));
  CHECK_THROWS_AS(threshold_params(1.0, 0.5), ValidationError);
  CHECK_THROWS_AS(threshold_params(2.0, 1.0), ValidationError);
}

TEST_CASE("bfs_prefix and truncated") {
  const auto t = gen_m_tree(2, 4);
  const auto p = t.bfs_prefix(10);
  CHECK(p.size() == 10);
  CHECK(p.is_bfs_indexed());
  CHECK(t.truncated(2).size() == 7);
  CounterRng rng(stream_key(8, 0));
  const auto f = oracle::random_forest(50, 1, rng);
  const auto q = f.bfs_prefix(20);
  CHECK(q.size() == 20);
  CHECK(q.is_bfs_indexed());
}
