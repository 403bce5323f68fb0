#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numbers>
#include <random>

#include "gridrig/error.hpp"
#include "gridrig/gain_graph.hpp"
#include "gridrig/stress_sheer.hpp"

using namespace gridrig;

namespace {

constexpr Brace blue(int i, int j) { return {{i, j}, Colour::Blue}; }
constexpr Brace red(int i, int j) { return {{i, j}, Colour::Red}; }

std::vector<int> iota_ids(int k) {
  std::vector<int> ids(static_cast<std::size_t>(k));
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

/// Alternating cycle v_1 w_1 v_2 w_2 ... v_k w_k v_1 in K2_{m,n}.
std::vector<Brace> cycle_braces(const std::vector<int>& vs, const std::vector<int>& ws,
                                const std::vector<Colour>& colours) {
  std::vector<Brace> out;
  const std::size_t k = vs.size();
  for (std::size_t t = 0; t < k; ++t) {
    out.push_back({{vs[t], ws[t]}, colours[2 * t]});
    out.push_back({{vs[(t + 1) % k], ws[t]}, colours[2 * t + 1]});
  }
  return out;
}

ErrorCode cycle_error(const std::vector<int>& ids, const BracesGainGraph& g) {
  try {
    cycle_dependence(ids, g);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("accepted as a cycle");
  return ErrorCode::NotACycle;
}

bool independent_set(const BracesGainGraph& g, const std::vector<int>& ids) {
  FrameForest f(g);
  bool ok = true;
  for (int id : ids) ok = FrameForest::independent(f.add(id)) && ok;
  return ok;
}

}  // namespace

TEST_CASE("braces graphs") {
  const GridSpec p4 = GridSpec::uniform(2, 2, Norm::p_norm(4), 0.3, 2, 1);
  const auto cell = build_braces_graph(p4, BracingPattern::from_braces(2, 2, {blue(1, 1), red(1, 1)}), GainMode::Numeric);
  REQUIRE(cell.edges.size() == 2);
  CHECK(cell.edges[0].v == 0);
  CHECK(cell.edges[0].w == 2);
  CHECK(cell.edges[1].v == 0);
  CHECK(cell.edges[1].w == 2);
  CHECK(cell.edges[0].brace.colour == Colour::Blue);
  CHECK(cell.edges[1].brace.colour == Colour::Red);

  const auto euclid = build_braces_graph(GridSpec::uniform(2, 2, Norm::euclidean(), 0.4), BracingPattern::full(2, 2),
                                         GainMode::Numeric);
  for (const auto& e : euclid.edges) CHECK(*e.exact_gain == 1);

  const auto full = build_braces_graph(p4, BracingPattern::full(2, 2), GainMode::Numeric);
  const auto bp = brace_parameters(p4.norm, 0.3, 2, 1);
  for (const auto& e : full.edges) {
    const double expected = std::log(e.brace.colour == Colour::Blue ? bp.lambda : bp.lambda_prime);
    CHECK(e.log_gain == doctest::Approx(expected).epsilon(1e-12));
  }

  const auto synthetic = build_braces_graph(p4, BracingPattern::full(2, 2), GainMode::Synthetic);
  CHECK(synthetic.exact());
  for (const auto& e : synthetic.edges) CHECK(*e.exact_gain == (e.brace.colour == Colour::Blue ? 2 : 3));

  const auto pins = build_braces_graph(GridSpec::uniform(2, 2, Norm::linf(), 0.1), BracingPattern::full(2, 2),
                                       GainMode::Numeric);
  for (const auto& e : pins.edges) {
    REQUIRE(e.pin.has_value());
    CHECK(*e.pin == (e.brace.colour == Colour::Blue ? e.w : e.v));
  }
}

TEST_CASE("cycle dependence") {
  const GridSpec p4 = GridSpec::uniform(3, 3, Norm::p_norm(4), 0.3, 2, 1);
  const auto two = build_braces_graph(p4, BracingPattern::from_braces(3, 3, {blue(1, 1), red(1, 1)}), GainMode::Numeric);
  CHECK_FALSE(cycle_dependence(iota_ids(2), two).dependent);

  const auto mono = synthetic_braces_graph(3, 3, {blue(1, 1), blue(2, 1), blue(2, 2), blue(1, 2)});
  const auto square = cycle_dependence(std::vector<int>{0, 1, 2, 3}, mono);
  CHECK(square.dependent);
  CHECK(*square.exact_gain == 1);

  using C = Colour;
  const auto alternating = synthetic_braces_graph(
      3, 3, cycle_braces({1, 2, 3}, {1, 2, 3}, {C::Blue, C::Red, C::Blue, C::Red, C::Blue, C::Red}));
  CHECK_FALSE(cycle_dependence(iota_ids(6), alternating).dependent);
  const auto balanced = synthetic_braces_graph(
      3, 3, cycle_braces({1, 2, 3}, {1, 2, 3}, {C::Blue, C::Blue, C::Red, C::Red, C::Blue, C::Blue}));
  CHECK(cycle_dependence(iota_ids(6), balanced).dependent);

  CHECK(cycle_error({0, 1, 2}, alternating) == ErrorCode::NotACycle);
  CHECK(cycle_error({0, 0}, alternating) == ErrorCode::NotACycle);
  CHECK(cycle_error({0, 1, 2, 5}, alternating) == ErrorCode::NotACycle);
  CHECK(cycle_error({0, 9}, alternating) == ErrorCode::NotACycle);
}

TEST_CASE("gain product equals the blue-count rule on random cycles") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const int k = std::uniform_int_distribution<int>(1, 5)(rng);
    std::vector<int> vs{1, 2, 3, 4, 5};
    std::vector<int> ws{1, 2, 3, 4, 5};
    std::shuffle(vs.begin(), vs.end(), rng);
    std::shuffle(ws.begin(), ws.end(), rng);
    vs.resize(static_cast<std::size_t>(k));
    ws.resize(static_cast<std::size_t>(k));
    std::vector<Colour> colours;
    for (int e = 0; e < 2 * k; ++e) colours.push_back(rng() % 2 ? Colour::Blue : Colour::Red);
    if (k == 1 && colours[0] == colours[1]) colours[1] = colours[0] == Colour::Blue ? Colour::Red : Colour::Blue;

    const auto g = synthetic_braces_graph(5, 5, cycle_braces(vs, ws, colours));
    int odd = 0;
    int even = 0;
    for (int e = 0; e < 2 * k; ++e) (e % 2 == 0 ? odd : even) += colours[static_cast<std::size_t>(e)] == Colour::Blue;
    CHECK(cycle_dependence(iota_ids(2 * k), g).dependent == (odd == even));
  }
}

TEST_CASE("forest certificates") {
  const auto empty = independent_forest_decision(synthetic_braces_graph(2, 2, {}));
  CHECK(empty.independent);
  CHECK(empty.components.size() == 4);
  for (const auto& c : empty.components) CHECK(c.cycle.empty());

  // Spanning tree of K_{2,2} plus a chord making an unbalanced 2-cycle.
  const auto good = synthetic_braces_graph(2, 2, {blue(1, 1), red(1, 1), blue(2, 1), blue(1, 2)});
  const auto cert = independent_forest_decision(good);
  CHECK(cert.independent);
  REQUIRE(cert.components.size() == 1);
  CHECK(cert.components[0].vertices == std::vector<int>{0, 1, 2, 3});
  CHECK(cert.components[0].cycle.size() == 2);
  REQUIRE(cert.components[0].cycle_gain.has_value());
  CHECK_FALSE(cert.components[0].cycle_gain->dependent);

  const auto bad = synthetic_braces_graph(2, 2, {blue(1, 1), blue(2, 1), blue(2, 2), blue(1, 2)});
  const auto dep = independent_forest_decision(bad);
  CHECK_FALSE(dep.independent);
  CHECK(dep.offence == "balanced cycle");
  CHECK(dep.offending.size() == 4);
  CHECK(cycle_dependence(dep.offending, bad).dependent);

  const auto twice = synthetic_braces_graph(2, 2, {blue(1, 1), red(1, 1), blue(2, 1), red(2, 1)});
  const auto second = independent_forest_decision(twice);
  CHECK_FALSE(second.independent);
  CHECK(second.offence == "second cycle");
}

TEST_CASE("frame rank matches the synthetic stress-sheer rank") {
  std::mt19937_64 rng(99);
  const auto all = braces_list(BracingPattern::full(3, 3), true);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Brace> chosen;
    for (const Brace& b : all) {
      if (rng() % 3 == 0) chosen.push_back(b);
    }
    const auto g = synthetic_braces_graph(3, 3, chosen);
    CHECK(frame_rank(g) == exact_rank(synthetic_stress_sheer(3, 3, chosen, 2, 3)));
  }
}

TEST_CASE("frame matroid augmentation") {
  std::mt19937_64 rng(5);
  const auto g = synthetic_braces_graph(4, 3, braces_list(BracingPattern::full(4, 3), true));
  const int edges = static_cast<int>(g.edges.size());
  auto random_independent = [&](std::size_t size) {
    std::vector<int> order = iota_ids(edges);
    std::shuffle(order.begin(), order.end(), rng);
    FrameForest f(g);
    std::vector<int> out;
    for (int id : order) {
      if (out.size() == size) break;
      if (FrameForest::independent(f.classify(id))) {
        f.add(id);
        out.push_back(id);
      }
    }
    return out;
  };
  int checked = 0;
  while (checked < 100) {
    const auto small = random_independent(static_cast<std::size_t>(rng() % 7));
    const auto large = random_independent(static_cast<std::size_t>(rng() % 8));
    if (small.size() >= large.size()) continue;
    ++checked;
    bool extended = false;
    for (int e : large) {
      if (std::find(small.begin(), small.end(), e) != small.end()) continue;
      auto grown = small;
      grown.push_back(e);
      extended = extended || independent_set(g, grown);
    }
    CHECK(extended);
  }
}

TEST_CASE("combinatorial decisions") {
  BracingPattern tree(4, 3);
  for (int i = 1; i <= 4; ++i) tree.add(blue(i, 1));
  tree.add(red(1, 2));
  tree.add(red(1, 3));
  const auto e = combinatorial_rigidity_decision(GridSpec::uniform(4, 3, Norm::euclidean()), tree);
  CHECK(e.rigid());
  CHECK(e.rank == 6);

  const auto blocked = BracingPattern::from_braces(4, 4, {blue(1, 1), blue(2, 1), blue(1, 2), red(2, 2), blue(3, 3),
                                                          blue(4, 3), blue(3, 4), blue(4, 4)});
  CHECK_FALSE(combinatorial_rigidity_decision(GridSpec::uniform(4, 4, Norm::euclidean()), blocked).rigid());

  const auto fig1 = parse_spec(R"({"m":4,"n":3,"col_widths":[2,2,2,2],"row_heights":[1,1,1],"alpha":0.3,
      "norm":{"kind":"p","p":4},"bracing":["..xb","bb..","br.."]})");
  const auto d = combinatorial_rigidity_decision(fig1.spec, fig1.pattern);
  CHECK(d.rigid());
  CHECK(d.branch == "frame-matroid");
  CHECK(d.rank == 7);

  const GridSpec linf = GridSpec::uniform(2, 2, Norm::linf());
  const auto only_blue = BracingPattern::from_braces(2, 2, {blue(1, 1), red(1, 1), blue(2, 2), red(2, 2), blue(2, 1)});
  CHECK(combinatorial_rigidity_decision(linf, only_blue).rigid());
  const auto lacking = BracingPattern::from_braces(2, 2, {blue(1, 1), red(1, 1), blue(2, 2), blue(2, 1), red(1, 2)});
  CHECK_FALSE(combinatorial_rigidity_decision(linf, lacking).rigid());

  try {
    combinatorial_rigidity_decision(GridSpec::uniform(2, 2, Norm::linf(), std::numbers::pi / 4), only_blue);
    FAIL("expected UnsupportedConfiguration");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::UnsupportedConfiguration);
  }

  const auto exceptional = combinatorial_rigidity_decision(GridSpec::uniform(2, 2, Norm::p_norm(4)), BracingPattern::full(2, 2));
  CHECK_FALSE(exceptional.rigid());
  CHECK(exceptional.exceptional);
}

TEST_CASE("Euclidean closure") {
  BipartiteGraph path(2, 2);
  path.add(1, 1);
  path.add(2, 1);
  path.add(2, 2);
  const auto closed = euclidean_closure(path);
  CHECK(closed.has(1, 2));
  CHECK(closed.edge_count() == 4);

  BipartiteGraph tree(3, 3);
  tree.add(1, 1);
  tree.add(2, 1);
  tree.add(3, 1);
  tree.add(1, 2);
  tree.add(1, 3);
  CHECK(euclidean_closure(tree).edge_count() == 9);

  BipartiteGraph apart(2, 2);
  apart.add(1, 1);
  apart.add(2, 2);
  CHECK(euclidean_closure(apart) == apart);

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 4);
    const int n = 1 + static_cast<int>(rng() % 4);
    BipartiteGraph g(m, n);
    const int edges = static_cast<int>(rng() % 9);
    for (int e = 0; e < edges; ++e) g.add(1 + static_cast<int>(rng() % m), 1 + static_cast<int>(rng() % n));
    const auto c = euclidean_closure(g);
    CHECK(euclidean_closure(c) == c);
    CHECK(c.components() == g.components());
    for (int i = 1; i <= m; ++i) {
      for (int j = 1; j <= n; ++j) {
        if (g.has(i, j)) CHECK(c.has(i, j));
      }
    }
  }
}

TEST_CASE("greedy isostatic bracings") {
  const auto tree = greedy_isostatic_bracing(GridSpec::uniform(2, 2, Norm::euclidean()), 0);
  CHECK(tree.size() == 3);
  CHECK(BipartiteGraph::from_pattern(tree).connected_and_spanning());

  const GridSpec p4 = GridSpec::uniform(4, 3, Norm::p_norm(4), 0.3, 2, 1);
  for (std::uint64_t seed : {0ULL, 1ULL, 17ULL}) {
    const auto basis = greedy_isostatic_bracing(p4, seed);
    CHECK(basis.size() == 7);
    CHECK(combinatorial_rigidity_decision(p4, basis).rigid());
    CHECK(independent_forest_decision(build_braces_graph(p4, basis, GainMode::Numeric)).independent);
    for (const Brace& b : braces_list(basis)) {
      auto fewer = basis;
      fewer.remove(b);
      CHECK_FALSE(combinatorial_rigidity_decision(p4, fewer).rigid());
    }
    CHECK(greedy_isostatic_bracing(p4, seed) == basis);
  }
  CHECK(greedy_isostatic_bracing(p4) == greedy_isostatic_bracing(p4, std::nullopt));

  try {
    greedy_isostatic_bracing(GridSpec::uniform(2, 2, Norm::p_norm(4)), 0);
    FAIL("expected ExceptionalParameters");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::ExceptionalParameters);
  }
}
