#include "gridrig/gain_graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <set>

#include "gridrig/error.hpp"
#include "gridrig/stress_sheer.hpp"

namespace gridrig {

int vertical_vertex(int i) { return i - 1; }
int horizontal_vertex(int m, int j) { return m + j - 1; }

namespace {

GainEdge make_edge(int m, const Brace& b) {
  GainEdge e;
  e.brace = b;
  e.v = vertical_vertex(b.cell.i);
  e.w = horizontal_vertex(m, b.cell.j);
  return e;
}

}  // namespace

BracesGainGraph build_braces_graph(const GridSpec& spec, const BracingPattern& pattern, GainMode mode) {
  const auto braces = braces_list(pattern);
  if (mode == GainMode::Synthetic) return synthetic_braces_graph(spec.m, spec.n, braces);

  BracesGainGraph g;
  g.m = spec.m;
  g.n = spec.n;
  g.mode = mode;
  const NormClass cls = spec.norm.norm_class();
  if (cls == NormClass::Euclidean) {
    for (const auto& b : braces) {
      GainEdge e = make_edge(spec.m, b);
      e.exact_gain = Rational(1);
      g.edges.push_back(e);
    }
    return g;
  }
  if (braces.empty()) return g;
  const LineTangents frame = line_tangents(spec.norm, spec.alpha);
  for (const auto& b : braces) {
    GainEdge e = make_edge(spec.m, b);
    const BraceRow row =
        brace_row(spec.norm, spec.alpha, spec.cell_width(b.cell.i), spec.cell_height(b.cell.j), b.colour, frame);
    if (row.pins_horizontal()) {
      e.pin = e.w;
    } else if (row.pins_vertical()) {
      e.pin = e.v;
    } else if (row.gain() > 0.0) {
      e.log_gain = std::log(row.gain());
    } else {
      throw Error(ErrorCode::DegenerateTangent, "brace parameter must be positive");
    }
    if (e.pin && cls != NormClass::LInfinity) {
      throw Error(ErrorCode::DegenerateTangent, "brace tangent parallel to a line tangent");
    }
    g.edges.push_back(e);
  }
  return g;
}

BracesGainGraph synthetic_braces_graph(int m, int n, const std::vector<Brace>& braces, const Rational& blue_gain,
                                       const Rational& red_gain) {
  BracesGainGraph g;
  g.m = m;
  g.n = n;
  g.mode = GainMode::Synthetic;
  for (const auto& b : braces) {
    GainEdge e = make_edge(m, b);
    const Rational& gain = b.colour == Colour::Blue ? blue_gain : red_gain;
    e.exact_gain = gain;
    e.log_gain = std::log(gain.convert_to<double>());
    g.edges.push_back(e);
  }
  return g;
}

CycleGain cycle_dependence(std::span<const int> cycle, const BracesGainGraph& graph, double tol) {
  if (cycle.size() < 2 || cycle.size() % 2 != 0) {
    throw Error(ErrorCode::NotACycle, "a cycle needs an even number (>= 2) of edges");
  }
  std::set<int> seen;
  for (int id : cycle) {
    if (id < 0 || static_cast<std::size_t>(id) >= graph.edges.size()) {
      throw Error(ErrorCode::NotACycle, "edge index out of range");
    }
    if (graph.edges[static_cast<std::size_t>(id)].pin) throw Error(ErrorCode::NotACycle, "half-edges close no cycle");
    if (!seen.insert(id).second) throw Error(ErrorCode::NotACycle, "edge repeated in cycle");
  }

  auto walk = [&](int start) -> std::optional<CycleGain> {
    CycleGain out;
    bool exact = true;
    Rational product = 1;
    int cur = start;
    for (int id : cycle) {
      const auto& e = graph.edges[static_cast<std::size_t>(id)];
      int sign;
      if (cur == e.v) {
        cur = e.w;
        sign = 1;
      } else if (cur == e.w) {
        cur = e.v;
        sign = -1;
      } else {
        return std::nullopt;
      }
      out.log_gain += sign * e.log_gain;
      if (e.exact_gain) {
        if (sign > 0) {
          product *= *e.exact_gain;
        } else {
          product /= *e.exact_gain;
        }
      } else {
        exact = false;
      }
    }
    if (cur != start) return std::nullopt;
    if (exact) out.exact_gain = product;
    return out;
  };

  const auto& first = graph.edges[static_cast<std::size_t>(cycle[0])];
  std::optional<CycleGain> result = walk(first.v);
  if (!result) result = walk(first.w);
  if (!result) throw Error(ErrorCode::NotACycle, "edges do not form a closed walk");
  result->dependent = (graph.exact() && result->exact_gain) ? *result->exact_gain == 1
                                                            : std::abs(result->log_gain) <= tol;
  return *result;
}

FrameForest::FrameForest(const BracesGainGraph& graph, double tol)
    : graph_(&graph),
      tol_(tol),
      parent_(static_cast<std::size_t>(graph.vertex_count())),
      offset_(static_cast<std::size_t>(graph.vertex_count())),
      size_(static_cast<std::size_t>(graph.vertex_count()), 1),
      cycled_(static_cast<std::size_t>(graph.vertex_count()), 0) {
  std::iota(parent_.begin(), parent_.end(), 0);
}

int FrameForest::find(int x) const {
  const auto ux = static_cast<std::size_t>(x);
  const int p = parent_[ux];
  if (p == x) return x;
  const int root = find(p);
  const auto up = static_cast<std::size_t>(p);
  offset_[ux].log += offset_[up].log;
  if (graph_->exact()) offset_[ux].exact *= offset_[up].exact;
  parent_[ux] = root;
  return root;
}

FrameForest::Potential FrameForest::potential(int x) const {
  const int root = find(x);
  if (root == x) return {};
  return offset_[static_cast<std::size_t>(x)];
}

FrameForest::Step FrameForest::classify(int id) const {
  const auto& e = graph_->edges[static_cast<std::size_t>(id)];
  if (e.pin) return cycled(*e.pin) ? Step::SecondCycle : Step::Pin;
  const int rv = find(e.v);
  const int rw = find(e.w);
  if (rv != rw) {
    return cycled_[static_cast<std::size_t>(rv)] && cycled_[static_cast<std::size_t>(rw)] ? Step::JoinsCycles
                                                                                          : Step::Tree;
  }
  const Potential pv = potential(e.v);
  const Potential pw = potential(e.w);
  bool balanced;
  if (graph_->exact() && e.exact_gain) {
    balanced = pv.exact * *e.exact_gain == pw.exact;
  } else {
    balanced = std::abs(pv.log + e.log_gain - pw.log) <= tol_;
  }
  if (balanced) return Step::BalancedCycle;
  return cycled_[static_cast<std::size_t>(rv)] ? Step::SecondCycle : Step::UnbalancedCycle;
}

FrameForest::Step FrameForest::add(int id) {
  const Step step = classify(id);
  const auto& e = graph_->edges[static_cast<std::size_t>(id)];
  switch (step) {
    case Step::Pin:
      cycled_[static_cast<std::size_t>(find(*e.pin))] = 1;
      ++rank_;
      break;
    case Step::UnbalancedCycle:
      cycled_[static_cast<std::size_t>(find(e.v))] = 1;
      ++rank_;
      break;
    case Step::Tree:
    case Step::JoinsCycles: {
      const Potential pv = potential(e.v);
      const Potential pw = potential(e.w);
      int rv = find(e.v);
      int rw = find(e.w);
      Potential link;  // offset of the attached root
      int child;
      int root;
      if (size_[static_cast<std::size_t>(rv)] >= size_[static_cast<std::size_t>(rw)]) {
        root = rv;
        child = rw;
        link.log = pv.log + e.log_gain - pw.log;
        if (graph_->exact() && e.exact_gain) link.exact = pv.exact * *e.exact_gain / pw.exact;
      } else {
        root = rw;
        child = rv;
        link.log = pw.log - e.log_gain - pv.log;
        if (graph_->exact() && e.exact_gain) link.exact = pw.exact / (*e.exact_gain * pv.exact);
      }
      parent_[static_cast<std::size_t>(child)] = root;
      offset_[static_cast<std::size_t>(child)] = link;
      size_[static_cast<std::size_t>(root)] += size_[static_cast<std::size_t>(child)];
      cycled_[static_cast<std::size_t>(root)] |= cycled_[static_cast<std::size_t>(child)];
      if (step == Step::Tree) ++rank_;
      break;
    }
    case Step::BalancedCycle:
    case Step::SecondCycle:
      break;
  }
  return step;
}

std::string_view to_string(FrameForest::Step s) {
  switch (s) {
    case FrameForest::Step::Tree: return "tree";
    case FrameForest::Step::UnbalancedCycle: return "unbalanced cycle";
    case FrameForest::Step::Pin: return "pin";
    case FrameForest::Step::BalancedCycle: return "balanced cycle";
    case FrameForest::Step::SecondCycle: return "second cycle";
    case FrameForest::Step::JoinsCycles: return "joins two cycled components";
  }
  return "unknown";
}

namespace {

using Adjacency = std::vector<std::vector<std::pair<int, int>>>;  // (neighbour, edge)

std::vector<int> tree_path(const Adjacency& adj, int from, int to) {
  std::vector<std::pair<int, int>> prev(adj.size(), {-1, -1});
  std::vector<std::uint8_t> visited(adj.size(), 0);
  std::queue<int> queue;
  queue.push(from);
  visited[static_cast<std::size_t>(from)] = 1;
  while (!queue.empty()) {
    const int x = queue.front();
    queue.pop();
    if (x == to) break;
    for (auto [y, edge] : adj[static_cast<std::size_t>(x)]) {
      if (visited[static_cast<std::size_t>(y)]) continue;
      visited[static_cast<std::size_t>(y)] = 1;
      prev[static_cast<std::size_t>(y)] = {x, edge};
      queue.push(y);
    }
  }
  std::vector<int> path;
  for (int x = to; x != from;) {
    const auto [p, edge] = prev[static_cast<std::size_t>(x)];
    if (p < 0) return {};
    path.push_back(edge);
    x = p;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<int> closed_cycle(const BracesGainGraph& g, const Adjacency& adj, int id) {
  const auto& e = g.edges[static_cast<std::size_t>(id)];
  std::vector<int> cycle{id};
  if (e.pin) return cycle;
  const auto path = tree_path(adj, e.w, e.v);
  cycle.insert(cycle.end(), path.begin(), path.end());
  return cycle;
}

}  // namespace

ForestCertificate independent_forest_decision(const BracesGainGraph& graph, double tol) {
  ForestCertificate cert;
  FrameForest forest(graph, tol);
  Adjacency adj(static_cast<std::size_t>(graph.vertex_count()));
  std::vector<int> closers;

  for (int id = 0; id < static_cast<int>(graph.edges.size()); ++id) {
    const auto& e = graph.edges[static_cast<std::size_t>(id)];
    const auto step = forest.classify(id);
    if (step == FrameForest::Step::Tree) {
      adj[static_cast<std::size_t>(e.v)].push_back({e.w, id});
      adj[static_cast<std::size_t>(e.w)].push_back({e.v, id});
    } else if (step == FrameForest::Step::UnbalancedCycle || step == FrameForest::Step::Pin) {
      closers.push_back(id);
    } else if (cert.independent) {
      cert.independent = false;
      cert.offence = std::string(to_string(step));
      cert.offending = step == FrameForest::Step::JoinsCycles ? std::vector<int>{id} : closed_cycle(graph, adj, id);
    }
    forest.add(id);
  }

  std::map<int, std::size_t> by_root;
  for (int x = 0; x < graph.vertex_count(); ++x) {
    const int root = forest.find(x);
    auto [it, inserted] = by_root.try_emplace(root, cert.components.size());
    if (inserted) cert.components.emplace_back();
    cert.components[it->second].vertices.push_back(x);
  }
  for (int id = 0; id < static_cast<int>(graph.edges.size()); ++id) {
    const auto& e = graph.edges[static_cast<std::size_t>(id)];
    cert.components[by_root.at(forest.find(e.pin ? *e.pin : e.v))].edges.push_back(id);
  }
  for (int id : closers) {
    const auto& e = graph.edges[static_cast<std::size_t>(id)];
    auto& comp = cert.components[by_root.at(forest.find(e.pin ? *e.pin : e.v))];
    if (!comp.cycle.empty()) continue;
    comp.cycle = closed_cycle(graph, adj, id);
    comp.pinned = e.pin.has_value();
    if (!comp.pinned) comp.cycle_gain = cycle_dependence(comp.cycle, graph, tol);
  }
  return cert;
}

int frame_rank(const BracesGainGraph& graph, double tol) {
  FrameForest forest(graph, tol);
  for (int id = 0; id < static_cast<int>(graph.edges.size()); ++id) forest.add(id);
  return forest.rank();
}

BipartiteGraph BipartiteGraph::from_pattern(const BracingPattern& pattern) {
  BipartiteGraph g(pattern.m(), pattern.n());
  for (const auto& b : braces_list(pattern)) g.add(b.cell.i, b.cell.j);
  return g;
}

int BipartiteGraph::edge_count() const {
  return static_cast<int>(std::count(adj_.begin(), adj_.end(), std::uint8_t{1}));
}

std::vector<int> BipartiteGraph::components() const {
  const int total = m_ + n_;
  std::vector<int> label(static_cast<std::size_t>(total), -1);
  int next = 0;
  for (int s = 0; s < total; ++s) {
    if (label[static_cast<std::size_t>(s)] >= 0) continue;
    std::queue<int> queue;
    queue.push(s);
    label[static_cast<std::size_t>(s)] = next;
    while (!queue.empty()) {
      const int x = queue.front();
      queue.pop();
      auto visit = [&](int y) {
        if (label[static_cast<std::size_t>(y)] < 0) {
          label[static_cast<std::size_t>(y)] = next;
          queue.push(y);
        }
      };
      if (x < m_) {
        for (int j = 1; j <= n_; ++j) {
          if (has(x + 1, j)) visit(m_ + j - 1);
        }
      } else {
        for (int i = 1; i <= m_; ++i) {
          if (has(i, x - m_ + 1)) visit(i - 1);
        }
      }
    }
    ++next;
  }
  return label;
}

bool BipartiteGraph::connected_and_spanning() const {
  const auto label = components();
  return std::all_of(label.begin(), label.end(), [](int c) { return c == 0; });
}

BipartiteGraph euclidean_closure(BipartiteGraph g) {
  for (bool changed = true; changed;) {
    changed = false;
    for (int v1 = 1; v1 <= g.m(); ++v1) {
      for (int w2 = 1; w2 <= g.n(); ++w2) {
        if (g.has(v1, w2)) continue;
        bool found = false;
        for (int w1 = 1; w1 <= g.n() && !found; ++w1) {
          if (!g.has(v1, w1)) continue;
          for (int v2 = 1; v2 <= g.m() && !found; ++v2) found = g.has(v2, w1) && g.has(v2, w2);
        }
        if (found) {
          g.add(v1, w2);
          changed = true;
        }
      }
    }
  }
  return g;
}

namespace {

bool linf_axis_squares(const GridSpec& spec) {
  return spec.norm.norm_class() == NormClass::LInfinity && spec.alpha == 0.0 && spec.has_congruent_square_cells();
}

}  // namespace

RigidityDecision combinatorial_rigidity_decision(const GridSpec& spec, const BracingPattern& pattern, double tol) {
  RigidityDecision d;
  d.method = "combinatorial";
  const int vertices = spec.m + spec.n;
  const NormClass cls = spec.norm.norm_class();

  if (cls == NormClass::Euclidean || cls == NormClass::InnerProduct) {
    const auto g = BipartiteGraph::from_pattern(pattern);
    const auto label = g.components();
    const int count = label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
    d.branch = "connected-spanning";
    d.rank = vertices - count;
    d.required = vertices - 1;
    d.verdict = count == 1 ? Verdict::Rigid : Verdict::Flexible;
    if (!d.rigid()) d.reason = "braces graph not connected and spanning";
    return d;
  }

  if (linf_axis_squares(spec)) {
    d.branch = "linf-blue-red-incidence";
    d.required = vertices;
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(vertices), 0);
    for (const auto& b : braces_list(pattern)) {
      const auto bit = static_cast<std::uint8_t>(b.colour == Colour::Blue ? 1 : 2);
      seen[static_cast<std::size_t>(vertical_vertex(b.cell.i))] |= bit;
      seen[static_cast<std::size_t>(horizontal_vertex(spec.m, b.cell.j))] |= bit;
    }
    d.rank = static_cast<int>(std::count(seen.begin(), seen.end(), std::uint8_t{3}));
    d.verdict = d.rank == vertices ? Verdict::Rigid : Verdict::Flexible;
    if (!d.rigid()) d.reason = "a ribbon lacks a brace of each colour";
    return d;
  }

  BracesGainGraph graph;
  try {
    graph = build_braces_graph(spec, pattern, GainMode::Numeric);
  } catch (const Error& e) {
    if (cls == NormClass::LInfinity) {
      throw Error(ErrorCode::UnsupportedConfiguration,
                  "l_inf grid is neither axis-aligned with square cells nor well-positioned");
    }
    throw;
  }
  d.branch = cls == NormClass::LInfinity ? "linf-well-positioned" : "frame-matroid";
  d.rank = frame_rank(graph, tol);
  d.required = vertices;
  d.verdict = d.rank == vertices ? Verdict::Rigid : Verdict::Flexible;
  try {
    const auto full = build_braces_graph(spec, BracingPattern::full(spec.m, spec.n), GainMode::Numeric);
    d.exceptional = frame_rank(full, tol) < vertices;
  } catch (const Error&) {
    d.exceptional = false;
  }
  if (d.exceptional) {
    d.reason = "exceptional inclination";
  } else if (!d.rigid()) {
    d.reason = "some component of the braces graph has no unbalanced cycle";
  }
  return d;
}

BracingPattern greedy_isostatic_bracing(const GridSpec& spec, std::optional<std::uint64_t> seed, double tol) {
  const BracingPattern full = BracingPattern::full(spec.m, spec.n);
  std::vector<int> order(braces_list(full, true).size());
  std::iota(order.begin(), order.end(), 0);
  if (seed) {
    std::mt19937_64 engine(*seed);
    for (std::size_t k = order.size(); k > 1; --k) {
      std::swap(order[k - 1], order[static_cast<std::size_t>(engine() % k)]);
    }
  }

  const int vertices = spec.m + spec.n;
  const NormClass cls = spec.norm.norm_class();
  if (cls == NormClass::LInfinity && linf_axis_squares(spec)) {
    throw Error(ErrorCode::UnsupportedConfiguration, "axis-aligned l_inf squares have no bracing matroid");
  }
  BracesGainGraph graph;
  if (cls == NormClass::Euclidean || cls == NormClass::InnerProduct) {
    // Graphic matroid: all gains 1, so every cycle is balanced.
    graph = synthetic_braces_graph(spec.m, spec.n, braces_list(full, true), 1, 1);
  } else {
    graph = build_braces_graph(spec, full, GainMode::Numeric);
  }
  const int target = (cls == NormClass::Euclidean || cls == NormClass::InnerProduct) ? vertices - 1 : vertices;

  FrameForest forest(graph, tol);
  BracingPattern out(spec.m, spec.n);
  for (int id : order) {
    if (FrameForest::independent(forest.classify(id))) {
      forest.add(id);
      out.add(graph.edges[static_cast<std::size_t>(id)].brace);
    }
  }
  if (forest.rank() < target) {
    throw Error(ErrorCode::ExceptionalParameters, "brace parameters admit no rigid bracing (lambda = lambda')");
  }
  return out;
}

}  // namespace gridrig
