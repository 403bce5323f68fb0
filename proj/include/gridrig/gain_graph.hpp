#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridrig/decision.hpp"
#include "gridrig/grid_model.hpp"
#include "gridrig/linalg.hpp"

namespace gridrig {

/// |log gain| at or below this counts as a balanced cycle.
inline constexpr double kBalanceTolerance = 1e-9;

enum class GainMode {
  Numeric,    // gains are the brace parameters of the grid
  Synthetic,  // formal exact gains: 2 on Blue edges, 3 on Red edges
};

/// A brace as an edge v_i -> w_j. Vertices 0..m-1 are the vertical ribbons
/// v_1..v_m, vertices m..m+n-1 the horizontal ribbons w_1..w_n.
struct GainEdge {
  Brace brace;
  int v = 0;
  int w = 0;
  double log_gain = 0.0;
  std::optional<Rational> exact_gain;
  /// Set when the brace functional only constrains one ribbon (l_inf); the
  /// edge then acts as a half-edge at this vertex.
  std::optional<int> pin;
};

struct BracesGainGraph {
  int m = 0;
  int n = 0;
  GainMode mode = GainMode::Numeric;
  std::vector<GainEdge> edges;  // braces_list order

  int vertex_count() const { return m + n; }
  bool exact() const { return mode == GainMode::Synthetic; }
};

int vertical_vertex(int i);
int horizontal_vertex(int m, int j);

BracesGainGraph build_braces_graph(const GridSpec& spec, const BracingPattern& pattern, GainMode mode);

/// Graph over explicit braces with exact gains (defaults are the synthetic 2 and 3).
BracesGainGraph synthetic_braces_graph(int m, int n, const std::vector<Brace>& braces, const Rational& blue_gain = 2,
                                       const Rational& red_gain = 3);

struct CycleGain {
  bool dependent = false;
  double log_gain = 0.0;
  std::optional<Rational> exact_gain;
};

/// Gain of a closed walk given as edge indices, each edge counted with
/// exponent +1 when traversed v -> w and -1 otherwise. Throws NotACycle.
CycleGain cycle_dependence(std::span<const int> cycle, const BracesGainGraph& graph, double tol = kBalanceTolerance);

/// Incremental frame-matroid state: union-find with gain potentials, so a
/// new edge inside a component closes a cycle whose gain is the potential
/// mismatch.
class FrameForest {
 public:
  enum class Step {
    Tree,             // joins two components, at most one of them cycled
    UnbalancedCycle,  // first cycle of its component, with gain
    Pin,              // first half-edge of its component
    BalancedCycle,    // dependent
    SecondCycle,      // dependent: component already had a cycle or pin
    JoinsCycles,      // dependent: both components already cycled
  };

  FrameForest(const BracesGainGraph& graph, double tol = kBalanceTolerance);

  /// Classifies edge `id` against the current state without adding it.
  Step classify(int id) const;
  /// Adds edge `id` and returns how it was classified.
  Step add(int id);

  static bool independent(Step s) { return s == Step::Tree || s == Step::UnbalancedCycle || s == Step::Pin; }

  int find(int x) const;
  bool cycled(int vertex) const { return cycled_[static_cast<std::size_t>(find(vertex))]; }
  /// Frame matroid rank of the edges added so far.
  int rank() const { return rank_; }

 private:
  struct Potential {
    double log = 0.0;
    Rational exact = 1;
  };
  Potential potential(int x) const;  // gain from the root of x to x

  const BracesGainGraph* graph_;
  double tol_;
  mutable std::vector<int> parent_;
  mutable std::vector<Potential> offset_;
  std::vector<int> size_;
  std::vector<std::uint8_t> cycled_;
  int rank_ = 0;
};

std::string_view to_string(FrameForest::Step s);

struct ForestComponent {
  std::vector<int> vertices;
  std::vector<int> edges;
  std::vector<int> cycle;  // closed walk, or the single pin edge
  bool pinned = false;
  std::optional<CycleGain> cycle_gain;
};

struct ForestCertificate {
  bool independent = true;
  std::vector<ForestComponent> components;
  std::vector<int> offending;  // edges of the first dependency found
  std::string offence;
};

ForestCertificate independent_forest_decision(const BracesGainGraph& graph, double tol = kBalanceTolerance);

/// Frame matroid rank of the whole edge set.
int frame_rank(const BracesGainGraph& graph, double tol = kBalanceTolerance);

RigidityDecision combinatorial_rigidity_decision(const GridSpec& spec, const BracingPattern& pattern,
                                                 double tol = kBalanceTolerance);

/// Braced cells as a simple bipartite graph on vertical (i) and horizontal (j) ribbons.
class BipartiteGraph {
 public:
  BipartiteGraph(int m, int n) : m_(m), n_(n), adj_(static_cast<std::size_t>(m * n), 0) {}
  static BipartiteGraph from_pattern(const BracingPattern& pattern);

  int m() const { return m_; }
  int n() const { return n_; }
  bool has(int i, int j) const { return adj_[idx(i, j)] != 0; }
  void add(int i, int j) { adj_[idx(i, j)] = 1; }
  int edge_count() const;
  /// Component label per vertex (vertical ribbons first).
  std::vector<int> components() const;
  bool connected_and_spanning() const;

  friend bool operator==(const BipartiteGraph&, const BipartiteGraph&) = default;

 private:
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>((j - 1) * m_ + (i - 1)); }
  int m_;
  int n_;
  std::vector<std::uint8_t> adj_;
};

/// Adds (v1, w2) whenever (v1, w1), (v2, w1), (v2, w2) are present, to a fixpoint.
BipartiteGraph euclidean_closure(BipartiteGraph g);

/// Greedy basis of the bracing matroid. Candidates run row-major, Blue
/// before Red, shuffled when a seed is given. Throws ExceptionalParameters
/// when no rigid bracing exists.
BracingPattern greedy_isostatic_bracing(const GridSpec& spec, std::optional<std::uint64_t> seed = std::nullopt,
                                        double tol = kBalanceTolerance);

}  // namespace gridrig
