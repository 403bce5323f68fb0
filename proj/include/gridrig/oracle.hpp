#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gridrig/decision.hpp"
#include "gridrig/grid_model.hpp"
#include "gridrig/stress_sheer.hpp"

namespace gridrig {

struct Framework {
  std::vector<Vec2> joints;
  std::vector<Bar> bars;  // grid bars, then one bar per brace
};

Framework build_framework(const GridSpec& spec, const BracingPattern& pattern);

/// One row per bar, two columns per joint. Throws NonSmoothPoint when a bar
/// points at a corner of the unit sphere.
Eigen::MatrixXd build_rigidity_matrix(const Framework& framework, const Norm& norm);

/// 2 * joints - numerical rank.
int flex_space_dimension(const Eigen::MatrixXd& matrix, double tol);

/// Largest |R v| over the rows for a joint velocity field.
double flex_residual(const Eigen::MatrixXd& matrix, const std::vector<Vec2>& velocities);

/// Rigid when the nullity is 3 (Euclidean or inner-product norms) or 2.
RigidityDecision oracle_rigidity_decision(const GridSpec& spec, const BracingPattern& pattern,
                                          double tol = kDefaultTolerance);

struct MatroidMismatch {
  std::vector<int> rows;  // braces_list(full) indices
  bool linear_independent = false;
  bool matroid_independent = false;
};

struct MatroidReport {
  std::string matroid;  // "graphic" or "frame"
  int rows = 0;
  int rank = 0;
  std::uint64_t subsets = 0;
  std::uint64_t independent_sets = 0;
  std::uint64_t linear_bases = 0;
  std::uint64_t matroid_bases = 0;
  std::vector<MatroidMismatch> mismatches;
};

/// Compares linear independence of every subset of stress-sheer rows of
/// the maximal bracing with independence in the braces-graph matroid.
/// Throws TooLarge when there are more than max_rows rows.
MatroidReport matroid_cross_check(const GridSpec& spec, double tol = kDefaultTolerance, int max_rows = 12);

struct SweepRecord {
  std::uint64_t code = 0;
  std::vector<std::string> bracing;
  std::optional<Verdict> combinatorial;
  std::optional<Verdict> rank;
  std::optional<Verdict> oracle;
};

struct SweepReport {
  std::uint64_t patterns = 0;
  std::uint64_t rigid_combinatorial = 0;
  std::uint64_t rigid_rank = 0;
  std::uint64_t rigid_oracle = 0;
  std::uint64_t unavailable = 0;  // patterns where some method refused
  std::vector<SweepRecord> disagreements;
};

inline constexpr std::uint64_t kMaxSweepPatterns = 1'000'000;

/// Pattern number `code` over the cells in braces_list order: one base-4
/// digit per cell (bit 0 Blue, bit 1 Red), or one bit per cell when
/// blue_only.
BracingPattern pattern_from_code(int m, int n, std::uint64_t code, bool blue_only);

/// Runs all three decisions on every pattern of the grid in `spec`.
/// Throws TooLarge beyond kMaxSweepPatterns.
SweepReport exhaustive_pattern_sweep(const GridSpec& spec, double tol = kDefaultTolerance, bool blue_only = false);

}  // namespace gridrig
