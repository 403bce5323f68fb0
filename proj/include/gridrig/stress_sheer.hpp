#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "gridrig/decision.hpp"
#include "gridrig/grid_model.hpp"
#include "gridrig/linalg.hpp"
#include "gridrig/sheer_algebra.hpp"

namespace gridrig {

inline constexpr double kDefaultTolerance = 1e-9;

/// Line flex velocities for inclination alpha, oriented along the positive
/// grid directions. Throws NonSmoothPoint when a tangent is undefined.
LineTangents line_tangents(const Norm& norm, double alpha);

struct CellBraceParams {
  double lambda;        // Blue
  double lambda_prime;  // Red
};

/// Solves u_b = lambda u_x + u_y and u_b' = -lambda' u_x + u_y for a
/// w x h cell. Throws NonSmoothPoint, or DegenerateTangent when a brace
/// tangent is parallel to u_x or u_y (always the case for l_inf).
CellBraceParams brace_parameters(const Norm& norm, double alpha, double cell_w, double cell_h);

/// A brace functional restricted to its two ribbons:
/// f_b(s) = x_entry * s(horizontal ribbon) + y_entry * s(vertical ribbon).
/// Ordinary braces have x_entry = 1 and y_entry = -gain. Under l_inf the
/// functional pins a single ribbon: (1, 0) or (0, 1).
struct BraceRow {
  double x_entry = 1.0;
  double y_entry = -1.0;

  bool pins_horizontal() const { return y_entry == 0.0; }
  bool pins_vertical() const { return x_entry == 0.0; }
  bool is_pin() const { return pins_horizontal() || pins_vertical(); }
  double gain() const { return -y_entry / x_entry; }
};

BraceRow brace_row(const Norm& norm, double alpha, double cell_w, double cell_h, Colour colour,
                   const LineTangents& frame);

/// One row per brace (braces_list order); columns are the n horizontal
/// ribbons followed by the m vertical ribbons.
struct StressSheerMatrix {
  int m = 0;
  int n = 0;
  bool euclidean = false;  // rows are exactly (+1, -1) in width/height-normalised sheer
  std::vector<Brace> braces;
  std::vector<BraceRow> rows;

  int cols() const { return m + n; }
  int x_column(const Brace& b) const { return b.cell.j - 1; }
  int y_column(const Brace& b) const { return n + b.cell.i - 1; }
  Eigen::MatrixXd dense() const;
  /// Exact copy of the (binary64) entries.
  RationalMatrix exact() const;
};

StressSheerMatrix assemble_stress_sheer(const GridSpec& spec, const BracingPattern& pattern);

/// Rows with formal gains: blue_gain for Blue braces and red_gain for Red.
RationalMatrix synthetic_stress_sheer(int m, int n, const std::vector<Brace>& braces, const Rational& blue_gain,
                                      const Rational& red_gain);

RigidityDecision rank_rigidity_decision(const GridSpec& spec, const BracingPattern& pattern,
                                        double tol = kDefaultTolerance);

struct FlexWitness {
  SheerField sheer;
  FlexCoefficients coefficients;
  std::vector<Vec2> velocities;  // indexed as GridTopology::joint
};

/// Non-trivial kernel element of the stress-sheer matrix with its line
/// coefficients and joint velocities. Throws NoWitness when rigid.
FlexWitness flex_witness(const GridSpec& spec, const BracingPattern& pattern, double tol = kDefaultTolerance);

struct ExceptionalScan {
  bool identically_exceptional = false;
  std::vector<double> roots;  // inclinations in [0, pi/2) with lambda = lambda'
};

ExceptionalScan find_exceptional_inclinations(const Norm& norm, double cell_w, double cell_h, double step,
                                              double tol);

}  // namespace gridrig
