#pragma once

#include <vector>

#include "gridrig/grid_model.hpp"

namespace gridrig {

/// Coefficients of the line flexes of the unbraced grid: every joint on a
/// horizontal line moves by d_horizontal[h] * u_x, every joint on a vertical
/// line by d_vertical[v] * u_y.
struct FlexCoefficients {
  std::vector<double> d_horizontal;  // n + 1, bottom to top
  std::vector<double> d_vertical;    // m + 1, left to right

  int m() const { return static_cast<int>(d_vertical.size()) - 1; }
  int n() const { return static_cast<int>(d_horizontal.size()) - 1; }
  friend bool operator==(const FlexCoefficients&, const FlexCoefficients&) = default;
};

/// One sheer value per ribbon.
struct SheerField {
  std::vector<double> s_horizontal;  // n, horizontal ribbon j at index j-1
  std::vector<double> s_vertical;    // m

  static SheerField zeros(int m, int n);
  static SheerField ones(int m, int n);
  int m() const { return static_cast<int>(s_vertical.size()); }
  int n() const { return static_cast<int>(s_horizontal.size()); }
  /// Horizontal entries then vertical, the stress-sheer column order.
  std::vector<double> flattened() const;
  static SheerField from_flattened(int m, int n, const std::vector<double>& values);
  friend bool operator==(const SheerField&, const SheerField&) = default;
};

/// Unit tangent velocities of the line flexes.
struct LineTangents {
  Vec2 u_x;  // for horizontal lines
  Vec2 u_y;  // for vertical lines
};

/// Vertical ribbons take the right line positively, horizontal ribbons the
/// lower line.
SheerField sheer_map(const FlexCoefficients& coeffs);

/// Infinitesimal rotation of the unit grid about its south-west joint.
FlexCoefficients rotation_field(int m, int n);

/// Right inverse of sheer_map with d_vertical[0] = d_horizontal[0] = 0.
FlexCoefficients unsheer(const SheerField& s);

std::vector<Vec2> velocities_from_coefficients(const GridSpec& spec, const FlexCoefficients& coeffs,
                                               const LineTangents& frame);

bool is_constant_sheer(const SheerField& s, double tol);

}  // namespace gridrig
