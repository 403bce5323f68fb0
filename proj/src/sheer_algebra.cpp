#include "gridrig/sheer_algebra.hpp"

#include <algorithm>

namespace gridrig {

SheerField SheerField::zeros(int m, int n) {
  return {std::vector<double>(static_cast<std::size_t>(n), 0.0), std::vector<double>(static_cast<std::size_t>(m), 0.0)};
}

SheerField SheerField::ones(int m, int n) {
  return {std::vector<double>(static_cast<std::size_t>(n), 1.0), std::vector<double>(static_cast<std::size_t>(m), 1.0)};
}

std::vector<double> SheerField::flattened() const {
  std::vector<double> out(s_horizontal);
  out.insert(out.end(), s_vertical.begin(), s_vertical.end());
  return out;
}

SheerField SheerField::from_flattened(int m, int n, const std::vector<double>& values) {
  SheerField s;
  s.s_horizontal.assign(values.begin(), values.begin() + n);
  s.s_vertical.assign(values.begin() + n, values.begin() + n + m);
  return s;
}

SheerField sheer_map(const FlexCoefficients& coeffs) {
  SheerField s = SheerField::zeros(coeffs.m(), coeffs.n());
  for (std::size_t i = 1; i < coeffs.d_vertical.size(); ++i) {
    s.s_vertical[i - 1] = coeffs.d_vertical[i] - coeffs.d_vertical[i - 1];
  }
  for (std::size_t j = 1; j < coeffs.d_horizontal.size(); ++j) {
    s.s_horizontal[j - 1] = coeffs.d_horizontal[j - 1] - coeffs.d_horizontal[j];
  }
  return s;
}

FlexCoefficients rotation_field(int m, int n) {
  FlexCoefficients c;
  for (int j = 0; j <= n; ++j) c.d_horizontal.push_back(-static_cast<double>(j));
  for (int i = 0; i <= m; ++i) c.d_vertical.push_back(static_cast<double>(i));
  return c;
}

FlexCoefficients unsheer(const SheerField& s) {
  FlexCoefficients c;
  c.d_horizontal.assign(s.s_horizontal.size() + 1, 0.0);
  c.d_vertical.assign(s.s_vertical.size() + 1, 0.0);
  for (std::size_t i = 0; i < s.s_vertical.size(); ++i) c.d_vertical[i + 1] = c.d_vertical[i] + s.s_vertical[i];
  for (std::size_t j = 0; j < s.s_horizontal.size(); ++j) {
    c.d_horizontal[j + 1] = c.d_horizontal[j] - s.s_horizontal[j];
  }
  return c;
}

std::vector<Vec2> velocities_from_coefficients(const GridSpec& spec, const FlexCoefficients& coeffs,
                                               const LineTangents& frame) {
  const GridTopology t = build_topology(spec.m, spec.n);
  std::vector<Vec2> out(static_cast<std::size_t>(t.joint_count));
  for (int h = 0; h <= spec.n; ++h) {
    for (int v = 0; v <= spec.m; ++v) {
      out[static_cast<std::size_t>(t.joint(v, h))] =
          coeffs.d_horizontal[static_cast<std::size_t>(h)] * frame.u_x +
          coeffs.d_vertical[static_cast<std::size_t>(v)] * frame.u_y;
    }
  }
  return out;
}

bool is_constant_sheer(const SheerField& s, double tol) {
  const auto values = s.flattened();
  if (values.empty()) return true;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo <= tol;
}

}  // namespace gridrig
