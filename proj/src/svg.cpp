#include "gridrig/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace gridrig {

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

namespace {

struct Canvas {
  double min_x, max_y, unit, margin;
  double sx(double x) const { return margin + (x - min_x) * unit; }
  double sy(double y) const { return margin + (max_y - y) * unit; }
};

void line(std::ostringstream& out, const Canvas& c, Vec2 a, Vec2 b, const std::string& attrs) {
  out << "  <line x1=\"" << fixed6(c.sx(a.x)) << "\" y1=\"" << fixed6(c.sy(a.y)) << "\" x2=\"" << fixed6(c.sx(b.x))
      << "\" y2=\"" << fixed6(c.sy(b.y)) << "\"" << attrs << "/>\n";
}

}  // namespace

std::string render_svg(const GridSpec& spec, const BracingPattern& pattern,
                       const std::optional<std::vector<Vec2>>& velocities, const SvgOptions& options) {
  const GridTopology topology = build_topology(spec.m, spec.n);
  const std::vector<Vec2> joints = joint_placement(spec);

  std::vector<Vec2> extent = joints;
  if (velocities) {
    for (std::size_t k = 0; k < joints.size(); ++k) extent.push_back(joints[k] + options.arrow_scale * (*velocities)[k]);
  }
  double min_x = extent[0].x, max_x = extent[0].x, min_y = extent[0].y, max_y = extent[0].y;
  for (const Vec2& p : extent) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  const Canvas c{min_x, max_y, options.unit, options.margin};
  const double width = 2 * options.margin + (max_x - min_x) * options.unit;
  const double height = 2 * options.margin + (max_y - min_y) * options.unit;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed6(width) << "\" height=\"" << fixed6(height)
      << "\" viewBox=\"0.000000 0.000000 " << fixed6(width) << " " << fixed6(height) << "\">\n";
  if (velocities) {
    out << "<defs>\n"
           "  <marker id=\"head\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" "
           "orient=\"auto-start-reverse\"><path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#2e7d32\"/></marker>\n"
           "</defs>\n";
  }

  out << "<g id=\"bars\" stroke=\"#000000\" stroke-width=\"3.000000\" stroke-linecap=\"round\">\n";
  for (const Bar& bar : topology.bars) {
    line(out, c, joints[static_cast<std::size_t>(bar.a)], joints[static_cast<std::size_t>(bar.b)], "");
  }
  out << "</g>\n";

  out << "<g id=\"braces\" stroke-width=\"2.000000\">\n";
  for (const Brace& b : braces_list(pattern)) {
    const Bar bar = brace_bar(topology, b);
    const std::string attrs = b.colour == Colour::Blue
                                  ? " class=\"blue\" stroke=\"#1f4e9c\""
                                  : " class=\"red\" stroke=\"#b22222\" stroke-dasharray=\"8.000000 5.000000\"";
    line(out, c, joints[static_cast<std::size_t>(bar.a)], joints[static_cast<std::size_t>(bar.b)], attrs);
  }
  out << "</g>\n";

  out << "<g id=\"joints\" fill=\"#000000\">\n";
  for (const Vec2& p : joints) {
    out << "  <circle cx=\"" << fixed6(c.sx(p.x)) << "\" cy=\"" << fixed6(c.sy(p.y)) << "\" r=\"4.000000\"/>\n";
  }
  out << "</g>\n";

  if (velocities) {
    out << "<g id=\"flex\" stroke=\"#2e7d32\" stroke-width=\"2.000000\">\n";
    for (std::size_t k = 0; k < joints.size(); ++k) {
      const Vec2 v = (*velocities)[k];
      if (euclidean_length(v) < 1e-12) continue;
      line(out, c, joints[k], joints[k] + options.arrow_scale * v, " marker-end=\"url(#head)\"");
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace gridrig
