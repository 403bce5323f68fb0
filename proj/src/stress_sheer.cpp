#include "gridrig/stress_sheer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gridrig/error.hpp"

namespace gridrig {

namespace {

constexpr double kParallelTolerance = 1e-12;

Vec2 oriented(Vec2 t, Vec2 reference) { return dot(t, reference) < 0.0 ? -t : t; }

Vec2 axis_x(double alpha) { return alpha == 0.0 ? Vec2{1.0, 0.0} : rotate({1.0, 0.0}, alpha); }
Vec2 axis_y(double alpha) { return alpha == 0.0 ? Vec2{0.0, 1.0} : rotate({0.0, 1.0}, alpha); }

Vec2 brace_vector(double alpha, double w, double h, Colour colour) {
  const Vec2 v = colour == Colour::Blue ? Vec2{w, -h} : Vec2{w, h};
  return alpha == 0.0 ? v : rotate(v, alpha);
}

// Normalise so each kernel vector is reported the same way on every run.
std::vector<double> canonical_direction(std::vector<double> v) {
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return v;
  double sign = 1.0;
  for (double x : v) {
    if (std::abs(x) > 1e-9 * scale) {
      sign = x > 0.0 ? 1.0 : -1.0;
      break;
    }
  }
  for (double& x : v) {
    x = sign * x / scale;
    if (std::abs(x) < 1e-15) x = 0.0;
  }
  return v;
}

}  // namespace

LineTangents line_tangents(const Norm& norm, double alpha) {
  // Horizontal lines slide along the tangent for the vertical bars joining
  // them, and vice versa.
  const Vec2 ex = axis_x(alpha);
  const Vec2 ey = axis_y(alpha);
  LineTangents frame{oriented(sphere_tangent(norm, ey), ex), oriented(sphere_tangent(norm, ex), ey)};
  if (std::abs(cross(frame.u_x, frame.u_y)) < kParallelTolerance) {
    throw Error(ErrorCode::DegenerateTangent, "line tangents are parallel");
  }
  return frame;
}

BraceRow brace_row(const Norm& norm, double alpha, double cell_w, double cell_h, Colour colour,
                   const LineTangents& frame) {
  const Vec2 t = sphere_tangent(norm, brace_vector(alpha, cell_w, cell_h, colour));
  const double det = cross(frame.u_x, frame.u_y);
  const double a = cross(t, frame.u_y) / det;  // t = a u_x + b u_y
  const double b = cross(frame.u_x, t) / det;
  const double scale = std::abs(a) + std::abs(b);
  if (std::abs(b) <= kParallelTolerance * scale) return {0.0, 1.0};
  if (std::abs(a) <= kParallelTolerance * scale) return {1.0, 0.0};
  // Blue: b s_x - a s_y = 0.  Red: b s_x + a s_y = 0.
  const double y = colour == Colour::Blue ? -a / b : a / b;
  return {1.0, y};
}

CellBraceParams brace_parameters(const Norm& norm, double alpha, double cell_w, double cell_h) {
  const LineTangents frame = line_tangents(norm, alpha);
  const BraceRow blue = brace_row(norm, alpha, cell_w, cell_h, Colour::Blue, frame);
  const BraceRow red = brace_row(norm, alpha, cell_w, cell_h, Colour::Red, frame);
  if (blue.is_pin() || red.is_pin()) {
    throw Error(ErrorCode::DegenerateTangent, "a brace tangent is parallel to a line tangent");
  }
  const CellBraceParams params{blue.gain(), red.gain()};
  if (!(params.lambda > 0.0 && params.lambda_prime > 0.0)) {
    throw Error(ErrorCode::DegenerateTangent, "brace parameters must be positive");
  }
  return params;
}

Eigen::MatrixXd StressSheerMatrix::dense() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out(static_cast<Eigen::Index>(r), x_column(braces[r])) = rows[r].x_entry;
    out(static_cast<Eigen::Index>(r), y_column(braces[r])) = rows[r].y_entry;
  }
  return out;
}

RationalMatrix StressSheerMatrix::exact() const {
  RationalMatrix out(rows.size(), std::vector<Rational>(static_cast<std::size_t>(cols()), Rational(0)));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out[r][static_cast<std::size_t>(x_column(braces[r]))] = Rational(rows[r].x_entry);
    out[r][static_cast<std::size_t>(y_column(braces[r]))] = Rational(rows[r].y_entry);
  }
  return out;
}

StressSheerMatrix assemble_stress_sheer(const GridSpec& spec, const BracingPattern& pattern) {
  StressSheerMatrix ss;
  ss.m = spec.m;
  ss.n = spec.n;
  ss.braces = braces_list(pattern);
  const NormClass cls = spec.norm.norm_class();
  if (cls == NormClass::Euclidean) {
    ss.euclidean = true;
    ss.rows.assign(ss.braces.size(), BraceRow{1.0, -1.0});
    return ss;
  }
  if (ss.braces.empty()) return ss;
  const LineTangents frame = line_tangents(spec.norm, spec.alpha);
  for (const auto& b : ss.braces) {
    const BraceRow row = brace_row(spec.norm, spec.alpha, spec.cell_width(b.cell.i), spec.cell_height(b.cell.j),
                                   b.colour, frame);
    if (cls != NormClass::LInfinity && (row.is_pin() || !(row.gain() > 0.0))) {
      throw Error(ErrorCode::DegenerateTangent, "brace tangent not strictly between the line tangents");
    }
    ss.rows.push_back(row);
  }
  return ss;
}

RationalMatrix synthetic_stress_sheer(int m, int n, const std::vector<Brace>& braces, const Rational& blue_gain,
                                      const Rational& red_gain) {
  RationalMatrix out(braces.size(), std::vector<Rational>(static_cast<std::size_t>(m + n), Rational(0)));
  for (std::size_t r = 0; r < braces.size(); ++r) {
    const auto& b = braces[r];
    out[r][static_cast<std::size_t>(b.cell.j - 1)] = 1;
    out[r][static_cast<std::size_t>(n + b.cell.i - 1)] = -(b.colour == Colour::Blue ? blue_gain : red_gain);
  }
  return out;
}

RigidityDecision rank_rigidity_decision(const GridSpec& spec, const BracingPattern& pattern, double tol) {
  const StressSheerMatrix ss = assemble_stress_sheer(spec, pattern);
  const NormClass cls = spec.norm.norm_class();
  const int ribbons = spec.m + spec.n;
  RigidityDecision d;
  d.method = "rank";
  if (cls == NormClass::Euclidean) {
    d.branch = "euclidean-exact";
    d.rank = exact_rank(ss.exact());
    d.required = ribbons - 1;
  } else {
    const NumericRank r = numerical_rank(ss.dense(), tol);
    d.rank = r.rank;
    d.threshold = r.threshold;
    if (cls == NormClass::InnerProduct) {
      d.branch = "inner-product";
      d.required = ribbons - 1;
    } else {
      d.branch = cls == NormClass::LInfinity ? "linf-well-positioned" : "non-euclidean";
      d.required = ribbons;
      try {
        const StressSheerMatrix full = assemble_stress_sheer(spec, BracingPattern::full(spec.m, spec.n));
        d.exceptional = numerical_rank(full.dense(), tol).rank < ribbons;
      } catch (const Error&) {
        d.exceptional = false;
      }
    }
  }
  d.verdict = d.rank >= d.required ? Verdict::Rigid : Verdict::Flexible;
  if (d.exceptional) {
    d.reason = "exceptional inclination";
  } else if (d.verdict == Verdict::Flexible) {
    d.reason = "stress-sheer rank deficient";
  }
  return d;
}

FlexWitness flex_witness(const GridSpec& spec, const BracingPattern& pattern, double tol) {
  const RigidityDecision decision = rank_rigidity_decision(spec, pattern, tol);
  if (decision.rigid()) throw Error(ErrorCode::NoWitness, "framework is infinitesimally rigid");

  const StressSheerMatrix ss = assemble_stress_sheer(spec, pattern);
  const Eigen::MatrixXd kernel = null_space(ss.dense(), tol);
  const auto cols = static_cast<Eigen::Index>(ss.cols());
  std::vector<double> chosen(static_cast<std::size_t>(cols), 0.0);

  const NormClass cls = spec.norm.norm_class();
  if (cls == NormClass::Euclidean || cls == NormClass::InnerProduct) {
    // Discard the rotation direction and keep the kernel vector furthest from it.
    Eigen::VectorXd rotation(cols);
    if (cls == NormClass::Euclidean) {
      rotation.setOnes();
    } else {
      Eigen::MatrixXd with_full = assemble_stress_sheer(spec, BracingPattern::full(spec.m, spec.n)).dense();
      rotation = null_space(with_full, tol).col(0);
    }
    rotation.normalize();
    Eigen::MatrixXd reduced = kernel - rotation * (rotation.transpose() * kernel);
    Eigen::Index best = 0;
    reduced.colwise().norm().maxCoeff(&best);
    Eigen::VectorXd k = reduced.col(best);
    // Gauge: the first horizontal ribbon carries no sheer.
    k -= (k(0) / rotation(0)) * rotation;
    for (Eigen::Index c = 0; c < cols; ++c) chosen[static_cast<std::size_t>(c)] = k(c);
  } else {
    for (Eigen::Index c = 0; c < cols; ++c) chosen[static_cast<std::size_t>(c)] = kernel(c, 0);
  }
  chosen = canonical_direction(chosen);

  FlexWitness w;
  w.sheer = SheerField::from_flattened(spec.m, spec.n, chosen);
  if (cls == NormClass::Euclidean) {
    // Rows are +-1 in sheer per unit height / width.
    for (int j = 1; j <= spec.n; ++j) w.sheer.s_horizontal[static_cast<std::size_t>(j - 1)] *= spec.cell_height(j);
    for (int i = 1; i <= spec.m; ++i) w.sheer.s_vertical[static_cast<std::size_t>(i - 1)] *= spec.cell_width(i);
  }
  w.coefficients = unsheer(w.sheer);
  w.velocities = velocities_from_coefficients(spec, w.coefficients, line_tangents(spec.norm, spec.alpha));
  return w;
}

ExceptionalScan find_exceptional_inclinations(const Norm& norm, double cell_w, double cell_h, double step,
                                              double tol) {
  if (!(step > 0.0)) throw Error(ErrorCode::MalformedDocument, "scan step must be positive");
  auto gap = [&](double alpha) {
    const CellBraceParams p = brace_parameters(norm, alpha, cell_w, cell_h);
    return p.lambda - p.lambda_prime;
  };

  std::vector<double> alphas;
  for (int k = 0;; ++k) {
    const double a = k * step;
    if (a >= std::numbers::pi / 2) break;
    alphas.push_back(a);
  }
  std::vector<double> values;
  values.reserve(alphas.size());
  for (double a : alphas) values.push_back(gap(a));

  ExceptionalScan scan;
  scan.identically_exceptional =
      std::all_of(values.begin(), values.end(), [tol](double g) { return std::abs(g) < tol; });
  if (scan.identically_exceptional) return scan;

  bool previous_was_root = false;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (std::abs(values[k]) < tol) {
      if (!previous_was_root) scan.roots.push_back(alphas[k]);
      previous_was_root = true;
      continue;
    }
    if (k + 1 < values.size() && std::abs(values[k + 1]) >= tol && (values[k] > 0.0) != (values[k + 1] > 0.0)) {
      double lo = alphas[k];
      double hi = alphas[k + 1];
      double g_lo = values[k];
      double mid = 0.5 * (lo + hi);
      double g_mid = gap(mid);
      for (int iter = 0; iter < 200 && std::abs(g_mid) >= tol && hi - lo > 1e-16; ++iter) {
        if ((g_mid > 0.0) == (g_lo > 0.0)) {
          lo = mid;
          g_lo = g_mid;
        } else {
          hi = mid;
        }
        mid = 0.5 * (lo + hi);
        g_mid = gap(mid);
      }
      if (std::abs(g_mid) < tol) scan.roots.push_back(mid);
    }
    previous_was_root = false;
  }
  return scan;
}

}  // namespace gridrig
