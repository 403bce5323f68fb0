#include "gridrig/norms.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <sstream>

#include "gridrig/error.hpp"

namespace gridrig {

namespace {

constexpr double kCornerTolerance = 1e-12;

// Coordinates below this are rounding residue of sin/cos at axis angles.
double snap(double c) { return std::abs(c) < 4.0 * std::numeric_limits<double>::epsilon() ? 0.0 : c; }

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

bool valid_exponent(double p) { return std::isfinite(p) && p > 1.0; }

}  // namespace

Norm Norm::p_norm(double p) {
  if (!valid_exponent(p)) {
    throw Error(ErrorCode::InvalidNorm, "p-norm exponent must satisfy 1 < p < inf");
  }
  return Norm(PNorm{p});
}

Norm Norm::weighted_p(double p, double a, double b) {
  if (!valid_exponent(p)) {
    throw Error(ErrorCode::InvalidNorm, "weighted p-norm exponent must satisfy 1 < p < inf");
  }
  if (!(std::isfinite(a) && a > 0.0 && std::isfinite(b) && b > 0.0)) {
    throw Error(ErrorCode::InvalidNorm, "weighted p-norm weights must be positive");
  }
  return Norm(WeightedPNorm{p, a, b});
}

NormClass Norm::norm_class() const {
  struct Visitor {
    NormClass operator()(const EuclideanNorm&) const { return NormClass::Euclidean; }
    NormClass operator()(const PNorm& n) const {
      return n.p == 2.0 ? NormClass::Euclidean : NormClass::SmoothStrictlyConvex;
    }
    NormClass operator()(const WeightedPNorm& n) const {
      if (n.p != 2.0) return NormClass::SmoothStrictlyConvex;
      return n.a == n.b ? NormClass::Euclidean : NormClass::InnerProduct;
    }
    NormClass operator()(const LInfinityNorm&) const { return NormClass::LInfinity; }
  };
  return std::visit(Visitor{}, variant_);
}

std::string Norm::kind() const {
  struct Visitor {
    std::string operator()(const EuclideanNorm&) const { return "euclidean"; }
    std::string operator()(const PNorm&) const { return "p"; }
    std::string operator()(const WeightedPNorm&) const { return "weighted_p"; }
    std::string operator()(const LInfinityNorm&) const { return "linf"; }
  };
  return std::visit(Visitor{}, variant_);
}

std::string Norm::describe() const {
  std::ostringstream out;
  if (const auto* n = std::get_if<PNorm>(&variant_)) {
    out << "l_" << n->p;
  } else if (const auto* w = std::get_if<WeightedPNorm>(&variant_)) {
    out << "weighted l_" << w->p << " (a=" << w->a << ", b=" << w->b << ")";
  } else {
    out << kind();
  }
  return out.str();
}

RadialAngle::RadialAngle(double theta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double t = std::fmod(theta, two_pi);
  if (t < 0.0) t += two_pi;
  if (t >= two_pi) t = 0.0;
  theta_ = t;
}

Vec2 RadialAngle::direction() const { return {snap(std::sin(theta_)), snap(-std::cos(theta_))}; }

double norm_value(const Norm& norm, Vec2 z) {
  const double scale = std::max(std::abs(z.x), std::abs(z.y));
  if (scale == 0.0) return 0.0;
  const double x = std::abs(z.x) / scale;
  const double y = std::abs(z.y) / scale;
  struct Visitor {
    double x, y;
    double operator()(const EuclideanNorm&) const { return std::hypot(x, y); }
    double operator()(const PNorm& n) const { return std::pow(std::pow(x, n.p) + std::pow(y, n.p), 1.0 / n.p); }
    double operator()(const WeightedPNorm& n) const {
      return std::pow(n.a * std::pow(x, n.p) + n.b * std::pow(y, n.p), 1.0 / n.p);
    }
    double operator()(const LInfinityNorm&) const { return 1.0; }
  };
  return scale * std::visit(Visitor{x, y}, norm.variant());
}

Vec2 norm_gradient(const Norm& norm, Vec2 z) {
  const double scale = std::max(std::abs(z.x), std::abs(z.y));
  if (scale == 0.0) throw Error(ErrorCode::ZeroVector, "gradient undefined at the origin");
  const Vec2 u{z.x / scale, z.y / scale};
  struct Visitor {
    Vec2 u;
    Vec2 operator()(const EuclideanNorm&) const {
      const double len = std::hypot(u.x, u.y);
      return {u.x / len, u.y / len};
    }
    Vec2 operator()(const PNorm& n) const { return weighted(n.p, 1.0, 1.0); }
    Vec2 operator()(const WeightedPNorm& n) const { return weighted(n.p, n.a, n.b); }
    Vec2 operator()(const LInfinityNorm&) const {
      const double ax = std::abs(u.x);
      const double ay = std::abs(u.y);
      if (std::abs(ax - ay) <= kCornerTolerance * std::max(ax, ay)) {
        throw Error(ErrorCode::NonSmoothPoint, "l_inf gradient undefined where |x| = |y|");
      }
      return ax > ay ? Vec2{sgn(u.x), 0.0} : Vec2{0.0, sgn(u.y)};
    }
    Vec2 weighted(double p, double a, double b) const {
      const double px = std::pow(std::abs(u.x), p - 1.0);
      const double py = std::pow(std::abs(u.y), p - 1.0);
      const double value = std::pow(a * px * std::abs(u.x) + b * py * std::abs(u.y), 1.0 / p);
      const double denom = std::pow(value, p - 1.0);
      return {a * sgn(u.x) * px / denom, b * sgn(u.y) * py / denom};
    }
  };
  return std::visit(Visitor{u}, norm.variant());
}

Vec2 sphere_tangent(const Norm& norm, Vec2 z) {
  const Vec2 t = rot90(norm_gradient(norm, z));
  const double len = euclidean_length(t);
  return {t.x / len, t.y / len};
}

TangentDirection tangent_direction(const Norm& norm, RadialAngle theta) {
  const Vec2 dir = theta.direction();
  const double value = norm_value(norm, dir);
  const Vec2 q{dir.x / value, dir.y / value};
  TangentDirection result{q, sphere_tangent(norm, q), 0.0};
  if (norm.norm_class() == NormClass::Euclidean) {
    result.tau = std::fmod(theta.theta(), std::numbers::pi);
    return result;
  }
  double tau = std::atan2(result.direction.y, result.direction.x);
  if (tau < 0.0) tau += std::numbers::pi;
  if (tau >= std::numbers::pi) tau -= std::numbers::pi;
  result.tau = tau;
  return result;
}

bool is_four_fold_symmetric(const Norm& norm, double tol) {
  for (int k = 0; k < 360; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / 360.0;
    const Vec2 z{std::cos(angle), std::sin(angle)};
    if (std::abs(norm_value(norm, rot90(z)) - norm_value(norm, z)) > tol) return false;
  }
  return true;
}

}  // namespace gridrig
