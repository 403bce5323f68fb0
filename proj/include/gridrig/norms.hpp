#pragma once

#include <cmath>
#include <string>
#include <variant>

namespace gridrig {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double euclidean_length(Vec2 a) { return std::hypot(a.x, a.y); }
/// Counterclockwise quarter turn.
inline Vec2 rot90(Vec2 a) { return {-a.y, a.x}; }
inline Vec2 rotate(Vec2 a, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * a.x - s * a.y, s * a.x + c * a.y};
}

struct EuclideanNorm {
  friend bool operator==(const EuclideanNorm&, const EuclideanNorm&) = default;
};
struct PNorm {
  double p;
  friend bool operator==(const PNorm&, const PNorm&) = default;
};
/// (a|x|^p + b|y|^p)^(1/p)
struct WeightedPNorm {
  double p;
  double a;
  double b;
  friend bool operator==(const WeightedPNorm&, const WeightedPNorm&) = default;
};
struct LInfinityNorm {
  friend bool operator==(const LInfinityNorm&, const LInfinityNorm&) = default;
};

/// How the rigidity theory treats a norm.
enum class NormClass {
  Euclidean,             // scalar multiples of the Euclidean norm
  InnerProduct,          // other inner-product norms (weighted p = 2): 3-dim rigid motions
  SmoothStrictlyConvex,  // the non-Euclidean case: translations are the only rigid motions
  LInfinity,
};

class Norm {
 public:
  using Variant = std::variant<EuclideanNorm, PNorm, WeightedPNorm, LInfinityNorm>;

  static Norm euclidean() { return Norm(EuclideanNorm{}); }
  /// Throws InvalidNorm unless 1 < p < inf.
  static Norm p_norm(double p);
  /// Throws InvalidNorm unless 1 < p < inf and a, b > 0.
  static Norm weighted_p(double p, double a, double b);
  static Norm linf() { return Norm(LInfinityNorm{}); }

  const Variant& variant() const { return variant_; }
  NormClass norm_class() const;
  /// "euclidean", "p", "weighted_p" or "linf".
  std::string kind() const;
  std::string describe() const;

  friend bool operator==(const Norm&, const Norm&) = default;

 private:
  explicit Norm(Variant v) : variant_(v) {}
  Variant variant_;
};

/// Radial angle on the unit sphere, measured counterclockwise from the downward
/// radius; the standard polar angle of the sphere point is theta - pi/2.
class RadialAngle {
 public:
  explicit RadialAngle(double theta);
  double theta() const { return theta_; }
  /// Unit direction (sin theta, -cos theta) with exact zeros on the axes.
  Vec2 direction() const;

 private:
  double theta_;
};

double norm_value(const Norm& norm, Vec2 z);

/// Throws ZeroVector for z = 0 and NonSmoothPoint at l_inf corners.
Vec2 norm_gradient(const Norm& norm, Vec2 z);

/// Euclidean-unit tangent of the sphere through z, rot90 of the gradient.
/// For a bar with vector z, velocity differences parallel to this keep its
/// length fixed to first order.
Vec2 sphere_tangent(const Norm& norm, Vec2 z);

struct TangentDirection {
  Vec2 sphere_point;  // norm 1
  Vec2 direction;     // Euclidean unit
  double tau;         // angle of direction reduced to [0, pi)
};

TangentDirection tangent_direction(const Norm& norm, RadialAngle theta);

/// Invariance under a quarter turn, sampled over 360 directions.
bool is_four_fold_symmetric(const Norm& norm, double tol);

}  // namespace gridrig
