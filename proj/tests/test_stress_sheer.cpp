#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "gridrig/error.hpp"
#include "gridrig/oracle.hpp"
#include "gridrig/stress_sheer.hpp"

using namespace gridrig;
using std::numbers::pi;

namespace {

BracingPattern pattern_of(int m, int n, std::initializer_list<Brace> braces) {
  return BracingPattern::from_braces(m, n, braces);
}

constexpr Brace blue(int i, int j) { return {{i, j}, Colour::Blue}; }
constexpr Brace red(int i, int j) { return {{i, j}, Colour::Red}; }

}  // namespace

TEST_CASE("line tangents") {
  for (double alpha : {0.0, 0.4, 1.2}) {
    const LineTangents t = line_tangents(Norm::euclidean(), alpha);
    CHECK(t.u_x.x == doctest::Approx(std::cos(alpha)));
    CHECK(t.u_x.y == doctest::Approx(std::sin(alpha)));
    CHECK(t.u_y.x == doctest::Approx(-std::sin(alpha)));
    CHECK(t.u_y.y == doctest::Approx(std::cos(alpha)));
  }
  const LineTangents p4 = line_tangents(Norm::p_norm(4), 0.0);
  CHECK(p4.u_x == Vec2{1, 0});
  CHECK(p4.u_y == Vec2{0, 1});
  const LineTangents linf = line_tangents(Norm::linf(), 0.0);
  CHECK(linf.u_x == Vec2{1, 0});
  CHECK(linf.u_y == Vec2{0, 1});
  CHECK_THROWS_AS(line_tangents(Norm::linf(), pi / 4), Error);

  const LineTangents tilted = line_tangents(Norm::weighted_p(3, 1, 2), 0.9);
  CHECK(dot(tilted.u_x, rotate({1, 0}, 0.9)) > 0);
  CHECK(dot(tilted.u_y, rotate({0, 1}, 0.9)) > 0);
  CHECK(std::abs(cross(tilted.u_x, tilted.u_y)) > 0.1);
}

TEST_CASE("brace parameters") {
  for (double alpha : {0.0, 0.4, 1.2}) {
    const auto e = brace_parameters(Norm::euclidean(), alpha, 1, 1);
    CHECK(e.lambda == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e.lambda_prime == doctest::Approx(1.0).epsilon(1e-14));
  }
  const auto sq = brace_parameters(Norm::p_norm(4), 0.0, 1, 1);
  CHECK(sq.lambda == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sq.lambda_prime == doctest::Approx(1.0).epsilon(1e-14));
  const auto rect = brace_parameters(Norm::p_norm(4), 0.0, 2, 1);
  CHECK(rect.lambda == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(rect.lambda_prime == doctest::Approx(0.125).epsilon(1e-14));

  // Frozen from tests/oracles/brace_parameters.py (50-digit arithmetic).
  struct Case {
    Norm norm;
    double alpha, w, h, lambda, lambda_prime;
  };
  const Case cases[] = {
      {Norm::p_norm(4), 0.3, 2, 1, 0.034106879302612266, 0.82654577369604278},
      {Norm::p_norm(4), 0.3, 1, 1, 0.17714272670893017, 5.6451654469739385},
      {Norm::p_norm(1.5), 0.4, 1, 1, 2.1970854498952581, 0.4551484331424948},
      {Norm::p_norm(3), 1.1, 1, 1, 2.6650138965034834, 0.37523256494534865},
      {Norm::weighted_p(2, 1, 2), 0.3, 1, 1, 1.7210391857891916, 1.7210391857891916},
  };
  for (const Case& c : cases) {
    CAPTURE(c.norm.describe());
    CAPTURE(c.alpha);
    const auto bp = brace_parameters(c.norm, c.alpha, c.w, c.h);
    CHECK(bp.lambda == doctest::Approx(c.lambda).epsilon(1e-12));
    CHECK(bp.lambda_prime == doctest::Approx(c.lambda_prime).epsilon(1e-12));
  }
  CHECK_THROWS_AS(brace_parameters(Norm::linf(), 0.1, 1, 1), Error);
}

TEST_CASE("stress-sheer assembly") {
  const auto both = pattern_of(1, 1, {blue(1, 1), red(1, 1)});
  const StressSheerMatrix e = assemble_stress_sheer(GridSpec::uniform(1, 1, Norm::euclidean()), both);
  CHECK(e.euclidean);
  Eigen::MatrixXd expected(2, 2);
  expected << 1, -1, 1, -1;
  CHECK(e.dense() == expected);

  const StressSheerMatrix p4 = assemble_stress_sheer(GridSpec::uniform(1, 1, Norm::p_norm(4)), both);
  CHECK((p4.dense() - expected).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(numerical_rank(p4.dense(), 1e-9).rank == 1);

  GridSpec spec = GridSpec::uniform(3, 2, Norm::p_norm(4), 0.3, 2, 1);
  const auto p = pattern_of(3, 2, {red(2, 1), blue(3, 2)});
  const StressSheerMatrix ss = assemble_stress_sheer(spec, p);
  const auto bp = brace_parameters(spec.norm, 0.3, 2, 1);
  const Eigen::MatrixXd d = ss.dense();
  REQUIRE(d.rows() == 2);
  REQUIRE(d.cols() == 5);
  CHECK(d(0, 0) == 1.0);
  CHECK(d(0, 2 + 1) == doctest::Approx(-bp.lambda_prime));
  CHECK(d(1, 1) == 1.0);
  CHECK(d(1, 2 + 2) == doctest::Approx(-bp.lambda));
  CHECK((d.array() != 0).count() == 4);
}

TEST_CASE("synthetic six-cycle matrix") {
  // v1 w1 v2 w2 v3 w3 back to v1.
  const std::vector<Brace> cycle{blue(1, 1), red(2, 1), blue(2, 2), red(3, 2), blue(3, 3), red(1, 3)};
  const RationalMatrix a = synthetic_stress_sheer(3, 3, cycle, 2, 3);
  REQUIRE(a.size() == 6);
  CHECK(a[0][0] == 1);
  CHECK(a[0][3] == -2);
  CHECK(a[1][0] == 1);
  CHECK(a[1][4] == -3);
  CHECK(exact_rank(a) == 6);
  const RationalMatrix mono = synthetic_stress_sheer(3, 3, {blue(1, 1), blue(2, 1), blue(2, 2), blue(3, 2),
                                                            blue(3, 3), blue(1, 3)}, 2, 3);
  CHECK(exact_rank(mono) == 5);
}

TEST_CASE("rank decisions") {
  const auto single = rank_rigidity_decision(GridSpec::uniform(1, 1, Norm::euclidean()), pattern_of(1, 1, {blue(1, 1)}));
  CHECK(single.rigid());
  CHECK(single.rank == 1);
  CHECK(single.required == 1);

  const GridSpec squares = GridSpec::uniform(2, 2, Norm::p_norm(4));
  const auto full = rank_rigidity_decision(squares, BracingPattern::full(2, 2));
  CHECK_FALSE(full.rigid());
  CHECK(full.exceptional);
  CHECK(full.reason == "exceptional inclination");

  const GridSpec rect = GridSpec::uniform(2, 2, Norm::p_norm(4), 0.3, 2, 1);
  const auto forest = rank_rigidity_decision(rect, pattern_of(2, 2, {blue(1, 1), red(1, 1), blue(2, 1), blue(1, 2)}));
  CHECK(forest.rigid());
  CHECK(forest.rank == 4);
  CHECK(oracle_rigidity_decision(rect, pattern_of(2, 2, {blue(1, 1), red(1, 1), blue(2, 1), blue(1, 2)})).nullity == 2);
  CHECK_FALSE(forest.exceptional);
}

TEST_CASE("flex witnesses") {
  const GridSpec e21 = GridSpec::uniform(2, 1, Norm::euclidean());
  const auto w = flex_witness(e21, pattern_of(2, 1, {blue(1, 1)}));
  CHECK(w.sheer.s_horizontal[0] == doctest::Approx(0.0));
  CHECK(w.sheer.s_vertical[0] == doctest::Approx(0.0));
  CHECK(std::abs(w.sheer.s_vertical[1]) == doctest::Approx(1.0));

  const GridSpec squares = GridSpec::uniform(2, 2, Norm::p_norm(4));
  const auto ex = flex_witness(squares, BracingPattern::full(2, 2));
  for (double s : ex.sheer.flattened()) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));

  try {
    flex_witness(GridSpec::uniform(1, 1, Norm::euclidean()), pattern_of(1, 1, {blue(1, 1)}));
    FAIL("expected NoWitness");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::NoWitness);
  }
}

TEST_CASE("witness velocities annihilate the rigidity matrix") {
  const std::vector<GridSpec> specs{
      GridSpec::uniform(2, 2, Norm::euclidean(), 0.2, 1.5, 1),  GridSpec::uniform(2, 2, Norm::p_norm(4), 0.3, 2, 1),
      GridSpec::uniform(2, 2, Norm::p_norm(3), 0.7),            GridSpec::uniform(2, 2, Norm::weighted_p(2, 1, 3), 0.5),
      GridSpec::uniform(2, 2, Norm::weighted_p(4, 1, 2), 1.1),  GridSpec::uniform(2, 2, Norm::linf(), 0.1),
  };
  for (const GridSpec& spec : specs) {
    CAPTURE(spec.norm.describe());
    int flexible = 0;
    for (std::uint64_t code = 0; code < 256; code += 3) {
      const BracingPattern p = pattern_from_code(2, 2, code, false);
      if (rank_rigidity_decision(spec, p).rigid()) continue;
      ++flexible;
      const auto w = flex_witness(spec, p);
      const auto r = build_rigidity_matrix(build_framework(spec, p), spec.norm);
      CHECK(flex_residual(r, w.velocities) < 1e-8);
      const NormClass cls = spec.norm.norm_class();
      if (cls == NormClass::Euclidean) {
        CHECK_FALSE(is_constant_sheer(w.sheer, 1e-6));
      } else if (cls != NormClass::InnerProduct) {
        const auto flat = w.sheer.flattened();
        const bool nonzero = std::any_of(flat.begin(), flat.end(), [](double x) { return std::abs(x) > 1e-6; });
        CHECK(nonzero);
      }
    }
    CHECK(flexible > 0);
  }
}

TEST_CASE("brace functional vanishes exactly when the brace keeps its length") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  const std::vector<GridSpec> specs{GridSpec::uniform(3, 2, Norm::p_norm(4), 0.3, 2, 1),
                                    GridSpec::uniform(3, 2, Norm::p_norm(1.5), 1.0),
                                    GridSpec::uniform(3, 2, Norm::weighted_p(4, 1, 2), 0.6, 1, 1.5),
                                    GridSpec::uniform(3, 2, Norm::weighted_p(2, 1, 3), 0.5)};
  for (const GridSpec& spec : specs) {
    CAPTURE(spec.norm.describe());
    const LineTangents frame = line_tangents(spec.norm, spec.alpha);
    for (const Brace& b : braces_list(BracingPattern::full(3, 2), true)) {
      const auto p = pattern_of(3, 2, {b});
      const Eigen::VectorXd row = assemble_stress_sheer(spec, p).dense().row(0);
      const Eigen::MatrixXd r = build_rigidity_matrix(build_framework(spec, p), spec.norm);
      for (int trial = 0; trial < 5; ++trial) {
        Eigen::VectorXd s(5);
        for (int k = 0; k < 5; ++k) s(k) = normal(rng);
        const Eigen::VectorXd on_kernel = s - (row.dot(s) / row.squaredNorm()) * row;
        for (const auto& [field, in_kernel] : {std::pair{s, false}, std::pair{on_kernel, true}}) {
          std::vector<double> flat(field.data(), field.data() + field.size());
          const auto coeffs = unsheer(SheerField::from_flattened(3, 2, flat));
          const auto v = velocities_from_coefficients(spec, coeffs, frame);
          const Eigen::MatrixXd brace_row = r.bottomRows(1);
          const double residual = flex_residual(brace_row, v);
          if (in_kernel) {
            CHECK(residual < 1e-9);
          } else if (std::abs(row.dot(s)) > 1e-3) {
            CHECK(residual > 1e-9);
          }
          CHECK(flex_residual(r.topRows(r.rows() - 1), v) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("doubly braced cell flexes exactly at equal brace parameters") {
  const std::vector<Norm> norms{Norm::p_norm(3), Norm::p_norm(4), Norm::weighted_p(4, 1, 2)};
  const auto both = pattern_of(1, 1, {blue(1, 1), red(1, 1)});
  for (const Norm& norm : norms) {
    for (double alpha : {0.0, 0.3, 0.7, 1.2}) {
      CAPTURE(norm.describe());
      CAPTURE(alpha);
      const GridSpec spec = GridSpec::uniform(1, 1, norm, alpha);
      const auto bp = brace_parameters(norm, alpha, 1, 1);
      const bool equal = std::abs(bp.lambda - bp.lambda_prime) < 1e-9;
      CHECK(equal == !oracle_rigidity_decision(spec, both).rigid());
      CHECK(equal == !rank_rigidity_decision(spec, both).rigid());
    }
  }
}

TEST_CASE("exceptional inclinations") {
  const double step = pi / 360;
  // Squares: lambda * lambda' = 1 for p-norms, so the roots are where both equal 1.
  const auto squares = find_exceptional_inclinations(Norm::p_norm(4), 1, 1, step, 1e-12);
  CHECK_FALSE(squares.identically_exceptional);
  REQUIRE(squares.roots.size() == 2);
  CHECK(squares.roots[0] == doctest::Approx(0.0));
  CHECK(squares.roots[1] == doctest::Approx(pi / 4).epsilon(1e-12));

  const auto rect = find_exceptional_inclinations(Norm::p_norm(4), 2, 1, step, 1e-12);
  CHECK_FALSE(rect.identically_exceptional);
  REQUIRE_FALSE(rect.roots.empty());
  CHECK(rect.roots[0] == 0.0);

  CHECK(find_exceptional_inclinations(Norm::euclidean(), 2, 1, step, 1e-12).identically_exceptional);

  // Frozen from tests/oracles/brace_parameters.py: roots 0 and pi/4.
  const auto weighted = find_exceptional_inclinations(Norm::weighted_p(4, 1, 2), 1, 1, step, 1e-12);
  REQUIRE(weighted.roots.size() == 2);
  CHECK(weighted.roots[0] == doctest::Approx(0.0));
  CHECK(weighted.roots[1] == doctest::Approx(0.78539816339744831).epsilon(1e-12));
}

TEST_CASE("explicit flex of the doubly braced 2x1 cell") {
  const GridSpec spec = GridSpec::uniform(1, 1, Norm::p_norm(4), 0.0, 2, 1);
  const auto r = build_rigidity_matrix(build_framework(spec, BracingPattern::full(1, 1)), spec.norm);
  // Joints (0,0), (2,0), (0,1), (2,1).
  const std::vector<Vec2> v{{0, 0}, {0, 1}, {-0.125, 0}, {-0.125, 1}};
  CHECK(r.rows() == 6);
  CHECK(flex_residual(r, v) < 1e-12);
}
