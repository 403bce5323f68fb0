#include "gridrig/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "gridrig/error.hpp"
#include "gridrig/gain_graph.hpp"
#include "gridrig/linalg.hpp"

namespace gridrig {

Framework build_framework(const GridSpec& spec, const BracingPattern& pattern) {
  const GridTopology topology = build_topology(spec.m, spec.n);
  Framework f;
  f.joints = joint_placement(spec);
  f.bars = topology.bars;
  for (const auto& b : braces_list(pattern)) f.bars.push_back(brace_bar(topology, b));
  return f;
}

Eigen::MatrixXd build_rigidity_matrix(const Framework& framework, const Norm& norm) {
  const auto rows = static_cast<Eigen::Index>(framework.bars.size());
  const auto cols = static_cast<Eigen::Index>(2 * framework.joints.size());
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(rows, cols);
  for (Eigen::Index k = 0; k < rows; ++k) {
    const Bar& bar = framework.bars[static_cast<std::size_t>(k)];
    const Vec2 g = norm_gradient(norm, framework.joints[static_cast<std::size_t>(bar.a)] -
                                           framework.joints[static_cast<std::size_t>(bar.b)]);
    r(k, 2 * bar.a) = g.x;
    r(k, 2 * bar.a + 1) = g.y;
    r(k, 2 * bar.b) = -g.x;
    r(k, 2 * bar.b + 1) = -g.y;
  }
  return r;
}

int flex_space_dimension(const Eigen::MatrixXd& matrix, double tol) {
  const int rank = matrix.rows() == 0 ? 0 : numerical_rank(matrix, tol).rank;
  return static_cast<int>(matrix.cols()) - rank;
}

double flex_residual(const Eigen::MatrixXd& matrix, const std::vector<Vec2>& velocities) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(2 * velocities.size()));
  for (std::size_t k = 0; k < velocities.size(); ++k) {
    v(static_cast<Eigen::Index>(2 * k)) = velocities[k].x;
    v(static_cast<Eigen::Index>(2 * k + 1)) = velocities[k].y;
  }
  if (matrix.rows() == 0) return 0.0;
  return (matrix * v).cwiseAbs().maxCoeff();
}

RigidityDecision oracle_rigidity_decision(const GridSpec& spec, const BracingPattern& pattern, double tol) {
  const Eigen::MatrixXd r = build_rigidity_matrix(build_framework(spec, pattern), spec.norm);
  RigidityDecision d;
  d.method = "oracle";
  const NormClass cls = spec.norm.norm_class();
  const bool rotates = cls == NormClass::Euclidean || cls == NormClass::InnerProduct;
  d.branch = rotates ? "rigidity-matrix-with-rotation" : "rigidity-matrix";
  const NumericRank nr = r.rows() == 0 ? NumericRank{} : numerical_rank(r, tol);
  d.rank = nr.rank;
  d.threshold = nr.threshold;
  d.required = static_cast<int>(r.cols()) - (rotates ? 3 : 2);
  d.nullity = static_cast<int>(r.cols()) - nr.rank;
  d.verdict = d.rank >= d.required ? Verdict::Rigid : Verdict::Flexible;
  if (!d.rigid()) d.reason = "non-trivial infinitesimal flex";
  return d;
}

MatroidReport matroid_cross_check(const GridSpec& spec, double tol, int max_rows) {
  const BracingPattern full = BracingPattern::full(spec.m, spec.n);
  const auto braces = braces_list(full);
  const int k = static_cast<int>(braces.size());
  if (k > max_rows) {
    throw Error(ErrorCode::TooLarge, "maximal bracing has " + std::to_string(k) + " rows, limit " +
                                         std::to_string(max_rows));
  }

  const NormClass cls = spec.norm.norm_class();
  const bool graphic = cls == NormClass::Euclidean || cls == NormClass::InnerProduct;
  const StressSheerMatrix ss = assemble_stress_sheer(spec, full);
  const RationalMatrix exact = ss.exact();
  const Eigen::MatrixXd dense = ss.dense();
  const BracesGainGraph graph = graphic ? synthetic_braces_graph(spec.m, spec.n, braces, 1, 1)
                                        : build_braces_graph(spec, full, GainMode::Numeric);

  MatroidReport report;
  report.matroid = graphic ? "graphic" : "frame";
  report.rows = k;
  report.rank = frame_rank(graph, tol);
  report.subsets = std::uint64_t{1} << k;

  for (std::uint64_t mask = 0; mask < report.subsets; ++mask) {
    std::vector<int> rows;
    for (int r = 0; r < k; ++r) {
      if (mask >> r & 1U) rows.push_back(r);
    }
    int linear_rank = 0;
    if (!rows.empty()) {
      if (cls == NormClass::Euclidean) {
        RationalMatrix sub;
        for (int r : rows) sub.push_back(exact[static_cast<std::size_t>(r)]);
        linear_rank = exact_rank(std::move(sub));
      } else {
        Eigen::MatrixXd sub(static_cast<Eigen::Index>(rows.size()), dense.cols());
        for (std::size_t t = 0; t < rows.size(); ++t) sub.row(static_cast<Eigen::Index>(t)) = dense.row(rows[t]);
        linear_rank = numerical_rank(sub, tol).rank;
      }
    }
    const bool linear = linear_rank == static_cast<int>(rows.size());

    FrameForest forest(graph, tol);
    bool matroid = true;
    for (int r : rows) matroid = FrameForest::independent(forest.add(r)) && matroid;

    if (linear) ++report.independent_sets;
    if (linear && linear_rank == report.rank) ++report.linear_bases;
    if (matroid && forest.rank() == report.rank) ++report.matroid_bases;
    if (linear != matroid) report.mismatches.push_back({rows, linear, matroid});
  }
  return report;
}

BracingPattern pattern_from_code(int m, int n, std::uint64_t code, bool blue_only) {
  BracingPattern p(m, n);
  int cell = 0;
  for (int j = 1; j <= n; ++j) {
    for (int i = 1; i <= m; ++i, ++cell) {
      const std::uint64_t digit = blue_only ? (code >> cell & 1U) : (code >> (2 * cell) & 3U);
      p.set({i, j}, Colour::Blue, (digit & 1U) != 0);
      p.set({i, j}, Colour::Red, (digit & 2U) != 0);
    }
  }
  return p;
}

namespace {

std::optional<Verdict> attempt(auto&& decide) {
  try {
    return decide().verdict;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NonSmoothPoint || e.code() == ErrorCode::UnsupportedConfiguration ||
        e.code() == ErrorCode::DegenerateTangent) {
      return std::nullopt;
    }
    throw;
  }
}

}  // namespace

SweepReport exhaustive_pattern_sweep(const GridSpec& spec, double tol, bool blue_only) {
  const int cells = spec.m * spec.n;
  const int bits = blue_only ? cells : 2 * cells;
  if (bits >= 63 || (std::uint64_t{1} << bits) > kMaxSweepPatterns) {
    throw Error(ErrorCode::TooLarge, "sweep would visit more than 10^6 patterns");
  }
  SweepReport report;
  report.patterns = std::uint64_t{1} << bits;
  for (std::uint64_t code = 0; code < report.patterns; ++code) {
    const BracingPattern p = pattern_from_code(spec.m, spec.n, code, blue_only);
    SweepRecord rec;
    rec.code = code;
    rec.combinatorial = attempt([&] { return combinatorial_rigidity_decision(spec, p, tol); });
    rec.rank = attempt([&] { return rank_rigidity_decision(spec, p, tol); });
    rec.oracle = attempt([&] { return oracle_rigidity_decision(spec, p, tol); });
    auto rigid = [](const std::optional<Verdict>& v) { return v && *v == Verdict::Rigid; };
    report.rigid_combinatorial += rigid(rec.combinatorial);
    report.rigid_rank += rigid(rec.rank);
    report.rigid_oracle += rigid(rec.oracle);
    std::vector<Verdict> seen;
    for (const auto& v : {rec.combinatorial, rec.rank, rec.oracle}) {
      if (v) seen.push_back(*v);
    }
    if (seen.size() < 3) ++report.unavailable;
    if (std::adjacent_find(seen.begin(), seen.end(), std::not_equal_to<>()) != seen.end()) {
      rec.bracing = bracing_rows(p);
      report.disagreements.push_back(std::move(rec));
    }
  }
  return report;
}

}  // namespace gridrig
