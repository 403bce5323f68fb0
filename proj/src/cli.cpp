#include "gridrig/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "gridrig/error.hpp"
#include "gridrig/gain_graph.hpp"
#include "gridrig/grid_model.hpp"
#include "gridrig/oracle.hpp"
#include "gridrig/stress_sheer.hpp"
#include "gridrig/svg.hpp"

namespace gridrig::cli {

namespace {

using json = nlohmann::ordered_json;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double r6(double x) { return std::round(x * 1e6) / 1e6 + 0.0; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content) || !out.flush()) throw IoError("cannot write " + path);
}

double resolve_tolerance(const std::optional<double>& flag) {
  double tol = kDefaultTolerance;
  if (flag) {
    tol = *flag;
  } else if (const char* env = std::getenv("GRIDRIG_TOL"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    tol = std::strtod(env, &end);
    if (end == env || *end != '\0') throw UsageError(std::string("GRIDRIG_TOL is not a number: ") + env);
  }
  if (!(tol > 0.0) || !std::isfinite(tol)) throw UsageError("tolerance must be positive");
  return tol;
}

std::string vertex_name(int m, int x) { return x < m ? "v" + std::to_string(x + 1) : "w" + std::to_string(x - m + 1); }

std::string brace_label(const Brace& b) {
  return std::string(b.colour == Colour::Blue ? "B" : "R") + "(" + std::to_string(b.cell.i) + "," +
         std::to_string(b.cell.j) + ")";
}

json grid_json(const GridSpec& spec, const BracingPattern& pattern) {
  return {{"m", spec.m},
          {"n", spec.n},
          {"norm", spec.norm.describe()},
          {"alpha", spec.alpha},
          {"braces", pattern.size()}};
}

json decision_json(const RigidityDecision& d) {
  json j = {{"method", d.method}, {"verdict", to_string(d.verdict)}, {"branch", d.branch},
            {"rank", d.rank},     {"required", d.required},            {"threshold", d.threshold},
            {"exceptional", d.exceptional}};
  if (d.nullity) j["nullity"] = *d.nullity;
  if (!d.reason.empty()) j["reason"] = d.reason;
  return j;
}

std::vector<std::pair<double, double>> cell_shapes(const GridSpec& spec) {
  std::vector<std::pair<double, double>> shapes;
  for (int j = 1; j <= spec.n; ++j) {
    for (int i = 1; i <= spec.m; ++i) {
      const std::pair<double, double> s{spec.cell_width(i), spec.cell_height(j)};
      if (std::find(shapes.begin(), shapes.end(), s) == shapes.end()) shapes.push_back(s);
    }
  }
  return shapes;
}

json lambda_table(const GridSpec& spec) {
  json table = json::array();
  for (int j = 1; j <= spec.n; ++j) {
    for (int i = 1; i <= spec.m; ++i) {
      const CellBraceParams bp = brace_parameters(spec.norm, spec.alpha, spec.cell_width(i), spec.cell_height(j));
      table.push_back({{"cell", {i, j}}, {"lambda", bp.lambda}, {"lambda_prime", bp.lambda_prime}});
    }
  }
  return table;
}

json explanation(const GridSpec& spec, const BracingPattern& pattern, double tol) {
  const NormClass cls = spec.norm.norm_class();
  json j;
  if (cls == NormClass::Euclidean || cls == NormClass::InnerProduct) {
    const auto g = BipartiteGraph::from_pattern(pattern);
    const auto label = g.components();
    const int count = *std::max_element(label.begin(), label.end()) + 1;
    j["kind"] = "braces-graph-components";
    j["components"] = json::array();
    for (int c = 0; c < count; ++c) {
      json ribbons = json::array();
      for (std::size_t x = 0; x < label.size(); ++x) {
        if (label[x] == c) ribbons.push_back(vertex_name(spec.m, static_cast<int>(x)));
      }
      j["components"].push_back(ribbons);
    }
    return j;
  }
  if (cls == NormClass::LInfinity && spec.alpha == 0.0 && spec.has_congruent_square_cells()) {
    j["kind"] = "ribbon-colours";
    j["ribbons"] = json::array();
    for (int x = 0; x < spec.m + spec.n; ++x) {
      bool blue = false;
      bool red = false;
      for (const auto& b : braces_list(pattern)) {
        if ((x < spec.m && b.cell.i == x + 1) || (x >= spec.m && b.cell.j == x - spec.m + 1)) {
          (b.colour == Colour::Blue ? blue : red) = true;
        }
      }
      j["ribbons"].push_back({{"ribbon", vertex_name(spec.m, x)}, {"blue", blue}, {"red", red}});
    }
    return j;
  }
  const BracesGainGraph graph = build_braces_graph(spec, pattern, GainMode::Numeric);
  const ForestCertificate cert = independent_forest_decision(graph, tol);
  auto labels = [&](const std::vector<int>& edges) {
    json a = json::array();
    for (int e : edges) a.push_back(brace_label(graph.edges[static_cast<std::size_t>(e)].brace));
    return a;
  };
  j["kind"] = "cycle-rooted-forest";
  j["independent"] = cert.independent;
  j["components"] = json::array();
  for (const auto& comp : cert.components) {
    json c;
    c["ribbons"] = json::array();
    for (int x : comp.vertices) c["ribbons"].push_back(vertex_name(spec.m, x));
    c["braces"] = labels(comp.edges);
    c["cycle"] = labels(comp.cycle);
    c["pinned"] = comp.pinned;
    if (comp.cycle_gain) c["cycle_gain"] = r6(std::exp(comp.cycle_gain->log_gain));
    j["components"].push_back(c);
  }
  if (!cert.independent) {
    j["offence"] = cert.offence;
    j["offending"] = labels(cert.offending);
  }
  return j;
}

void write_list(std::ostream& out, const std::vector<double>& xs) {
  out << "[";
  for (std::size_t k = 0; k < xs.size(); ++k) out << (k ? ", " : "") << fixed6(xs[k]);
  out << "]";
}

std::string witness_document(const GridSpec& spec, const BracingPattern& pattern, const FlexWitness& w) {
  std::ostringstream out;
  out << "{\n  \"d_horizontal\": ";
  write_list(out, w.coefficients.d_horizontal);
  out << ",\n  \"d_vertical\": ";
  write_list(out, w.coefficients.d_vertical);
  out << ",\n  \"s_horizontal\": ";
  write_list(out, w.sheer.s_horizontal);
  out << ",\n  \"s_vertical\": ";
  write_list(out, w.sheer.s_vertical);
  out << ",\n  \"velocities\": [";
  for (std::size_t k = 0; k < w.velocities.size(); ++k) {
    out << (k ? ",\n    " : "\n    ") << "[" << fixed6(w.velocities[k].x) << ", " << fixed6(w.velocities[k].y) << "]";
  }
  out << "\n  ],\n  \"annihilates_rigidity_matrix\": ";
  try {
    const auto r = build_rigidity_matrix(build_framework(spec, pattern), spec.norm);
    out << (flex_residual(r, w.velocities) < 1e-8 ? "true" : "false");
  } catch (const Error&) {
    out << "null";
  }
  out << "\n}\n";
  return out.str();
}

struct AnalyzeArgs {
  std::string path;
  std::string method = "all";
  std::optional<double> tol;
  std::string expect;
  bool explain = false;
  std::string flex_out;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
  const double tol = resolve_tolerance(a.tol);
  const ParsedSpec parsed = parse_spec(read_file(a.path));
  const GridSpec& spec = parsed.spec;
  const BracingPattern& pattern = parsed.pattern;

  std::vector<std::string> methods;
  if (a.method == "all") {
    methods = {"combinatorial", "rank", "oracle"};
  } else {
    methods = {a.method};
  }

  json report;
  report["command"] = "analyze";
  report["spec"] = a.path;
  report["grid"] = grid_json(spec, pattern);
  report["results"] = json::array();
  std::vector<Verdict> verdicts;
  for (const auto& m : methods) {
    try {
      RigidityDecision d;
      if (m == "combinatorial") {
        d = combinatorial_rigidity_decision(spec, pattern, tol);
      } else if (m == "rank") {
        d = rank_rigidity_decision(spec, pattern, tol);
      } else {
        d = oracle_rigidity_decision(spec, pattern, tol);
      }
      verdicts.push_back(d.verdict);
      report["results"].push_back(decision_json(d));
    } catch (const Error& e) {
      if (methods.size() == 1) throw;
      report["results"].push_back({{"method", m}, {"error", e.what()}});
    }
  }
  if (verdicts.empty()) throw Error(ErrorCode::UnsupportedConfiguration, "no decision method applies");
  const bool agree = std::all_of(verdicts.begin(), verdicts.end(), [&](Verdict v) { return v == verdicts[0]; });
  if (methods.size() > 1) report["agreement"] = agree;
  report["verdict"] = agree ? json(to_string(verdicts[0])) : json("disagreement");

  report["exceptional"] = std::any_of(report["results"].begin(), report["results"].end(), [](const json& r) {
    return r.value("exceptional", false);
  });
  try {
    report["lambda"] = lambda_table(spec);
  } catch (const Error&) {
    report["lambda"] = nullptr;
  }
  if (a.explain) {
    try {
      report["explanation"] = explanation(spec, pattern, tol);
    } catch (const Error& e) {
      report["explanation"] = {{"error", e.what()}};
    }
  }

  const bool flexible = agree && verdicts[0] == Verdict::Flexible;
  if (!a.flex_out.empty()) {
    if (flexible) {
      write_file(a.flex_out, witness_document(spec, pattern, flex_witness(spec, pattern, tol)));
      report["witness"] = a.flex_out;
    } else {
      report["witness"] = nullptr;
    }
  }

  out << report.dump(2) << "\n";
  err << "analyze: " << report["verdict"].get<std::string>();
  for (const auto& r : report["results"]) {
    err << " [" << r["method"].get<std::string>() << ": "
        << (r.contains("verdict") ? r["verdict"].get<std::string>() : "unavailable") << "]";
  }
  err << "\n";

  if (!a.expect.empty()) {
    const std::string got = report["verdict"].get<std::string>();
    if (got != a.expect) {
      err << "expected " << a.expect << ", got " << got << "\n";
      return kExitMismatch;
    }
  }
  return kExitOk;
}

struct RenderArgs {
  std::string path;
  std::string output;
  bool flex = false;
  double scale = 0.5;
  std::optional<double> tol;
};

int cmd_render(const RenderArgs& a, std::ostream& out, std::ostream& err) {
  const double tol = resolve_tolerance(a.tol);
  const ParsedSpec parsed = parse_spec(read_file(a.path));
  std::optional<std::vector<Vec2>> velocities;
  if (a.flex) velocities = flex_witness(parsed.spec, parsed.pattern, tol).velocities;
  SvgOptions options;
  options.arrow_scale = a.scale;
  write_file(a.output, render_svg(parsed.spec, parsed.pattern, velocities, options));
  json report = {{"command", "render"}, {"spec", a.path}, {"output", a.output}, {"flex", a.flex}};
  out << report.dump(2) << "\n";
  err << "render: wrote " << a.output << "\n";
  return kExitOk;
}

struct ParamsArgs {
  std::string path;
  std::string sweep;
  bool find_exceptional = false;
  double step = std::numbers::pi / 360;
  double root_tol = 1e-12;
};

std::vector<double> sweep_points(const std::string& text) {
  double start = 0.0, stop = 0.0, step = 0.0;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || !in.eof()) {
    throw UsageError("--sweep expects start:stop:step");
  }
  if (!(step > 0.0) || stop < start) throw UsageError("--sweep needs step > 0 and stop >= start");
  const double count = std::floor((stop - start) / step + 1e-9) + 1;
  if (count > 1e6) throw UsageError("--sweep has more than 10^6 samples");
  std::vector<double> xs;
  for (int k = 0; k < static_cast<int>(count); ++k) xs.push_back(start + k * step);
  return xs;
}

int cmd_params(const ParamsArgs& a, std::ostream& out, std::ostream& err) {
  const ParsedSpec parsed = parse_spec(read_file(a.path));
  const GridSpec& spec = parsed.spec;
  const std::vector<double> alphas = a.sweep.empty() ? std::vector<double>{spec.alpha} : sweep_points(a.sweep);
  if (!(a.step > 0.0)) throw UsageError("--step must be positive");

  json report;
  report["command"] = "params";
  report["spec"] = a.path;
  report["norm"] = spec.norm.describe();
  report["cells"] = json::array();
  for (auto [w, h] : cell_shapes(spec)) {
    json cell = {{"cell_width", w}, {"cell_height", h}};
    json table = json::array();
    for (double alpha : alphas) {
      const CellBraceParams bp = brace_parameters(spec.norm, alpha, w, h);
      table.push_back({{"alpha", alpha}, {"lambda", bp.lambda}, {"lambda_prime", bp.lambda_prime}});
    }
    cell["table"] = table;
    if (a.find_exceptional) {
      const ExceptionalScan scan = find_exceptional_inclinations(spec.norm, w, h, a.step, a.root_tol);
      if (scan.identically_exceptional) {
        cell["exceptional"] = "identically-exceptional";
      } else {
        cell["exceptional"] = scan.roots;
      }
      err << "params: " << w << "x" << h << " cell: "
          << (scan.identically_exceptional ? std::string("identically-exceptional")
                                           : std::to_string(scan.roots.size()) + " exceptional inclination(s)")
          << "\n";
    }
    report["cells"].push_back(cell);
  }
  out << report.dump(2) << "\n";
  return kExitOk;
}

struct GenerateArgs {
  int m = 0;
  int n = 0;
  std::string norm = "euclidean";
  double p = 2.0;
  double a = 1.0;
  double b = 1.0;
  double alpha = 0.0;
  double cell_width = 1.0;
  double cell_height = 1.0;
  std::optional<std::uint64_t> seed;
  std::string output;
  std::optional<double> tol;
};

int cmd_generate(const GenerateArgs& g, std::ostream& out, std::ostream& err) {
  const double tol = resolve_tolerance(g.tol);
  Norm norm = Norm::euclidean();
  if (g.norm == "p") {
    norm = Norm::p_norm(g.p);
  } else if (g.norm == "weighted_p") {
    norm = Norm::weighted_p(g.p, g.a, g.b);
  } else if (g.norm == "linf") {
    norm = Norm::linf();
  }
  const GridSpec spec = GridSpec::uniform(g.m, g.n, norm, g.alpha, g.cell_width, g.cell_height);
  validate(spec);
  const BracingPattern pattern = greedy_isostatic_bracing(spec, g.seed, tol);
  const std::string doc = serialize_spec(spec, pattern);
  if (g.output.empty()) {
    out << doc;
  } else {
    write_file(g.output, doc);
    out << json{{"command", "generate"}, {"output", g.output}, {"braces", pattern.size()}}.dump(2) << "\n";
  }
  err << "generate: " << pattern.size() << " braces\n";
  return kExitOk;
}

struct SweepArgs {
  std::string path;
  bool blue_only = false;
  std::optional<double> tol;
};

json verdict_or_null(const std::optional<Verdict>& v) { return v ? json(to_string(*v)) : json(nullptr); }

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  const double tol = resolve_tolerance(a.tol);
  const ParsedSpec parsed = parse_spec(read_file(a.path));
  const SweepReport r = exhaustive_pattern_sweep(parsed.spec, tol, a.blue_only);
  for (const auto& d : r.disagreements) {
    out << json{{"record", "disagreement"},
                {"code", d.code},
                {"bracing", d.bracing},
                {"combinatorial", verdict_or_null(d.combinatorial)},
                {"rank", verdict_or_null(d.rank)},
                {"oracle", verdict_or_null(d.oracle)}}
               .dump()
        << "\n";
  }
  out << json{{"record", "summary"},
              {"patterns", r.patterns},
              {"rigid", {{"combinatorial", r.rigid_combinatorial}, {"rank", r.rigid_rank}, {"oracle", r.rigid_oracle}}},
              {"unavailable", r.unavailable},
              {"disagreements", r.disagreements.size()}}
             .dump()
      << "\n";
  err << "sweep: " << r.patterns << " patterns, " << r.disagreements.size() << " disagreements\n";
  return r.disagreements.empty() ? kExitOk : kExitMismatch;
}

struct MatroidArgs {
  std::string path;
  int max_rows = 12;
  std::optional<double> tol;
};

int cmd_matroid_check(const MatroidArgs& a, std::ostream& out, std::ostream& err) {
  const double tol = resolve_tolerance(a.tol);
  const ParsedSpec parsed = parse_spec(read_file(a.path));
  const MatroidReport r = matroid_cross_check(parsed.spec, tol, a.max_rows);
  const auto braces = braces_list(BracingPattern::full(parsed.spec.m, parsed.spec.n));
  for (const auto& mm : r.mismatches) {
    json rows = json::array();
    for (int k : mm.rows) rows.push_back(brace_label(braces[static_cast<std::size_t>(k)]));
    out << json{{"record", "mismatch"},
                {"rows", rows},
                {"linear_independent", mm.linear_independent},
                {"matroid_independent", mm.matroid_independent}}
               .dump()
        << "\n";
  }
  out << json{{"record", "summary"},     {"matroid", r.matroid},
              {"rows", r.rows},          {"rank", r.rank},
              {"subsets", r.subsets},    {"independent_sets", r.independent_sets},
              {"linear_bases", r.linear_bases}, {"matroid_bases", r.matroid_bases},
              {"mismatches", r.mismatches.size()}}
             .dump()
      << "\n";
  err << "matroid-check: " << r.subsets << " subsets, " << r.mismatches.size() << " mismatches\n";
  return r.mismatches.empty() ? kExitOk : kExitMismatch;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Infinitesimal rigidity of braced grids under planar norms", "gridrig"};
  app.require_subcommand(1);

  AnalyzeArgs analyze;
  auto* an = app.add_subcommand("analyze", "Decide rigidity of a spec");
  an->add_option("spec", analyze.path, "Spec document")->required();
  an->add_option("--method", analyze.method)->check(CLI::IsMember({"combinatorial", "rank", "oracle", "all"}));
  an->add_option("--tol", analyze.tol);
  an->add_option("--expect", analyze.expect)->check(CLI::IsMember({"rigid", "flexible"}));
  an->add_flag("--explain", analyze.explain);
  an->add_option("--flex-out", analyze.flex_out, "Write a flex witness here when flexible");

  RenderArgs render;
  auto* re = app.add_subcommand("render", "Draw a spec as SVG");
  re->add_option("spec", render.path)->required();
  re->add_option("-o,--output", render.output)->required();
  re->add_flag("--flex", render.flex, "Overlay the flex witness");
  re->add_option("--scale", render.scale, "Arrow length per unit velocity");
  re->add_option("--tol", render.tol);

  ParamsArgs params;
  auto* pa = app.add_subcommand("params", "Brace parameters against the inclination");
  pa->add_option("spec", params.path)->required();
  pa->add_option("--sweep", params.sweep, "start:stop:step");
  pa->add_flag("--find-exceptional", params.find_exceptional);
  pa->add_option("--step", params.step, "Scan step for --find-exceptional");
  pa->add_option("--root-tol", params.root_tol);

  GenerateArgs gen;
  auto* ge = app.add_subcommand("generate", "Emit a spec with a greedy isostatic bracing");
  ge->add_option("--m", gen.m)->required()->check(CLI::PositiveNumber);
  ge->add_option("--n", gen.n)->required()->check(CLI::PositiveNumber);
  ge->add_option("--norm", gen.norm)->check(CLI::IsMember({"euclidean", "p", "weighted_p", "linf"}));
  ge->add_option("--p", gen.p);
  ge->add_option("--a", gen.a);
  ge->add_option("--b", gen.b);
  ge->add_option("--alpha", gen.alpha);
  ge->add_option("--cell-width", gen.cell_width);
  ge->add_option("--cell-height", gen.cell_height);
  ge->add_option("--seed", gen.seed);
  ge->add_option("-o,--output", gen.output);
  ge->add_option("--tol", gen.tol);

  SweepArgs sweep;
  auto* sw = app.add_subcommand("sweep", "Run every decision on every pattern of the grid");
  sw->add_option("spec", sweep.path)->required();
  sw->add_flag("--blue-only", sweep.blue_only);
  sw->add_option("--tol", sweep.tol);

  MatroidArgs matroid;
  auto* mc = app.add_subcommand("matroid-check", "Compare row-subset independence with the braces-graph matroid");
  mc->add_option("spec", matroid.path)->required();
  mc->add_option("--max-rows", matroid.max_rows);
  mc->add_option("--tol", matroid.tol);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (an->parsed()) return cmd_analyze(analyze, out, err);
    if (re->parsed()) return cmd_render(render, out, err);
    if (pa->parsed()) return cmd_params(params, out, err);
    if (ge->parsed()) return cmd_generate(gen, out, err);
    if (sw->parsed()) return cmd_sweep(sweep, out, err);
    return cmd_matroid_check(matroid, out, err);
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace gridrig::cli
