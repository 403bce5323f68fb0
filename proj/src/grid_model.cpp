#include "gridrig/grid_model.hpp"

#include <algorithm>
#include <numbers>
#include <set>
#include <tuple>

#include "gridrig/error.hpp"
#include "json.hpp"

namespace gridrig {

using nlohmann::json;

std::string_view to_string(Colour c) { return c == Colour::Blue ? "blue" : "red"; }

bool brace_order_less(const Brace& a, const Brace& b) {
  return std::tuple(a.cell.j, a.cell.i, a.colour) < std::tuple(b.cell.j, b.cell.i, b.colour);
}

GridSpec GridSpec::uniform(int m, int n, Norm norm, double alpha, double cell_w, double cell_h) {
  GridSpec spec;
  spec.m = m;
  spec.n = n;
  spec.col_widths.assign(static_cast<std::size_t>(std::max(m, 0)), cell_w);
  spec.row_heights.assign(static_cast<std::size_t>(std::max(n, 0)), cell_h);
  spec.alpha = alpha;
  spec.norm = norm;
  validate(spec);
  return spec;
}

bool GridSpec::has_congruent_square_cells() const {
  const double side = col_widths.front();
  auto same = [side](double v) { return v == side; };
  return std::all_of(col_widths.begin(), col_widths.end(), same) &&
         std::all_of(row_heights.begin(), row_heights.end(), same);
}

void validate(const GridSpec& spec) {
  if (spec.m < 1 || spec.n < 1) throw Error(ErrorCode::MalformedDocument, "grid needs m >= 1 and n >= 1");
  if (spec.col_widths.size() != static_cast<std::size_t>(spec.m)) {
    throw Error(ErrorCode::DimensionMismatch, "col_widths must have m entries");
  }
  if (spec.row_heights.size() != static_cast<std::size_t>(spec.n)) {
    throw Error(ErrorCode::DimensionMismatch, "row_heights must have n entries");
  }
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!std::all_of(spec.col_widths.begin(), spec.col_widths.end(), positive) ||
      !std::all_of(spec.row_heights.begin(), spec.row_heights.end(), positive)) {
    throw Error(ErrorCode::MalformedDocument, "spacings must be positive");
  }
  if (!(std::isfinite(spec.alpha) && spec.alpha >= 0.0 && spec.alpha < std::numbers::pi / 2)) {
    throw Error(ErrorCode::MalformedDocument, "alpha must lie in [0, pi/2)");
  }
}

BracingPattern::BracingPattern(int m, int n)
    : m_(m), n_(n), bits_(static_cast<std::size_t>(m) * static_cast<std::size_t>(n), 0) {}

std::size_t BracingPattern::index(Cell c) const {
  if (c.i < 1 || c.i > m_ || c.j < 1 || c.j > n_) {
    throw Error(ErrorCode::DimensionMismatch, "cell outside the grid");
  }
  return static_cast<std::size_t>(c.j - 1) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(c.i - 1);
}

bool BracingPattern::has(Cell c, Colour colour) const {
  return (bits_[index(c)] >> static_cast<int>(colour)) & 1U;
}

void BracingPattern::set(Cell c, Colour colour, bool present) {
  const auto mask = static_cast<std::uint8_t>(1U << static_cast<int>(colour));
  auto& cell = bits_[index(c)];
  cell = present ? static_cast<std::uint8_t>(cell | mask) : static_cast<std::uint8_t>(cell & ~mask);
}

std::size_t BracingPattern::size() const {
  std::size_t count = 0;
  for (auto b : bits_) count += (b & 1U) + ((b >> 1) & 1U);
  return count;
}

BracingPattern BracingPattern::full(int m, int n) {
  BracingPattern p(m, n);
  std::fill(p.bits_.begin(), p.bits_.end(), 3);
  return p;
}

BracingPattern BracingPattern::from_braces(int m, int n, const std::vector<Brace>& braces) {
  BracingPattern p(m, n);
  for (const auto& b : braces) p.add(b);
  return p;
}

namespace {

const json& require(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw Error(ErrorCode::MalformedDocument, std::string("missing key '") + key + "'");
  return *it;
}

int read_dimension(const json& doc, const char* key) {
  const json& v = require(doc, key);
  if (!v.is_number_integer()) throw Error(ErrorCode::MalformedDocument, std::string(key) + " must be an integer");
  const auto value = v.get<long long>();
  if (value < 1 || value > 10000) throw Error(ErrorCode::MalformedDocument, std::string(key) + " out of range");
  return static_cast<int>(value);
}

double read_number(const json& v, const std::string& what, ErrorCode code) {
  if (!v.is_number()) throw Error(code, what + " must be a number");
  return v.get<double>();
}

std::vector<double> read_spacings(const json& doc, const char* key, int count) {
  auto it = doc.find(key);
  if (it == doc.end()) return std::vector<double>(static_cast<std::size_t>(count), 1.0);
  if (!it->is_array()) throw Error(ErrorCode::MalformedDocument, std::string(key) + " must be an array");
  if (it->size() != static_cast<std::size_t>(count)) {
    throw Error(ErrorCode::DimensionMismatch, std::string(key) + " has the wrong length");
  }
  std::vector<double> out;
  for (const auto& v : *it) out.push_back(read_number(v, key, ErrorCode::MalformedDocument));
  return out;
}

Norm read_norm(const json& v) {
  if (!v.is_object()) throw Error(ErrorCode::InvalidNorm, "norm must be an object");
  auto kind_it = v.find("kind");
  if (kind_it == v.end() || !kind_it->is_string()) throw Error(ErrorCode::InvalidNorm, "norm.kind missing");
  const auto kind = kind_it->get<std::string>();
  std::set<std::string> allowed{"kind"};
  if (kind == "p") allowed.insert("p");
  if (kind == "weighted_p") allowed.insert({"p", "a", "b"});
  for (const auto& [key, _] : v.items()) {
    if (!allowed.count(key)) throw Error(ErrorCode::InvalidNorm, "unexpected norm key '" + key + "'");
  }
  auto param = [&](const char* key) {
    auto it = v.find(key);
    if (it == v.end()) throw Error(ErrorCode::InvalidNorm, std::string("norm.") + key + " missing");
    return read_number(*it, std::string("norm.") + key, ErrorCode::InvalidNorm);
  };
  if (kind == "euclidean") return Norm::euclidean();
  if (kind == "linf") return Norm::linf();
  if (kind == "p") return Norm::p_norm(param("p"));
  if (kind == "weighted_p") return Norm::weighted_p(param("p"), param("a"), param("b"));
  throw Error(ErrorCode::InvalidNorm, "unknown norm kind '" + kind + "'");
}

json write_norm(const Norm& norm) {
  json out = json::object();
  out["kind"] = norm.kind();
  if (const auto* p = std::get_if<PNorm>(&norm.variant())) {
    out["p"] = p->p;
  } else if (const auto* w = std::get_if<WeightedPNorm>(&norm.variant())) {
    out["p"] = w->p;
    out["a"] = w->a;
    out["b"] = w->b;
  }
  return out;
}

}  // namespace

ParsedSpec parse_spec(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document.begin(), document.end());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedDocument, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::MalformedDocument, "document must be a JSON object");
  static const std::set<std::string> known{"m", "n", "col_widths", "row_heights", "alpha", "norm", "bracing"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.count(key)) throw Error(ErrorCode::MalformedDocument, "unknown key '" + key + "'");
  }

  ParsedSpec out;
  GridSpec& spec = out.spec;
  spec.m = read_dimension(doc, "m");
  spec.n = read_dimension(doc, "n");
  spec.col_widths = read_spacings(doc, "col_widths", spec.m);
  spec.row_heights = read_spacings(doc, "row_heights", spec.n);
  if (auto it = doc.find("alpha"); it != doc.end()) {
    spec.alpha = read_number(*it, "alpha", ErrorCode::MalformedDocument);
  }
  spec.norm = read_norm(require(doc, "norm"));
  validate(spec);

  const json& rows = require(doc, "bracing");
  if (!rows.is_array()) throw Error(ErrorCode::MalformedDocument, "bracing must be an array of strings");
  if (rows.size() != static_cast<std::size_t>(spec.n)) {
    throw Error(ErrorCode::DimensionMismatch, "bracing must have n rows");
  }
  out.pattern = BracingPattern(spec.m, spec.n);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!rows[r].is_string()) throw Error(ErrorCode::MalformedDocument, "bracing rows must be strings");
    const auto line = rows[r].get<std::string>();
    if (line.size() != static_cast<std::size_t>(spec.m)) {
      throw Error(ErrorCode::DimensionMismatch, "bracing row " + std::to_string(r) + " must have m characters");
    }
    const int j = spec.n - static_cast<int>(r);
    for (int i = 1; i <= spec.m; ++i) {
      const Cell cell{i, j};
      switch (line[static_cast<std::size_t>(i - 1)]) {
        case '.': break;
        case 'b':
        case '\\': out.pattern.set(cell, Colour::Blue); break;
        case 'r':
        case '/': out.pattern.set(cell, Colour::Red); break;
        case 'x':
          out.pattern.set(cell, Colour::Blue);
          out.pattern.set(cell, Colour::Red);
          break;
        default:
          throw Error(ErrorCode::UnknownBraceChar,
                      std::string("unexpected bracing character '") + line[static_cast<std::size_t>(i - 1)] + "'");
      }
    }
  }
  return out;
}

std::vector<std::string> bracing_rows(const BracingPattern& pattern) {
  std::vector<std::string> rows;
  for (int j = pattern.n(); j >= 1; --j) {
    std::string line;
    for (int i = 1; i <= pattern.m(); ++i) {
      const bool blue = pattern.has({i, j}, Colour::Blue);
      const bool red = pattern.has({i, j}, Colour::Red);
      line += blue && red ? 'x' : blue ? 'b' : red ? 'r' : '.';
    }
    rows.push_back(line);
  }
  return rows;
}

std::string serialize_spec(const GridSpec& spec, const BracingPattern& pattern) {
  nlohmann::ordered_json doc;
  doc["m"] = spec.m;
  doc["n"] = spec.n;
  doc["col_widths"] = spec.col_widths;
  doc["row_heights"] = spec.row_heights;
  doc["alpha"] = spec.alpha;
  doc["norm"] = write_norm(spec.norm);
  doc["bracing"] = bracing_rows(pattern);
  return doc.dump(2) + "\n";
}

GridTopology build_topology(int m, int n) {
  GridTopology t;
  t.m = m;
  t.n = n;
  t.vertical_lines = m + 1;
  t.horizontal_lines = n + 1;
  t.vertical_ribbons = m;
  t.horizontal_ribbons = n;
  t.joint_count = (m + 1) * (n + 1);
  for (int j = 1; j <= n; ++j) {
    for (int i = 1; i <= m; ++i) t.cells.push_back({i, j});
  }
  for (int h = 0; h <= n; ++h) {
    for (int v = 1; v <= m; ++v) t.bars.push_back({t.joint(v - 1, h), t.joint(v, h)});
  }
  for (int v = 0; v <= m; ++v) {
    for (int h = 1; h <= n; ++h) t.bars.push_back({t.joint(v, h - 1), t.joint(v, h)});
  }
  return t;
}

std::vector<Vec2> joint_placement(const GridSpec& spec) {
  const GridTopology t = build_topology(spec.m, spec.n);
  std::vector<Vec2> joints(static_cast<std::size_t>(t.joint_count));
  double y = 0.0;
  for (int h = 0; h <= spec.n; ++h) {
    if (h > 0) y += spec.cell_height(h);
    double x = 0.0;
    for (int v = 0; v <= spec.m; ++v) {
      if (v > 0) x += spec.cell_width(v);
      joints[static_cast<std::size_t>(t.joint(v, h))] = spec.alpha == 0.0 ? Vec2{x, y} : rotate({x, y}, spec.alpha);
    }
  }
  return joints;
}

Bar brace_bar(const GridTopology& topology, const Brace& brace) {
  const auto [i, j] = brace.cell;
  if (brace.colour == Colour::Blue) return {topology.joint(i - 1, j), topology.joint(i, j - 1)};
  return {topology.joint(i - 1, j - 1), topology.joint(i, j)};
}

std::vector<Brace> braces_list(const BracingPattern& pattern, bool max) {
  std::vector<Brace> out;
  for (int j = 1; j <= pattern.n(); ++j) {
    for (int i = 1; i <= pattern.m(); ++i) {
      for (Colour c : {Colour::Blue, Colour::Red}) {
        if (max || pattern.has({i, j}, c)) out.push_back({{i, j}, c});
      }
    }
  }
  return out;
}

}  // namespace gridrig
