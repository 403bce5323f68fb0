#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gridrig/norms.hpp"

namespace gridrig {

/// Blue braces run along the "\" diagonal of a cell, red along "/".
enum class Colour : std::uint8_t { Blue = 0, Red = 1 };

std::string_view to_string(Colour c);

/// Cell (i, j): column i in 1..m from the left, row j in 1..n from the bottom.
struct Cell {
  int i = 1;
  int j = 1;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct Brace {
  Cell cell;
  Colour colour = Colour::Blue;
  friend bool operator==(const Brace&, const Brace&) = default;
};

/// Ordering used for braces_list: by row, then column, then Blue before Red.
bool brace_order_less(const Brace& a, const Brace& b);

struct GridSpec {
  int m = 1;
  int n = 1;
  std::vector<double> col_widths;   // m entries
  std::vector<double> row_heights;  // n entries
  double alpha = 0.0;
  Norm norm = Norm::euclidean();

  /// Unit spacings, given inclination and norm.
  static GridSpec uniform(int m, int n, Norm norm, double alpha = 0.0, double cell_w = 1.0, double cell_h = 1.0);

  double cell_width(int i) const { return col_widths[static_cast<std::size_t>(i - 1)]; }
  double cell_height(int j) const { return row_heights[static_cast<std::size_t>(j - 1)]; }
  /// True when every cell is a square of the same size.
  bool has_congruent_square_cells() const;
};

/// Throws on violated GridSpec invariants.
void validate(const GridSpec& spec);

class BracingPattern {
 public:
  BracingPattern() = default;
  BracingPattern(int m, int n);

  int m() const { return m_; }
  int n() const { return n_; }
  bool has(Cell c, Colour colour) const;
  void set(Cell c, Colour colour, bool present = true);
  void add(const Brace& b) { set(b.cell, b.colour, true); }
  void remove(const Brace& b) { set(b.cell, b.colour, false); }
  std::size_t size() const;

  /// Pattern with both braces in every cell.
  static BracingPattern full(int m, int n);
  /// Pattern holding exactly the given braces.
  static BracingPattern from_braces(int m, int n, const std::vector<Brace>& braces);

  friend bool operator==(const BracingPattern&, const BracingPattern&) = default;

 private:
  std::size_t index(Cell c) const;
  int m_ = 0;
  int n_ = 0;
  std::vector<std::uint8_t> bits_;  // bit 0 blue, bit 1 red
};

struct ParsedSpec {
  GridSpec spec;
  BracingPattern pattern;
};

ParsedSpec parse_spec(std::string_view document);
std::string serialize_spec(const GridSpec& spec, const BracingPattern& pattern);
/// The "bracing" rows, top row first.
std::vector<std::string> bracing_rows(const BracingPattern& pattern);

struct Bar {
  int a;
  int b;
  friend bool operator==(const Bar&, const Bar&) = default;
};

struct GridTopology {
  int m = 0;
  int n = 0;
  int vertical_lines = 0;       // m + 1, indexed 0..m left to right
  int horizontal_lines = 0;     // n + 1, indexed 0..n bottom to top
  int vertical_ribbons = 0;     // m, ribbon i between vertical lines i-1 and i
  int horizontal_ribbons = 0;   // n, ribbon j between horizontal lines j-1 and j
  int joint_count = 0;          // (m+1)(n+1)
  std::vector<Cell> cells;      // row-major from the bottom
  std::vector<Bar> bars;        // horizontal bars first, then vertical

  int ribbon_count() const { return vertical_ribbons + horizontal_ribbons; }
  int line_count() const { return vertical_lines + horizontal_lines; }
  /// Joint on vertical line v and horizontal line h.
  int joint(int v, int h) const { return h * (m + 1) + v; }
  /// (vertical ribbon, horizontal ribbon) of a cell.
  std::pair<int, int> ribbons_of(Cell c) const { return {c.i, c.j}; }
};

GridTopology build_topology(int m, int n);

/// Joint positions indexed as GridTopology::joint, south-west joint at the origin.
std::vector<Vec2> joint_placement(const GridSpec& spec);

/// The two joints a brace connects: Blue top-left to bottom-right, Red
/// bottom-left to top-right.
Bar brace_bar(const GridTopology& topology, const Brace& brace);

std::vector<Brace> braces_list(const BracingPattern& pattern, bool max = false);

}  // namespace gridrig
