#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace gridrig {

enum class Verdict { Rigid, Flexible };

inline std::string_view to_string(Verdict v) { return v == Verdict::Rigid ? "rigid" : "flexible"; }

/// Outcome of one of the three decision routes (combinatorial, rank, oracle).
struct RigidityDecision {
  Verdict verdict = Verdict::Flexible;
  std::string method;  // "combinatorial", "rank" or "oracle"
  std::string branch;  // which criterion was applied
  int rank = 0;        // achieved rank of the matrix or matroid
  int required = 0;    // rank needed for rigidity
  double threshold = 0.0;
  bool exceptional = false;
  std::string reason;
  std::optional<int> nullity;  // oracle only

  bool rigid() const { return verdict == Verdict::Rigid; }
};

}  // namespace gridrig
