#include "gridrig/linalg.hpp"

#include <algorithm>

namespace gridrig {

NumericRank numerical_rank(const Eigen::MatrixXd& a, double tol) {
  NumericRank out;
  if (a.rows() == 0 || a.cols() == 0) return out;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& sv = svd.singularValues();
  out.singular_values.assign(sv.data(), sv.data() + sv.size());
  out.sigma_max = sv.size() > 0 ? sv(0) : 0.0;
  out.threshold = tol * out.sigma_max;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > out.threshold) ++out.rank;
  }
  return out;
}

Eigen::MatrixXd null_space(const Eigen::MatrixXd& a, double tol) {
  const Eigen::Index cols = a.cols();
  if (a.rows() == 0) return Eigen::MatrixXd::Identity(cols, cols);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const int rank = numerical_rank(a, tol).rank;
  return svd.matrixV().rightCols(cols - rank);
}

int exact_rank(RationalMatrix a) {
  const std::size_t rows = a.size();
  if (rows == 0) return 0;
  const std::size_t cols = a.front().size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (a[r][c] == 0) continue;
      const Rational factor = a[r][c] / a[rank][c];
      for (std::size_t k = c; k < cols; ++k) a[r][k] -= factor * a[rank][k];
    }
    ++rank;
  }
  return static_cast<int>(rank);
}

}  // namespace gridrig
