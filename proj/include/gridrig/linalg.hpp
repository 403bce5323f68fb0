#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

namespace gridrig {

using Rational = boost::multiprecision::cpp_rational;
using RationalMatrix = std::vector<std::vector<Rational>>;

struct NumericRank {
  int rank = 0;
  double sigma_max = 0.0;
  double threshold = 0.0;  // tol * sigma_max
  std::vector<double> singular_values;
};

/// Counts singular values above tol * sigma_max.
NumericRank numerical_rank(const Eigen::MatrixXd& a, double tol);

/// Orthonormal basis of the numerical null space, one column per vector.
Eigen::MatrixXd null_space(const Eigen::MatrixXd& a, double tol);

/// Gaussian elimination over the rationals.
int exact_rank(RationalMatrix a);

}  // namespace gridrig
